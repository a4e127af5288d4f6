#include "jep/dfa.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "jep/errors.hpp"

namespace jep {

const std::string kHashToken = "#";

Dfa::Dfa(LabelSetPtr alphabet, int states, int start, std::vector<bool> accepting,
         std::vector<std::vector<int>> delta)
    : alphabet_(std::move(alphabet)),
      start_(start),
      accepting_(std::move(accepting)),
      delta_(std::move(delta)) {
    if (states < 1) throw JepError("automaton needs at least one state");
    if (static_cast<int>(accepting_.size()) != states ||
        static_cast<int>(delta_.size()) != states)
        throw JepError("state count mismatch");
    if (start_ < 0 || start_ >= states) throw JepError("start state out of range");
    for (const auto& row : delta_) {
        if (static_cast<int>(row.size()) != alphabet_->size())
            throw JepError("transition table must be total");
        for (int t : row)
            if (t < 0 || t >= states) throw JepError("transition target out of range");
    }
}

bool Dfa::accepts(const Word& w) const { return accepting_[dfa_run(*this, w)]; }

int dfa_run(const Dfa& a, const Word& w) {
    int state = a.start();
    for (int symbol : w) {
        if (symbol < 0 || symbol >= a.alphabet()->size())
            throw AlphabetError("symbol index " + std::to_string(symbol) +
                                " outside the alphabet");
        state = a.step(state, symbol);
    }
    return state;
}

Dfa dfa_product(const Dfa& a, const Dfa& b, BoolOp op) {
    require_same_labels(*a.alphabet(), *b.alphabet(), "dfa_product");
    const int k = a.alphabet()->size();
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int sa, int sb) {
        auto [it, fresh] = ids.emplace(std::make_pair(sa, sb), static_cast<int>(states.size()));
        if (fresh) states.emplace_back(sa, sb);
        return it->second;
    };
    intern(a.start(), b.start());
    std::vector<std::vector<int>> delta;
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto [sa, sb] = states[i];
        std::vector<int> row(k);
        for (int s = 0; s < k; ++s) row[s] = intern(a.step(sa, s), b.step(sb, s));
        delta.push_back(std::move(row));
    }
    std::vector<bool> accepting(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto [sa, sb] = states[i];
        accepting[i] = op == BoolOp::And ? (a.accepting(sa) && b.accepting(sb))
                                         : (a.accepting(sa) || b.accepting(sb));
    }
    return Dfa(a.alphabet(), static_cast<int>(states.size()), 0, std::move(accepting),
               std::move(delta));
}

Dfa dfa_complement(const Dfa& a) {
    std::vector<bool> accepting(a.state_count());
    for (int s = 0; s < a.state_count(); ++s) accepting[s] = !a.accepting(s);
    return Dfa(a.alphabet(), a.state_count(), a.start(), std::move(accepting), a.delta());
}

Dfa dfa_trim(const Dfa& a) {
    const int k = a.alphabet()->size();
    std::vector<int> id(a.state_count(), -1);
    std::vector<int> order;
    id[a.start()] = 0;
    order.push_back(a.start());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int s = 0; s < k; ++s) {
            int t = a.step(order[i], s);
            if (id[t] == -1) {
                id[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    std::vector<std::vector<int>> delta(order.size(), std::vector<int>(k));
    std::vector<bool> accepting(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        accepting[i] = a.accepting(order[i]);
        for (int s = 0; s < k; ++s) delta[i][s] = id[a.step(order[i], s)];
    }
    return Dfa(a.alphabet(), static_cast<int>(order.size()), 0, std::move(accepting),
               std::move(delta));
}

std::optional<Word> dfa_empty_witness(const Dfa& a) {
    const int k = a.alphabet()->size();
    std::vector<std::pair<int, int>> parent(a.state_count(), {-1, -1});  // (state, symbol)
    std::vector<bool> seen(a.state_count(), false);
    std::queue<int> queue;
    seen[a.start()] = true;
    queue.push(a.start());
    // BFS expanding symbols in ascending order discovers, for every state,
    // the lexicographically least among its shortest paths
    while (!queue.empty()) {
        int state = queue.front();
        queue.pop();
        if (a.accepting(state)) {
            Word w;
            for (int cur = state; parent[cur].first != -1; cur = parent[cur].first)
                w.push_back(parent[cur].second);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (int s = 0; s < k; ++s) {
            int t = a.step(state, s);
            if (!seen[t]) {
                seen[t] = true;
                parent[t] = {state, s};
                queue.push(t);
            }
        }
    }
    return std::nullopt;
}

Dfa sup_dfa(const Word& w, LabelSetPtr alphabet) {
    const int k = alphabet->size();
    for (int symbol : w)
        if (symbol < 0 || symbol >= k)
            throw AlphabetError("pattern symbol outside the alphabet");
    const int n = static_cast<int>(w.size());
    std::vector<std::vector<int>> delta(n + 1, std::vector<int>(k));
    for (int i = 0; i <= n; ++i)
        for (int s = 0; s < k; ++s)
            delta[i][s] = (i < n && w[i] == s) ? i + 1 : i;
    std::vector<bool> accepting(n + 1, false);
    accepting[n] = true;
    return Dfa(std::move(alphabet), n + 1, 0, std::move(accepting), std::move(delta));
}

Dfa forb_dfa(const std::vector<Word>& forbidden, LabelSetPtr alphabet) {
    Dfa result = [&] {
        // all-accepting single state
        std::vector<std::vector<int>> delta(1, std::vector<int>(alphabet->size(), 0));
        return Dfa(alphabet, 1, 0, {true}, std::move(delta));
    }();
    for (const Word& f : forbidden)
        result = dfa_product(result, dfa_complement(sup_dfa(f, alphabet)), BoolOp::And);
    return dfa_trim(result);
}

Dfa hash_pair_dfa(const Dfa& a, const Dfa& b) {
    require_same_labels(*a.alphabet(), *b.alphabet(), "hash_pair_dfa");
    LabelSetPtr alphabet = a.alphabet()->with_extra(kHashToken);
    const int k = a.alphabet()->size();
    const int hash = k;
    const int na = a.state_count();
    const int nb = b.state_count();
    const int dead = na + nb;
    auto a_id = [&](int s) { return s; };
    auto b_id = [&](int s) { return na + s; };
    std::vector<std::vector<int>> delta(na + nb + 1, std::vector<int>(k + 1, dead));
    for (int s = 0; s < na; ++s) {
        for (int sym = 0; sym < k; ++sym) delta[a_id(s)][sym] = a_id(a.step(s, sym));
        delta[a_id(s)][hash] = a.accepting(s) ? b_id(b.start()) : dead;
    }
    for (int s = 0; s < nb; ++s)
        for (int sym = 0; sym < k; ++sym) delta[b_id(s)][sym] = b_id(b.step(s, sym));
    std::vector<bool> accepting(na + nb + 1, false);
    for (int s = 0; s < nb; ++s) accepting[b_id(s)] = b.accepting(s);
    return Dfa(std::move(alphabet), na + nb + 1, a_id(a.start()), std::move(accepting),
               std::move(delta));
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Dfa parse_dfa(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    LabelSetPtr alphabet;
    int states = -1, start = -1;
    std::vector<bool> accepting;
    std::vector<std::vector<int>> delta;
    std::vector<std::vector<bool>> filled;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        const std::string& head = tokens[0];
        auto expect_ready = [&](const char* what) {
            if (!alphabet || states < 0)
                throw ParseError(std::string(what) + " before alphabet/states", lineno, 1);
        };
        if (head == "alphabet:") {
            alphabet = LabelSet::from_tokens({tokens.begin() + 1, tokens.end()});
        } else if (head == "states:") {
            if (tokens.size() != 2) throw ParseError("states: wants one count", lineno, 1);
            states = std::stoi(tokens[1]);
            accepting.assign(states, false);
        } else if (head == "start:") {
            if (tokens.size() != 2) throw ParseError("start: wants one state", lineno, 1);
            start = std::stoi(tokens[1]);
        } else if (head == "accept:") {
            expect_ready("accept:");
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                int s = std::stoi(tokens[i]);
                if (s < 0 || s >= states) throw ParseError("accept state out of range", lineno, 1);
                accepting[s] = true;
            }
        } else if (head == "trans:") {
            expect_ready("trans:");
            if (delta.empty()) {
                delta.assign(states, std::vector<int>(alphabet->size(), -1));
                filled.assign(states, std::vector<bool>(alphabet->size(), false));
            }
            if (tokens.size() != 4) throw ParseError("trans: wants 'state symbol state'", lineno, 1);
            int from = std::stoi(tokens[1]);
            auto sym = alphabet->index_of(tokens[2]);
            int to = std::stoi(tokens[3]);
            if (from < 0 || from >= states || to < 0 || to >= states)
                throw ParseError("transition state out of range", lineno, 1);
            if (!sym) throw ParseError("unknown symbol '" + tokens[2] + "'", lineno, 1);
            if (filled[from][*sym])
                throw ParseError("duplicate transition for state " + tokens[1] + " on '" +
                                     tokens[2] + "'",
                                 lineno, 1);
            filled[from][*sym] = true;
            delta[from][*sym] = to;
        } else {
            throw ParseError("unknown directive '" + head + "'", lineno, 1);
        }
    }
    if (!alphabet || states < 0 || start < 0)
        throw ParseError("missing alphabet/states/start header");
    if (delta.empty() && states > 0)
        delta.assign(states, std::vector<int>(alphabet->size(), -1));
    for (int s = 0; s < states; ++s)
        for (int sym = 0; sym < alphabet->size(); ++sym)
            if (delta[s][sym] < 0)
                throw ParseError("missing transition for state " + std::to_string(s) + " on '" +
                                 alphabet->name(sym) + "'");
    return Dfa(alphabet, states, start, std::move(accepting), std::move(delta));
}

std::string format_dfa(const Dfa& a) {
    std::ostringstream out;
    out << "alphabet:";
    for (const auto& name : a.alphabet()->names()) out << ' ' << name;
    out << "\nstates: " << a.state_count();
    out << "\nstart: " << a.start();
    out << "\naccept:";
    for (int s = 0; s < a.state_count(); ++s)
        if (a.accepting(s)) out << ' ' << s;
    out << '\n';
    for (int s = 0; s < a.state_count(); ++s)
        for (int sym = 0; sym < a.alphabet()->size(); ++sym)
            out << "trans: " << s << ' ' << a.alphabet()->name(sym) << ' ' << a.step(s, sym)
                << '\n';
    return out.str();
}

Word parse_word(const LabelSet& alphabet, std::string_view text) {
    bool single_char = true;
    for (const auto& name : alphabet.names())
        if (name.size() != 1) single_char = false;
    Word out;
    if (single_char && text.find(' ') == std::string_view::npos) {
        for (char c : text) {
            auto idx = alphabet.index_of(std::string(1, c));
            if (!idx) throw AlphabetError("unknown symbol '" + std::string(1, c) + "'");
            out.push_back(*idx);
        }
        return out;
    }
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        auto idx = alphabet.index_of(tok);
        if (!idx) throw AlphabetError("unknown symbol '" + tok + "'");
        out.push_back(*idx);
    }
    return out;
}

std::string format_word(const LabelSet& alphabet, const Word& w) {
    bool single_char = true;
    for (const auto& name : alphabet.names())
        if (name.size() != 1) single_char = false;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single_char && i) out += ' ';
        out += alphabet.name(w[i]);
    }
    return out;
}

}  // namespace jep
