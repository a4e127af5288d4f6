#include "jep/tree_automaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "jep/errors.hpp"

namespace jep {

TreeAutomaton::TreeAutomaton(LabelSetPtr labels, int states, std::vector<bool> accepting,
                             std::vector<int> leaf, std::vector<int> merge)
    : labels_(std::move(labels)),
      accepting_(std::move(accepting)),
      leaf_(std::move(leaf)),
      merge_(std::move(merge)) {
    if (states < 1) throw JepError("tree automaton needs at least one state");
    if (static_cast<int>(accepting_.size()) != states) throw JepError("state count mismatch");
    if (static_cast<int>(leaf_.size()) != labels_->size())
        throw JepError("leaf transitions must cover every label");
    if (static_cast<int>(merge_.size()) != labels_->size() * pair_count(states))
        throw JepError("merge transitions must cover every (label, state pair)");
    for (int s : leaf_)
        if (s < 0 || s >= states) throw JepError("leaf transition target out of range");
    for (int s : merge_)
        if (s < 0 || s >= states) throw JepError("merge transition target out of range");
}

int ta_run(const TreeAutomaton& a, const BinaryTree& t) {
    require_same_labels(*a.labels(), *t.labels(), "ta_run");
    std::function<int(const BinaryTree::Node*)> eval = [&](const BinaryTree::Node* n) -> int {
        if (!n->left) return a.leaf_state(n->label);
        return a.merge_state(n->label, eval(n->left.get()), eval(n->right.get()));
    };
    return eval(t.root().get());
}

bool TreeAutomaton::accepts(const BinaryTree& t) const { return accepting_[ta_run(*this, t)]; }

TreeAutomaton ta_product(const TreeAutomaton& a, const TreeAutomaton& b, BoolOp op) {
    require_same_labels(*a.labels(), *b.labels(), "ta_product");
    const int k = a.labels()->size();
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int sa, int sb) {
        auto [it, fresh] = ids.emplace(std::make_pair(sa, sb), static_cast<int>(states.size()));
        if (fresh) states.emplace_back(sa, sb);
        return it->second;
    };
    for (int l = 0; l < k; ++l) intern(a.leaf_state(l), b.leaf_state(l));
    // close under merges; pairs indexed against every state known so far
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                intern(a.merge_state(l, states[i].first, states[j].first),
                       b.merge_state(l, states[i].second, states[j].second));
    const int n = static_cast<int>(states.size());
    std::vector<int> leaf(k), merge(k * TreeAutomaton::pair_count(n));
    for (int l = 0; l < k; ++l) leaf[l] = ids.at({a.leaf_state(l), b.leaf_state(l)});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    ids.at({a.merge_state(l, states[i].first, states[j].first),
                            b.merge_state(l, states[i].second, states[j].second)});
    std::vector<bool> accepting(n);
    for (int i = 0; i < n; ++i)
        accepting[i] = op == BoolOp::And
                           ? (a.accepting(states[i].first) && b.accepting(states[i].second))
                           : (a.accepting(states[i].first) || b.accepting(states[i].second));
    return TreeAutomaton(a.labels(), n, std::move(accepting), std::move(leaf), std::move(merge));
}

TreeAutomaton ta_complement(const TreeAutomaton& a) {
    std::vector<bool> accepting(a.state_count());
    std::vector<int> leaf(a.labels()->size()), merge;
    const int n = a.state_count();
    const int k = a.labels()->size();
    merge.resize(k * TreeAutomaton::pair_count(n));
    for (int s = 0; s < n; ++s) accepting[s] = !a.accepting(s);
    for (int l = 0; l < k; ++l) leaf[l] = a.leaf_state(l);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    a.merge_state(l, i, j);
    return TreeAutomaton(a.labels(), n, std::move(accepting), std::move(leaf), std::move(merge));
}

TreeAutomaton ta_trim(const TreeAutomaton& a) {
    const int k = a.labels()->size();
    std::vector<int> id(a.state_count(), -1);
    std::vector<int> order;
    auto reach = [&](int s) {
        if (id[s] == -1) {
            id[s] = static_cast<int>(order.size());
            order.push_back(s);
        }
    };
    for (int l = 0; l < k; ++l) reach(a.leaf_state(l));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l) reach(a.merge_state(l, order[i], order[j]));
    const int n = static_cast<int>(order.size());
    std::vector<int> leaf(k), merge(k * TreeAutomaton::pair_count(n));
    std::vector<bool> accepting(n);
    for (int l = 0; l < k; ++l) leaf[l] = id[a.leaf_state(l)];
    for (int i = 0; i < n; ++i) {
        accepting[i] = a.accepting(order[i]);
        for (int j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    id[a.merge_state(l, order[i], order[j])];
    }
    return TreeAutomaton(a.labels(), n, std::move(accepting), std::move(leaf), std::move(merge));
}

TreeAutomaton ta_minimize(const TreeAutomaton& a) {
    TreeAutomaton t = ta_trim(a);
    const int n = t.state_count();
    const int k = t.labels()->size();
    std::vector<int> cls(n);
    for (int s = 0; s < n; ++s) cls[s] = t.accepting(s) ? 1 : 0;
    for (;;) {
        // signature: own class plus the class of every (label, partner) merge
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(n);
        for (int s = 0; s < n; ++s) {
            std::vector<int> sig{cls[s]};
            for (int l = 0; l < k; ++l)
                for (int u = 0; u < n; ++u) sig.push_back(cls[t.merge_state(l, s, u)]);
            auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            (void)fresh;
            next[s] = it->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }
    int m = *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<int> rep(m, -1);
    for (int s = 0; s < n; ++s)
        if (rep[cls[s]] == -1) rep[cls[s]] = s;
    std::vector<int> leaf(k), merge(k * TreeAutomaton::pair_count(m));
    std::vector<bool> accepting(m);
    for (int l = 0; l < k; ++l) leaf[l] = cls[t.leaf_state(l)];
    for (int c = 0; c < m; ++c) {
        accepting[c] = t.accepting(rep[c]);
        for (int d = 0; d <= c; ++d)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(m) + TreeAutomaton::pair_index(c, d)] =
                    cls[t.merge_state(l, rep[c], rep[d])];
    }
    return TreeAutomaton(t.labels(), m, std::move(accepting), std::move(leaf), std::move(merge));
}

std::optional<BinaryTree> ta_empty_witness(const TreeAutomaton& a) {
    const int n = a.state_count();
    const int k = a.labels()->size();
    struct Best {
        std::optional<BinaryTree> tree;
        std::string key;
    };
    std::vector<Best> best(n);
    auto better = [](const BinaryTree& cand, const std::string& cand_key, const Best& cur) {
        if (!cur.tree) return true;
        if (cand.size() != cur.tree->size()) return cand.size() < cur.tree->size();
        return cand_key < cur.key;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int l = 0; l < k; ++l) {
            BinaryTree cand = BinaryTree::leaf(a.labels(), l);
            std::string key = cand.to_sexpr();
            Best& cur = best[a.leaf_state(l)];
            if (better(cand, key, cur)) {
                cur.tree = cand;
                cur.key = key;
                changed = true;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (!best[i].tree) continue;
            for (int j = 0; j <= i; ++j) {
                if (!best[j].tree) continue;
                for (int l = 0; l < k; ++l) {
                    BinaryTree cand =
                        BinaryTree::node(l, *best[i].tree, *best[j].tree).canonical();
                    std::string key = cand.to_sexpr();
                    Best& cur = best[a.merge_state(l, i, j)];
                    if (better(cand, key, cur)) {
                        cur.tree = cand;
                        cur.key = key;
                        changed = true;
                    }
                }
            }
        }
    }
    Best result;
    for (int s = 0; s < n; ++s) {
        if (!a.accepting(s) || !best[s].tree) continue;
        if (better(*best[s].tree, best[s].key, result)) {
            result.tree = best[s].tree;
            result.key = best[s].key;
        }
    }
    return result.tree;
}

// ---------------------------------------------------------------------------
// pattern automata

namespace {

struct PatternIndex {
    std::vector<int> label;
    std::vector<int> left, right;  // -1 for leaves
    int root;
};

PatternIndex index_pattern(const BinaryTree& pattern) {
    PatternIndex out;
    std::function<int(const BinaryTree::Node*)> visit = [&](const BinaryTree::Node* n) -> int {
        int id = static_cast<int>(out.label.size());
        out.label.push_back(n->label);
        out.left.push_back(-1);
        out.right.push_back(-1);
        if (n->left) {
            out.left[id] = visit(n->left.get());
            out.right[id] = visit(n->right.get());
        }
        return id;
    };
    out.root = visit(pattern.root().get());
    return out;
}

}  // namespace

TreeAutomaton sup_tree_automaton(const BinaryTree& pattern, LabelSetPtr labels) {
    require_same_labels(*pattern.labels(), *labels, "sup_tree_automaton");
    PatternIndex p = index_pattern(pattern);
    const int k = labels->size();
    const int nodes = static_cast<int>(p.label.size());
    if (nodes > 31)
        throw SizeLimitError("sup_tree_automaton supports patterns up to 31 nodes");

    // a state is the set of pattern nodes whose subtrees embed into the
    // processed host subtree, as a bitmask
    auto leaf_mask = [&](int host_label) {
        unsigned mask = 0;
        for (int q = 0; q < nodes; ++q)
            if (p.left[q] == -1 && p.label[q] == host_label) mask |= 1u << q;
        return mask;
    };
    auto merge_mask = [&](int host_label, unsigned s1, unsigned s2) {
        unsigned mask = s1 | s2;
        for (int q = 0; q < nodes; ++q) {
            if (p.label[q] != host_label) continue;
            if (p.left[q] == -1) {
                mask |= 1u << q;
                continue;
            }
            unsigned lbit = 1u << p.left[q], rbit = 1u << p.right[q];
            if (((s1 & lbit) && (s2 & rbit)) || ((s1 & rbit) && (s2 & lbit))) mask |= 1u << q;
        }
        return mask;
    };

    std::map<unsigned, int> ids;
    std::vector<unsigned> states;
    auto intern = [&](unsigned mask) {
        auto [it, fresh] = ids.emplace(mask, static_cast<int>(states.size()));
        if (fresh) states.push_back(mask);
        return it->second;
    };
    for (int l = 0; l < k; ++l) intern(leaf_mask(l));
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l) intern(merge_mask(l, states[i], states[j]));

    const int n = static_cast<int>(states.size());
    std::vector<int> leaf(k), merge(k * TreeAutomaton::pair_count(n));
    for (int l = 0; l < k; ++l) leaf[l] = ids.at(leaf_mask(l));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    ids.at(merge_mask(l, states[i], states[j]));
    std::vector<bool> accepting(n);
    for (int i = 0; i < n; ++i) accepting[i] = (states[i] >> p.root) & 1;
    return TreeAutomaton(labels, n, std::move(accepting), std::move(leaf), std::move(merge));
}

TreeAutomaton forb_tree_automaton(const std::vector<BinaryTree>& patterns, LabelSetPtr labels) {
    const int k = labels->size();
    std::vector<int> leaf(k, 0), merge(k, 0);
    TreeAutomaton result(labels, 1, {true}, std::move(leaf), std::move(merge));
    for (const auto& pattern : patterns)
        result = ta_product(result, ta_complement(sup_tree_automaton(pattern, labels)),
                            BoolOp::And);
    return ta_trim(result);
}

TreeAutomaton hash_pair_ta(const TreeAutomaton& a, const TreeAutomaton& b) {
    require_same_labels(*a.labels(), *b.labels(), "hash_pair_ta");
    LabelSetPtr labels = a.labels()->with_extra(kHashToken);
    const int k = a.labels()->size();
    const int hash = k;
    const int na = a.state_count();
    const int nb = b.state_count();
    // states: pairs (sa, sb), then DONE, then DEAD
    const int n = na * nb + 2;
    const int done = na * nb;
    const int dead = na * nb + 1;
    auto pair_id = [&](int sa, int sb) { return sa * nb + sb; };
    std::vector<int> leaf(k + 1, dead);
    for (int l = 0; l < k; ++l) leaf[l] = pair_id(a.leaf_state(l), b.leaf_state(l));
    std::vector<int> merge((k + 1) * TreeAutomaton::pair_count(n), dead);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            if (i >= done || j >= done) continue;  // DONE/DEAD children stay dead
            int sa1 = i / nb, sb1 = i % nb;
            int sa2 = j / nb, sb2 = j % nb;
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    pair_id(a.merge_state(l, sa1, sa2), b.merge_state(l, sb1, sb2));
            bool ok = (a.accepting(sa1) && b.accepting(sb2)) ||
                      (a.accepting(sa2) && b.accepting(sb1));
            merge[hash * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                ok ? done : dead;
        }
    std::vector<bool> accepting(n, false);
    accepting[done] = true;
    return TreeAutomaton(labels, n, std::move(accepting), std::move(leaf), std::move(merge));
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

TreeAutomaton parse_tree_automaton(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    LabelSetPtr labels;
    int states = -1;
    std::vector<bool> accepting;
    std::vector<int> leaf;
    std::vector<int> merge;
    std::vector<bool> leaf_filled, merge_filled;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        const std::string& head = tokens[0];
        if (head == "labels:") {
            labels = LabelSet::from_tokens({tokens.begin() + 1, tokens.end()});
        } else if (head == "states:") {
            if (tokens.size() != 2) throw ParseError("states: wants one count", lineno, 1);
            states = std::stoi(tokens[1]);
            accepting.assign(states, false);
        } else if (head == "accept:") {
            if (states < 0) throw ParseError("accept: before states:", lineno, 1);
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                int s = std::stoi(tokens[i]);
                if (s < 0 || s >= states) throw ParseError("accept state out of range", lineno, 1);
                accepting[s] = true;
            }
        } else if (head == "m0:") {
            if (!labels || states < 0)
                throw ParseError("m0: before labels:/states:", lineno, 1);
            if (leaf.empty()) {
                leaf.assign(labels->size(), -1);
                leaf_filled.assign(labels->size(), false);
            }
            // m0: label -> state
            if (tokens.size() != 4 || tokens[2] != "->")
                throw ParseError("m0: wants 'label -> state'", lineno, 1);
            auto l = labels->index_of(tokens[1]);
            if (!l) throw ParseError("unknown label '" + tokens[1] + "'", lineno, 1);
            if (leaf_filled[*l])
                throw ParseError("duplicate m0 entry for label '" + tokens[1] + "'", lineno, 1);
            int s = std::stoi(tokens[3]);
            if (s < 0 || s >= states) throw ParseError("m0 target out of range", lineno, 1);
            leaf_filled[*l] = true;
            leaf[*l] = s;
        } else if (head == "m2:") {
            if (!labels || states < 0)
                throw ParseError("m2: before labels:/states:", lineno, 1);
            if (merge.empty()) {
                merge.assign(labels->size() * TreeAutomaton::pair_count(states), -1);
                merge_filled.assign(merge.size(), false);
            }
            // m2: label (s,t) -> state
            if (tokens.size() != 5 || tokens[3] != "->")
                throw ParseError("m2: wants 'label (s,t) -> state'", lineno, 1);
            auto l = labels->index_of(tokens[1]);
            if (!l) throw ParseError("unknown label '" + tokens[1] + "'", lineno, 1);
            const std::string& pair = tokens[2];
            if (pair.size() < 5 || pair.front() != '(' || pair.back() != ')')
                throw ParseError("m2 pair must look like (s,t)", lineno, 1);
            auto comma = pair.find(',');
            if (comma == std::string::npos) throw ParseError("m2 pair missing comma", lineno, 1);
            int s = std::stoi(pair.substr(1, comma - 1));
            int t = std::stoi(pair.substr(comma + 1, pair.size() - comma - 2));
            int target = std::stoi(tokens[4]);
            if (s < 0 || s >= states || t < 0 || t >= states || target < 0 || target >= states)
                throw ParseError("m2 state out of range", lineno, 1);
            std::size_t idx = static_cast<std::size_t>(*l) * TreeAutomaton::pair_count(states) +
                              TreeAutomaton::pair_index(s, t);
            if (merge_filled[idx])
                throw ParseError("duplicate or asymmetric m2 entry for label '" + tokens[1] +
                                     "' pair (" + std::to_string(s) + "," + std::to_string(t) +
                                     ")",
                                 lineno, 1);
            merge_filled[idx] = true;
            merge[idx] = target;
        } else {
            throw ParseError("unknown directive '" + head + "'", lineno, 1);
        }
    }
    if (!labels || states < 0) throw ParseError("missing labels:/states: header");
    if (leaf.empty()) leaf.assign(labels->size(), -1);
    if (merge.empty()) merge.assign(labels->size() * TreeAutomaton::pair_count(states), -1);
    for (int l = 0; l < labels->size(); ++l)
        if (leaf[l] < 0)
            throw ParseError("missing m0 entry for label '" + labels->name(l) + "'");
    for (int l = 0; l < labels->size(); ++l)
        for (int i = 0; i < states; ++i)
            for (int j = 0; j <= i; ++j)
                if (merge[l * TreeAutomaton::pair_count(states) +
                          TreeAutomaton::pair_index(i, j)] < 0)
                    throw ParseError("missing m2 entry for label '" + labels->name(l) +
                                     "' pair (" + std::to_string(j) + "," + std::to_string(i) +
                                     ")");
    return TreeAutomaton(labels, states, std::move(accepting), std::move(leaf), std::move(merge));
}

std::string format_tree_automaton(const TreeAutomaton& a) {
    std::ostringstream out;
    out << "labels:";
    for (const auto& name : a.labels()->names()) out << ' ' << name;
    out << "\nstates: " << a.state_count();
    out << "\naccept:";
    for (int s = 0; s < a.state_count(); ++s)
        if (a.accepting(s)) out << ' ' << s;
    out << '\n';
    for (int l = 0; l < a.labels()->size(); ++l)
        out << "m0: " << a.labels()->name(l) << " -> " << a.leaf_state(l) << '\n';
    for (int l = 0; l < a.labels()->size(); ++l)
        for (int i = 0; i < a.state_count(); ++i)
            for (int j = 0; j <= i; ++j)
                out << "m2: " << a.labels()->name(l) << " (" << j << ',' << i << ") -> "
                    << a.merge_state(l, j, i) << '\n';
    return out.str();
}

}  // namespace jep
