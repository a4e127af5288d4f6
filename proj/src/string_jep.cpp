#include "jep/string_jep.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

#include "jep/errors.hpp"

namespace jep {

namespace {

WalkDag build_walk_dag(const Dfa& m) {
    const int k = m.alphabet()->size();
    EdgeGraph g;
    g.vertex_count = m.state_count();
    for (int q = 0; q < m.state_count(); ++q)
        for (int s = 0; s < k; ++s) g.edges.push_back({q, m.step(q, s), s});
    Digraph lg = line_graph(g);
    WalkDag dag;
    dag.cond = condense(lg);
    dag.transitions = g.edges;
    dag.initial.assign(dag.cond.count, false);
    dag.accepting.assign(dag.cond.count, false);
    dag.has_symbol.assign(dag.cond.count, std::vector<bool>(k, false));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int c = dag.cond.component_of[static_cast<int>(e)];
        if (g.edges[e].tail == m.start()) dag.initial[c] = true;
        if (m.accepting(g.edges[e].head)) dag.accepting[c] = true;
        dag.has_symbol[c][g.edges[e].label] = true;
    }
    return dag;
}

}  // namespace

StringJepPipeline::StringJepPipeline(const Dfa& machine, Caps caps)
    : machine_(dfa_trim(machine)) {
    dag_ = build_walk_dag(machine_);
    accepts_empty_ = machine_.accepting(machine_.start());

    // enumerate all walks from initial components (paths: the quotient is a
    // loop-free DAG), plus the empty walk
    walks_.push_back({});
    SccWalk current;
    std::vector<int> initials;
    for (int c = 0; c < dag_.cond.count; ++c)
        if (dag_.initial[c]) initials.push_back(c);
    std::function<void(int)> extend = [&](int c) {
        current.push_back(c);
        if (walks_.size() >= caps.max_walks)
            throw SizeLimitError("walk enumeration exceeds the cap of " +
                                 std::to_string(caps.max_walks) + " walks");
        walks_.push_back(current);
        for (int d : dag_.cond.adj[c]) extend(d);
        current.pop_back();
    };
    for (int c : initials) extend(c);
    std::sort(walks_.begin(), walks_.end());

    prefix_sets_.reserve(walks_.size());
    proper_prefix_sets_.reserve(walks_.size());
    for (std::size_t i = 0; i < walks_.size(); ++i) {
        IdSet prefixes(walks_.size());
        IdSet proper(walks_.size());
        SccWalk prefix;
        prefixes.insert(0);  // the empty walk
        if (i != 0) proper.insert(0);
        for (int c : walks_[i]) {
            prefix.push_back(c);
            int id = walk_id(prefix);
            if (id < 0) throw InternalError("walk prefix missing from the walk set");
            prefixes.insert(id);
            if (static_cast<std::size_t>(id) != i) proper.insert(id);
        }
        prefix_sets_.push_back(std::move(prefixes));
        proper_prefix_sets_.push_back(std::move(proper));
    }

    start_family_.push_back(0);  // the empty walk
    for (std::size_t i = 1; i < walks_.size(); ++i)
        if (walks_[i].size() == 1) start_family_.push_back(static_cast<int>(i));
    std::sort(start_family_.begin(), start_family_.end());
}

int StringJepPipeline::walk_id(const SccWalk& w) const {
    auto it = std::lower_bound(walks_.begin(), walks_.end(), w);
    if (it == walks_.end() || *it != w) return -1;
    return static_cast<int>(it - walks_.begin());
}

SccWalk StringJepPipeline::walk_of_word(const Word& z) const {
    SccWalk out;
    int state = machine_.start();
    const int k = machine_.alphabet()->size();
    for (int symbol : z) {
        if (symbol < 0 || symbol >= k) throw AlphabetError("symbol outside the alphabet");
        int edge = state * k + symbol;
        int c = dag_.cond.component_of[edge];
        if (out.empty() || out.back() != c) out.push_back(c);
        state = machine_.step(state, symbol);
    }
    return out;
}

StringJepPipeline::Family StringJepPipeline::n_step(const Family& family, int symbol) const {
    if (symbol < 0 || symbol >= machine_.alphabet()->size())
        throw AlphabetError("symbol outside the alphabet");
    IdSet in(walks_.size());
    for (int id : family) in.insert(id);
    Family out;
    for (std::size_t w = 1; w < walks_.size(); ++w) {
        if (!dag_.has_symbol[walks_[w].back()][symbol]) continue;
        // a proper prefix must already be live; the walk itself qualifies
        // only when its last component is loopy, since a non-loopy component
        // has a single transition that a run crosses once. The corruption
        // hook drops that distinction (harness validation only).
        bool hit = proper_prefix_sets_[w].intersects(in);
        if (!hit && in.contains(w))
            hit = corrupt_n_step_ || dag_.cond.loopy[walks_[w].back()];
        if (hit) out.push_back(static_cast<int>(w));
    }
    return out;
}

StringJepPipeline::Family StringJepPipeline::n_run(const Word& x) const {
    Family family = start_family_;
    for (int symbol : x) family = n_step(family, symbol);
    return family;
}

std::vector<int> StringJepPipeline::wset_from_family(const Family& family) const {
    IdSet in(walks_.size());
    bool has_empty = false;
    for (int id : family) {
        in.insert(id);
        if (id == 0) has_empty = true;
    }
    std::vector<int> out;
    if (has_empty && accepts_empty_) out.push_back(0);
    for (std::size_t w = 1; w < walks_.size(); ++w) {
        if (!dag_.accepting[walks_[w].back()]) continue;
        if (prefix_sets_[w].intersects(in)) out.push_back(static_cast<int>(w));
    }
    return out;
}

std::vector<int> StringJepPipeline::wset(const Word& x) const {
    return wset_from_family(n_run(x));
}

bool StringJepPipeline::joint_by_walks(const Word& x, const Word& y) const {
    std::vector<int> wx = wset(x), wy = wset(y), common;
    std::set_intersection(wx.begin(), wx.end(), wy.begin(), wy.end(),
                          std::back_inserter(common));
    return !common.empty();
}

StringJepPipeline::Bounds StringJepPipeline::bounds() const {
    Bounds b;
    b.walk_count = walks_.size();
    b.pair_length_exponent = walks_.size();
    b.pair_length_bound = pow2_string(walks_.size());
    return b;
}

bool joint_word_by_product(const Dfa& m, const Word& x, const Word& y) {
    Dfa product = dfa_product(dfa_product(m, sup_dfa(x, m.alphabet()), BoolOp::And),
                              sup_dfa(y, m.alphabet()), BoolOp::And);
    return dfa_empty_witness(product).has_value();
}

bool joint_word(const Dfa& m, const Word& x, const Word& y) {
    StringJepPipeline pipeline(m);
    bool route_a = pipeline.joint_by_walks(x, y);
    bool route_b = joint_word_by_product(pipeline.machine(), x, y);
    if (route_a != route_b)
        throw InternalError("joint_word routes disagree on x=" +
                            format_word(*m.alphabet(), x) + " y=" +
                            format_word(*m.alphabet(), y));
    return route_b;
}

namespace {

// shortlex order on words
bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

WordPairVerdict decide_jep_word(const Dfa& m, PairMode mode, Caps caps) {
    StringJepPipeline pipeline(m, caps);
    const Dfa& machine = pipeline.machine();
    const int k = machine.alphabet()->size();

    // reachable (machine state, walk family) product states with shortest
    // (then lexicographically least) witness words
    std::map<StringJepPipeline::Family, int> family_ids;
    std::vector<StringJepPipeline::Family> families;
    auto intern_family = [&](StringJepPipeline::Family f) {
        auto [it, fresh] = family_ids.emplace(std::move(f), static_cast<int>(families.size()));
        if (fresh) families.push_back(it->first);
        return it->second;
    };

    struct ProductState {
        int machine_state;
        int family;
        Word witness;
    };
    std::map<std::pair<int, int>, int> state_ids;
    std::vector<ProductState> states;
    auto intern_state = [&](int ms, int fam, const Word& witness) {
        auto key = std::make_pair(ms, fam);
        auto it = state_ids.find(key);
        if (it != state_ids.end()) return it->second;
        if (states.size() >= caps.max_families) {
            auto b = pipeline.bounds();
            throw SizeLimitError(
                "reachable walk-family states exceed the cap of " +
                std::to_string(caps.max_families) + " (walks: " + std::to_string(b.walk_count) +
                ", pair length bound: " + b.pair_length_bound + ")");
        }
        int id = static_cast<int>(states.size());
        state_ids.emplace(key, id);
        states.push_back({ms, fam, witness});
        return id;
    };

    std::queue<int> queue;
    queue.push(intern_state(machine.start(), intern_family(pipeline.start_family()), {}));
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop();
        // copy: `states` may reallocate while exploring
        ProductState state = states[id];
        for (int s = 0; s < k; ++s) {
            Word next_witness = state.witness;
            next_witness.push_back(s);
            int nf = intern_family(pipeline.n_step(families[state.family], s));
            std::size_t before = states.size();
            int nid = intern_state(machine.step(state.machine_state, s), nf, next_witness);
            if (states.size() > before) queue.push(nid);
        }
    }

    // group the relevant states by walk set, keeping the best witness each
    std::vector<std::vector<int>> family_wset(families.size());
    std::vector<bool> family_wset_ready(families.size(), false);
    struct Group {
        std::vector<int> wset;
        Word witness;
    };
    std::map<std::vector<int>, int> group_ids;
    std::vector<Group> groups;
    for (const auto& st : states) {
        if (mode == PairMode::Bad && !machine.accepting(st.machine_state)) continue;
        if (!family_wset_ready[st.family]) {
            family_wset[st.family] = pipeline.wset_from_family(families[st.family]);
            family_wset_ready[st.family] = true;
        }
        const auto& w = family_wset[st.family];
        auto [it, fresh] = group_ids.emplace(w, static_cast<int>(groups.size()));
        if (fresh)
            groups.push_back({w, st.witness});
        else if (word_less(st.witness, groups[it->second].witness))
            groups[it->second].witness = st.witness;
    }

    // JEP iff every pair of walk sets intersects (a pair may reuse one group)
    bool found = false;
    std::pair<Word, Word> best;
    auto consider = [&](const Word& a, const Word& b) {
        Word x = a, y = b;
        if (word_less(y, x)) std::swap(x, y);
        if (!found) {
            best = {x, y};
            found = true;
            return;
        }
        auto size = [](const std::pair<Word, Word>& p) { return p.first.size() + p.second.size(); };
        std::pair<Word, Word> cand{x, y};
        if (size(cand) != size(best)) {
            if (size(cand) < size(best)) best = cand;
        } else if (word_less(cand.first, best.first) ||
                   (cand.first == best.first && word_less(cand.second, best.second))) {
            best = cand;
        }
    };
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i; j < groups.size(); ++j) {
            std::vector<int> common;
            std::set_intersection(groups[i].wset.begin(), groups[i].wset.end(),
                                  groups[j].wset.begin(), groups[j].wset.end(),
                                  std::back_inserter(common));
            if (common.empty()) consider(groups[i].witness, groups[j].witness);
        }

    if (!found) return {true, {}, {}, {}};

    if (joint_word_by_product(machine, best.first, best.second))
        throw InternalError("bad pair failed product-emptiness certification");
    if (mode == PairMode::Bad &&
        (!machine.accepts(best.first) || !machine.accepts(best.second)))
        throw InternalError("bad pair member is not a language member");
    return {false, best.first, best.second, "product-empty"};
}

namespace {

std::vector<Word> all_words_up_to(int alphabet, int bound, std::size_t cap) {
    std::vector<Word> out{{}};
    std::size_t begin = 0;
    for (int len = 1; len <= bound; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int s = 0; s < alphabet; ++s) {
                if (out.size() >= cap)
                    throw SizeLimitError("word enumeration exceeds the cap of " +
                                         std::to_string(cap) + " items");
                Word w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    std::sort(out.begin(), out.end(), word_less);
    return out;
}

}  // namespace

std::vector<std::pair<Word, Word>> minimal_semibad_words(const Dfa& m, int bound, Caps caps) {
    if (bound < 1) throw JepError("minimal_semibad_words: bound must be at least 1");
    Dfa machine = dfa_trim(m);
    auto words = all_words_up_to(machine.alphabet()->size(), bound, caps.max_items);
    auto semibad = [&](const Word& x, const Word& y) {
        return !joint_word_by_product(machine, x, y);
    };
    std::vector<std::pair<Word, Word>> out;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i; j < words.size(); ++j) {
            const Word& x = words[i];
            const Word& y = words[j];
            if (!semibad(x, y)) continue;
            // minimal iff no single-symbol deletion stays semibad
            bool minimal = true;
            for (std::size_t d = 0; d < x.size() && minimal; ++d) {
                Word xd = x;
                xd.erase(xd.begin() + static_cast<std::ptrdiff_t>(d));
                if (semibad(xd, y)) minimal = false;
            }
            for (std::size_t d = 0; d < y.size() && minimal; ++d) {
                Word yd = y;
                yd.erase(yd.begin() + static_cast<std::ptrdiff_t>(d));
                if (semibad(x, yd)) minimal = false;
            }
            if (minimal) out.emplace_back(x, y);
        }
    return out;
}

Dfa badpair_dfa(const Dfa& m, int bound, PairMode mode, Caps caps) {
    Dfa machine = dfa_trim(m);
    auto minimal = minimal_semibad_words(machine, bound, caps);
    LabelSetPtr hash_alphabet = machine.alphabet()->with_extra(kHashToken);

    // union over minimal pairs (both orientations) of Sup(x)#Sup(y)
    std::optional<Dfa> result;
    auto add = [&](const Word& x, const Word& y) {
        Dfa piece = hash_pair_dfa(sup_dfa(x, machine.alphabet()), sup_dfa(y, machine.alphabet()));
        result = result ? dfa_product(*result, piece, BoolOp::Or) : piece;
    };
    for (const auto& [x, y] : minimal) {
        add(x, y);
        if (x != y) add(y, x);
    }
    if (!result) {
        // no semibad pairs within the bound: the empty language over Λ ∪ {#}
        std::vector<std::vector<int>> delta(1, std::vector<int>(hash_alphabet->size(), 0));
        result = Dfa(hash_alphabet, 1, 0, {false}, std::move(delta));
    }
    if (mode == PairMode::Bad)
        result = dfa_product(*result, hash_pair_dfa(machine, machine), BoolOp::And);
    return dfa_trim(*result);
}

}  // namespace jep
