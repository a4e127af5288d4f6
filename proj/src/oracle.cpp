#include "jep/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "jep/errors.hpp"
#include "jep/string_jep.hpp"
#include "jep/tree_jep.hpp"

namespace jep {

// ---------------------------------------------------------------------------
// exhaustive-injection containment checkers

namespace {

struct FlatTree {
    std::vector<int> label;
    std::vector<int> parent;  // -1 at the root
    std::vector<std::vector<int>> children;

    bool is_descendant(int anc, int v) const {  // strict
        for (int cur = parent[v]; cur != -1; cur = parent[cur])
            if (cur == anc) return true;
        return false;
    }
};

FlatTree flatten_binary(const BinaryTree& t) {
    FlatTree out;
    std::function<int(const BinaryTree::Node*, int)> visit =
        [&](const BinaryTree::Node* n, int parent) {
            int id = static_cast<int>(out.label.size());
            out.label.push_back(n->label);
            out.parent.push_back(parent);
            out.children.emplace_back();
            if (parent >= 0) out.children[parent].push_back(id);
            if (n->left) {
                visit(n->left.get(), id);
                visit(n->right.get(), id);
            }
            return id;
        };
    visit(t.root().get(), -1);
    return out;
}

FlatTree flatten_general(const GeneralTree& t) {
    FlatTree out;
    std::function<int(const GeneralTree::Node*, int)> visit =
        [&](const GeneralTree::Node* n, int parent) {
            int id = static_cast<int>(out.label.size());
            out.label.push_back(n->label);
            out.parent.push_back(parent);
            out.children.emplace_back();
            if (parent >= 0) out.children[parent].push_back(id);
            for (const auto& c : n->children) visit(c.get(), id);
            return id;
        };
    visit(t.root().get(), -1);
    return out;
}

// An embedding must be label-preserving, preserve the descendant relation in
// both directions, and use pairwise edge-disjoint downward paths for the
// pattern edges. Host edges are identified by their child endpoint.
bool valid_injection(const FlatTree& host, const FlatTree& pattern,
                     const std::vector<int>& image) {
    const int p = static_cast<int>(pattern.label.size());
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v) {
            if (u == v) continue;
            if (pattern.is_descendant(u, v) != host.is_descendant(image[u], image[v]))
                return false;
        }
    std::set<int> used_edges;
    for (int v = 0; v < p; ++v) {
        int u = pattern.parent[v];
        if (u == -1) continue;
        for (int cur = image[v]; cur != image[u]; cur = host.parent[cur]) {
            if (cur == -1) return false;
            if (!used_edges.insert(cur).second) return false;  // shared edge
        }
    }
    return true;
}

bool injection_search(const FlatTree& host, const FlatTree& pattern) {
    const int p = static_cast<int>(pattern.label.size());
    const int h = static_cast<int>(host.label.size());
    if (p > h) return false;
    std::vector<int> image(p, -1);
    std::vector<bool> used(h, false);
    std::function<bool(int)> place = [&](int v) -> bool {
        if (v == p) return valid_injection(host, pattern, image);
        for (int cand = 0; cand < h; ++cand) {
            if (used[cand] || host.label[cand] != pattern.label[v]) continue;
            int parent = pattern.parent[v];  // necessary condition, prunes early
            if (parent != -1 && !host.is_descendant(image[parent], cand)) continue;
            image[v] = cand;
            used[cand] = true;
            if (place(v + 1)) return true;
            used[cand] = false;
            image[v] = -1;
        }
        return false;
    };
    return place(0);
}

}  // namespace

bool injection_contains_binary(const BinaryTree& host, const BinaryTree& pattern) {
    require_same_labels(*host.labels(), *pattern.labels(), "injection_contains_binary");
    return injection_search(flatten_binary(host), flatten_binary(pattern));
}

bool injection_contains_general(const GeneralTree& host, const GeneralTree& pattern) {
    require_same_labels(*host.labels(), *pattern.labels(), "injection_contains_general");
    return injection_search(flatten_general(host), flatten_general(pattern));
}

bool word_subsequence(const Word& pattern, const Word& host) {
    std::size_t i = 0;
    for (int symbol : host)
        if (i < pattern.size() && pattern[i] == symbol) ++i;
    return i == pattern.size();
}

bool induced_subgraph(const Cograph& host, const Cograph& pattern) {
    const int p = pattern.size();
    const int h = host.size();
    if (p > h) return false;
    std::vector<int> image(p, -1);
    std::vector<bool> used(h, false);
    std::function<bool(int)> place = [&](int v) -> bool {
        if (v == p) return true;
        for (int cand = 0; cand < h; ++cand) {
            if (used[cand]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (pattern.adjacent(u, v) != host.adjacent(image[u], cand)) ok = false;
            if (!ok) continue;
            image[v] = cand;
            used[cand] = true;
            if (place(v + 1)) return true;
            used[cand] = false;
        }
        return false;
    };
    return place(0);
}

// ---------------------------------------------------------------------------
// random generators

Dfa random_dfa(Rng& rng, int max_states, int alphabet_size) {
    int n = rng.range(1, max_states);
    LabelSetPtr alphabet = [&] {
        std::vector<std::string> names;
        for (int i = 0; i < alphabet_size; ++i) names.emplace_back(1, static_cast<char>('a' + i));
        return LabelSet::from_tokens(std::move(names));
    }();
    std::vector<std::vector<int>> delta(n, std::vector<int>(alphabet_size));
    std::vector<bool> accepting(n);
    for (int s = 0; s < n; ++s) {
        accepting[s] = rng.coin();
        for (int a = 0; a < alphabet_size; ++a) delta[s][a] = rng.range(0, n - 1);
    }
    return dfa_trim(Dfa(alphabet, n, 0, std::move(accepting), std::move(delta)));
}

TreeAutomaton random_tree_automaton(Rng& rng, int max_states, int label_count) {
    int n = rng.range(1, max_states);
    LabelSetPtr labels = LabelSet::make(label_count);
    std::vector<int> leaf(label_count);
    std::vector<int> merge(label_count * TreeAutomaton::pair_count(n));
    std::vector<bool> accepting(n);
    for (int s = 0; s < n; ++s) accepting[s] = rng.coin();
    for (int l = 0; l < label_count; ++l) leaf[l] = rng.range(0, n - 1);
    for (auto& m : merge) m = rng.range(0, n - 1);
    return ta_trim(
        TreeAutomaton(labels, n, std::move(accepting), std::move(leaf), std::move(merge)));
}

BinaryTree random_binary_tree(Rng& rng, LabelSetPtr labels, int max_nodes) {
    int k = labels->size();
    std::function<BinaryTree(int)> gen = [&](int budget) -> BinaryTree {
        int label = rng.range(0, k - 1);
        if (budget < 3 || rng.range(0, 2) == 0) return BinaryTree::leaf(labels, label);
        int left_budget = rng.range(1, budget - 2);
        if (left_budget % 2 == 0) --left_budget;
        return BinaryTree::node(label, gen(left_budget), gen(budget - 1 - left_budget));
    };
    int budget = rng.range(1, max_nodes);
    if (budget % 2 == 0) --budget;
    return gen(std::max(budget, 1));
}

Cograph random_cograph(Rng& rng, int max_vertices) {
    int n = rng.range(1, max_vertices);
    std::function<Cograph(int, int)> build = [&](int vertices, int op) -> Cograph {
        // op: 0 disjoint union, 1 join; alternates down the recursion
        Cograph g(vertices);
        if (vertices == 1) return g;
        int parts = rng.range(2, vertices);
        std::vector<int> sizes(parts, 1);
        for (int extra = vertices - parts; extra > 0; --extra) ++sizes[rng.range(0, parts - 1)];
        int offset = 0;
        for (int part = 0; part < parts; ++part) {
            Cograph sub = build(sizes[part], 1 - op);
            for (int u = 0; u < sub.size(); ++u)
                for (int v = u + 1; v < sub.size(); ++v)
                    if (sub.adjacent(u, v)) g.add_edge(offset + u, offset + v);
            if (op == 1)
                for (int u = 0; u < offset; ++u)
                    for (int v = offset; v < offset + sub.size(); ++v) g.add_edge(u, v);
            offset += sub.size();
        }
        return g;
    };
    return build(n, rng.coin() ? 1 : 0);
}

// ---------------------------------------------------------------------------
// bad-pair scans

std::vector<std::pair<Word, Word>> scan_bad_pairs_word(const Dfa& language, int max_length,
                                                       Caps caps) {
    Dfa machine = dfa_trim(language);
    const int k = machine.alphabet()->size();
    std::vector<Word> members;
    std::vector<Word> frontier{{}};
    for (int len = 0; len <= max_length; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            if (members.size() > caps.max_items)
                throw SizeLimitError("member scan exceeds the cap of " +
                                     std::to_string(caps.max_items) + " items");
            if (machine.accepts(w)) members.push_back(w);
            if (len < max_length)
                for (int s = 0; s < k; ++s) {
                    Word e = w;
                    e.push_back(s);
                    next.push_back(std::move(e));
                }
        }
        frontier = std::move(next);
    }
    std::vector<std::pair<Word, Word>> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i; j < members.size(); ++j)
            if (!joint_word_by_product(machine, members[i], members[j]))
                out.emplace_back(members[i], members[j]);
    return out;
}

std::vector<std::pair<BinaryTree, BinaryTree>> scan_bad_pairs_tree(const TreeAutomaton& language,
                                                                   int max_nodes, Caps caps) {
    TreeAutomaton machine = ta_trim(language);
    std::set<std::string> seen;
    std::vector<BinaryTree> members;  // order-variants deduplicated
    for (const auto& t : enumerate_binary(machine.labels(), max_nodes, caps.max_items))
        if (machine.accepts(t) && seen.insert(t.canonical_key()).second) members.push_back(t);
    std::vector<std::pair<BinaryTree, BinaryTree>> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i; j < members.size(); ++j)
            if (!joint_tree_by_product(machine, members[i], members[j]))
                out.emplace_back(members[i], members[j]);
    return out;
}

std::vector<std::pair<Cograph, Cograph>> scan_bad_pairs_cographs(
    const std::vector<Cograph>& forbidden, int max_vertices, Caps caps) {
    std::vector<Cograph> constraints;
    for (const auto& g : forbidden)
        if (!is_p4(g)) constraints.push_back(g);
    // S-free cographs up to cotree isomorphism
    std::vector<Cograph> members;
    std::set<std::string> seen;
    for (int n = 1; n <= max_vertices; ++n) {
        int pairs = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask) {
            Cograph g(n);
            int bit = 0;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v, ++bit)
                    if (mask >> bit & 1) g.add_edge(u, v);
            std::optional<Cotree> cotree;
            try {
                cotree = cotree_of(g);
            } catch (const NotCographError&) {
                continue;
            }
            bool free = true;
            for (const auto& h : constraints)
                if (induced_subgraph(g, h)) {
                    free = false;
                    break;
                }
            if (!free) continue;
            if (!seen.insert(cotree->canonical_key()).second) continue;
            if (members.size() >= caps.max_items)
                throw SizeLimitError("cograph scan exceeds the cap of " +
                                     std::to_string(caps.max_items) + " items");
            members.push_back(g);
        }
    }
    // badness through the encoded cotree language
    TreeAutomaton language = cotree_language();
    for (const auto& h : constraints)
        language =
            ta_minimize(ta_intersection(language, ta_complement(sup_general_encoded(cotree_of(h)))));
    std::vector<TreeAutomaton> sups;
    sups.reserve(members.size());
    for (const auto& g : members) sups.push_back(sup_general_encoded(cotree_of(g)));
    std::vector<std::pair<Cograph, Cograph>> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i; j < members.size(); ++j) {
            TreeAutomaton both = ta_intersection(language, ta_intersection(sups[i], sups[j]));
            if (!ta_empty_witness(both)) out.emplace_back(members[i], members[j]);
        }
    return out;
}

}  // namespace jep
