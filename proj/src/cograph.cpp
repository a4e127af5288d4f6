#include "jep/cograph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "jep/errors.hpp"
#include "jep/tree_jep.hpp"

namespace jep {

// ---------------------------------------------------------------------------
// graphs

Cograph::Cograph(int n) : n_(n), adj_(n, std::vector<bool>(n, false)) {
    if (n < 1) throw JepError("graphs need at least one vertex");
}

void Cograph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw JepError("edge endpoint out of range");
    if (u == v) throw JepError("loops are not allowed");
    adj_[u][v] = adj_[v][u] = true;
}

int Cograph::edge_count() const {
    int count = 0;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (adj_[u][v]) ++count;
    return count;
}

Cograph Cograph::complement() const {
    Cograph out(n_);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (!adj_[u][v]) out.add_edge(u, v);
    return out;
}

Cograph Cograph::induced(const std::vector<int>& vertices) const {
    Cograph out(static_cast<int>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (adj_[vertices[i]][vertices[j]])
                out.add_edge(static_cast<int>(i), static_cast<int>(j));
    return out;
}

std::vector<std::vector<int>> Cograph::components() const {
    std::vector<int> comp(n_, -1);
    int count = 0;
    for (int s = 0; s < n_; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = count;
        std::queue<int> queue;
        queue.push(s);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop();
            for (int v = 0; v < n_; ++v)
                if (adj_[u][v] && comp[v] == -1) {
                    comp[v] = count;
                    queue.push(v);
                }
        }
        ++count;
    }
    std::vector<std::vector<int>> out(count);
    for (int v = 0; v < n_; ++v) out[comp[v]].push_back(v);
    return out;
}

bool is_p4(const Cograph& g) {
    if (g.size() != 4 || g.edge_count() != 3) return false;
    if (g.components().size() != 1) return false;
    std::vector<int> degrees;
    for (int v = 0; v < 4; ++v) {
        int d = 0;
        for (int u = 0; u < 4; ++u)
            if (g.adjacent(u, v)) ++d;
        degrees.push_back(d);
    }
    std::sort(degrees.begin(), degrees.end());
    return degrees == std::vector<int>{1, 1, 2, 2};
}

// ---------------------------------------------------------------------------
// cotrees

LabelSetPtr cotree_labels() {
    static LabelSetPtr labels = LabelSet::from_tokens({"⊔", "∨", "K1"});
    return labels;
}

Cotree cotree_of(const Cograph& g) {
    LabelSetPtr labels = cotree_labels();
    std::function<GeneralTree(const Cograph&, const std::vector<int>&)> build =
        [&](const Cograph& sub, const std::vector<int>& ids) -> GeneralTree {
        if (sub.size() == 1) return GeneralTree::leaf(labels, kK1Label, ids[0]);
        auto attach = [&](int op, const std::vector<std::vector<int>>& parts) {
            std::vector<GeneralTree> children;
            children.reserve(parts.size());
            for (const auto& part : parts) {
                std::vector<int> part_ids;
                part_ids.reserve(part.size());
                for (int v : part) part_ids.push_back(ids[v]);
                children.push_back(build(sub.induced(part), part_ids));
            }
            return GeneralTree::node(op, children);
        };
        auto components = sub.components();
        if (components.size() > 1) return attach(kUnionLabel, components);
        auto co_components = sub.complement().components();
        if (co_components.size() > 1) return attach(kJoinLabel, co_components);
        throw NotCographError("graph and complement both connected on " +
                              std::to_string(sub.size()) + " vertices");
    };
    std::vector<int> ids(g.size());
    for (int v = 0; v < g.size(); ++v) ids[v] = v;
    return build(g, ids).canonical();
}

Cograph graph_of(const Cotree& t) {
    require_same_labels(*t.labels(), *cotree_labels(), "graph_of");
    // validate structure and collect leaves
    std::vector<const GeneralTree::Node*> leaves;
    std::function<void(const GeneralTree::Node*)> validate =
        [&](const GeneralTree::Node* n) {
            if (n->children.empty()) {
                if (n->label != kK1Label)
                    throw InvalidCotreeError("leaves must be labeled K1");
                leaves.push_back(n);
                return;
            }
            if (n->label == kK1Label)
                throw InvalidCotreeError("internal nodes must be labeled ⊔ or ∨");
            for (const auto& c : n->children) {
                if (!c->children.empty() && c->label == n->label)
                    throw InvalidCotreeError("adjacent nodes share a label");
                validate(c.get());
            }
        };
    validate(t.root().get());

    const int n = static_cast<int>(leaves.size());
    std::map<const GeneralTree::Node*, int> vertex_of;
    std::set<int> tags;
    bool tagged = true;
    for (const auto* leaf : leaves) {
        if (leaf->tag < 0 || leaf->tag >= n || !tags.insert(leaf->tag).second) tagged = false;
    }
    int next = 0;
    for (const auto* leaf : leaves) vertex_of[leaf] = tagged ? leaf->tag : next++;

    Cograph g(n);
    std::function<std::vector<int>(const GeneralTree::Node*)> build =
        [&](const GeneralTree::Node* node) -> std::vector<int> {
        if (node->children.empty()) return {vertex_of[node]};
        std::vector<std::vector<int>> parts;
        std::vector<int> all;
        for (const auto& c : node->children) {
            parts.push_back(build(c.get()));
            all.insert(all.end(), parts.back().begin(), parts.back().end());
        }
        if (node->label == kJoinLabel)
            for (std::size_t i = 0; i < parts.size(); ++i)
                for (std::size_t j = i + 1; j < parts.size(); ++j)
                    for (int u : parts[i])
                        for (int v : parts[j]) g.add_edge(u, v);
        return all;
    };
    build(t.root().get());
    return g;
}

bool induced_via_cotrees(const Cograph& host, const Cograph& pattern) {
    return general_contains(cotree_of(host), cotree_of(pattern));
}

// ---------------------------------------------------------------------------
// encoded-cotree language

TreeAutomaton cotree_language() {
    LabelSetPtr labels = cotree_labels()->with_extra(kUpToken);
    // states: 0 dead; trees by effective label; chains by allowed parent set
    enum State : int { Dead = 0, TreeU, TreeJ, TreeK, ChainU, ChainJ, ChainUJ, Count };
    // allowed-parent mask per state: bit0 = may hang under ⊔, bit1 = under ∨
    auto mask_of = [](int s) -> int {
        switch (s) {
            case TreeU: return 0b10;
            case TreeJ: return 0b01;
            case TreeK: return 0b11;
            case ChainU: return 0b01;
            case ChainJ: return 0b10;
            case ChainUJ: return 0b11;
            default: return 0;
        }
    };
    auto chain_of = [](int mask) -> int {
        switch (mask) {
            case 0b01: return ChainU;
            case 0b10: return ChainJ;
            case 0b11: return ChainUJ;
            default: return Dead;
        }
    };
    auto is_tree = [](int s) { return s == TreeU || s == TreeJ || s == TreeK; };
    auto is_chain = [](int s) { return s == ChainU || s == ChainJ || s == ChainUJ; };

    std::vector<int> leaf(labels->size(), Dead);
    leaf[kK1Label] = TreeK;
    const int n = Count;
    std::vector<int> merge(labels->size() * TreeAutomaton::pair_count(n), Dead);
    auto set_merge = [&](int label, int a, int b, int target) {
        merge[label * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(a, b)] = target;
    };
    const int up = labels->size() - 1;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b <= a; ++b) {
            // chain extension: one chain continuation at most, others subtrees
            if (is_tree(a) && is_tree(b))
                set_merge(up, a, b, chain_of(mask_of(a) & mask_of(b)));
            else if (is_chain(a) && is_tree(b))
                set_merge(up, a, b, chain_of(mask_of(a) & mask_of(b)));
            else if (is_tree(a) && is_chain(b))
                set_merge(up, a, b, chain_of(mask_of(a) & mask_of(b)));
            // head assembly for ⊔ and ∨
            for (int op : {kUnionLabel, kJoinLabel}) {
                int bit = op == kUnionLabel ? 0b01 : 0b10;
                bool feasible = (is_tree(a) || is_chain(a)) && (is_tree(b) || is_chain(b)) &&
                                !(is_chain(a) && is_chain(b));
                if (feasible && (mask_of(a) & mask_of(b) & bit))
                    set_merge(op, a, b, op == kUnionLabel ? TreeU : TreeJ);
            }
            // K1 never labels an internal node: stays Dead
        }
    std::vector<bool> accepting(n, false);
    accepting[TreeU] = accepting[TreeJ] = accepting[TreeK] = true;
    return TreeAutomaton(labels, n, std::move(accepting), std::move(leaf), std::move(merge));
}

TreeAutomaton valid_encoding_language(LabelSetPtr base_labels) {
    LabelSetPtr labels = base_labels->with_extra(kUpToken);
    enum State : int { Dead = 0, Tree, Chain, Count };
    const int up = labels->size() - 1;
    std::vector<int> leaf(labels->size(), Tree);
    leaf[up] = Dead;
    std::vector<int> merge(labels->size() * TreeAutomaton::pair_count(Count), Dead);
    auto set_merge = [&](int label, int a, int b, int target) {
        merge[label * TreeAutomaton::pair_count(Count) + TreeAutomaton::pair_index(a, b)] =
            target;
    };
    for (int l = 0; l < labels->size(); ++l) {
        bool chain_label = l == up;
        set_merge(l, Tree, Tree, chain_label ? Chain : Tree);
        set_merge(l, Chain, Tree, chain_label ? Chain : Tree);
    }
    std::vector<bool> accepting(Count, false);
    accepting[Tree] = true;
    return TreeAutomaton(labels, Count, std::move(accepting), std::move(leaf), std::move(merge));
}

// ---------------------------------------------------------------------------
// pattern containment over encodings
//
// A state summarizes what a completed encoded subtree, or a partial chain of
// accumulated children, contributes to embedding the pattern: per pattern
// node the downward-closed family of child subsets injectively matchable
// into distinct accumulated children, plus the fully embedded pattern nodes.

namespace {

struct PatternShape {
    std::vector<int> label;
    std::vector<std::vector<int>> children;  // pattern node ids
    int root = 0;
    int count() const { return static_cast<int>(label.size()); }
};

PatternShape index_general(const GeneralTree& pattern) {
    PatternShape out;
    std::function<int(const GeneralTree::Node*)> visit =
        [&](const GeneralTree::Node* n) -> int {
        int id = static_cast<int>(out.label.size());
        out.label.push_back(n->label);
        out.children.emplace_back();
        for (const auto& c : n->children) out.children[id].push_back(visit(c.get()));
        return id;
    };
    out.root = visit(pattern.root().get());
    return out;
}

struct EncState {
    enum class Kind { Dead, Tree, Chain } kind = Kind::Dead;
    int effective_label = -1;             // Tree only
    std::uint32_t down = 0;               // Tree: embeddable pattern nodes
    std::uint32_t seen = 0;               // Chain: nodes embeddable in a child
    std::vector<std::uint64_t> families;  // Chain: per pattern node, bitmask of
                                          // matchable child subsets

    std::string key() const {
        std::string out = std::to_string(static_cast<int>(kind)) + ":" +
                          std::to_string(effective_label) + ":" + std::to_string(down) + ":" +
                          std::to_string(seen);
        for (auto f : families) out += "," + std::to_string(f);
        return out;
    }
};

}  // namespace

TreeAutomaton sup_general_encoded(const GeneralTree& pattern) {
    PatternShape shape = index_general(pattern);
    if (shape.count() > 31)
        throw SizeLimitError("sup_general_encoded supports patterns up to 31 nodes");
    for (int q = 0; q < shape.count(); ++q)
        if (shape.children[q].size() > 6)
            throw SizeLimitError("sup_general_encoded supports pattern arity up to 6");
    LabelSetPtr labels = pattern.labels()->with_extra(kUpToken);
    const int k = labels->size();
    const int up = k - 1;
    const int nodes = shape.count();

    auto fresh_families = [&] {
        std::vector<std::uint64_t> f(nodes);
        for (int q = 0; q < nodes; ++q) f[q] = 1;  // the empty subset
        return f;
    };
    // add one accumulated child whose embeddable set is `down`
    auto extend = [&](std::vector<std::uint64_t> families, std::uint32_t down) {
        for (int q = 0; q < nodes; ++q) {
            const auto& kids = shape.children[q];
            std::uint64_t grown = families[q];
            for (std::size_t subset = 0; subset < (1ULL << kids.size()); ++subset) {
                if (!(families[q] >> subset & 1)) continue;
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    if (subset >> i & 1) continue;
                    if (down >> kids[i] & 1) grown |= 1ULL << (subset | (1ULL << i));
                }
            }
            families[q] = grown;
        }
        return families;
    };
    // assemble a general node labeled `head` from accumulated children
    auto assemble = [&](int head, const std::vector<std::uint64_t>& families,
                        std::uint32_t seen) {
        EncState out;
        out.kind = EncState::Kind::Tree;
        out.effective_label = head;
        out.down = seen;
        for (int q = 0; q < nodes; ++q) {
            if (shape.label[q] != head) continue;
            std::uint64_t full = 1ULL << ((1ULL << shape.children[q].size()) - 1);
            if (families[q] & full) out.down |= 1u << q;
        }
        return out;
    };

    auto leaf_state = [&](int label) {
        EncState out;
        if (label == up) return out;  // dead
        out.kind = EncState::Kind::Tree;
        out.effective_label = label;
        for (int q = 0; q < nodes; ++q)
            if (shape.children[q].empty() && shape.label[q] == label) out.down |= 1u << q;
        return out;
    };
    auto merge_state = [&](int label, const EncState& a, const EncState& b) -> EncState {
        using Kind = EncState::Kind;
        if (a.kind == Kind::Dead || b.kind == Kind::Dead) return {};
        if (a.kind == Kind::Chain && b.kind == Kind::Chain) return {};
        if (label == up) {
            EncState out;
            out.kind = Kind::Chain;
            if (a.kind == Kind::Tree && b.kind == Kind::Tree) {
                out.families = extend(extend(fresh_families(), a.down), b.down);
                out.seen = a.down | b.down;
            } else {
                const EncState& chain = a.kind == Kind::Chain ? a : b;
                const EncState& tree = a.kind == Kind::Chain ? b : a;
                out.families = extend(chain.families, tree.down);
                out.seen = chain.seen | tree.down;
            }
            return out;
        }
        if (a.kind == Kind::Tree && b.kind == Kind::Tree)
            return assemble(label, extend(extend(fresh_families(), a.down), b.down),
                            a.down | b.down);
        const EncState& chain = a.kind == Kind::Chain ? a : b;
        const EncState& tree = a.kind == Kind::Chain ? b : a;
        return assemble(label, extend(chain.families, tree.down), chain.seen | tree.down);
    };

    // lazy closure over reachable states, then total tables
    std::map<std::string, int> ids;
    std::vector<EncState> states;
    auto intern = [&](const EncState& s) {
        auto [it, fresh] = ids.emplace(s.key(), static_cast<int>(states.size()));
        if (fresh) states.push_back(s);
        return it->second;
    };
    intern(EncState{});  // dead first
    for (int l = 0; l < k; ++l) intern(leaf_state(l));
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l) intern(merge_state(l, states[i], states[j]));

    const int n = static_cast<int>(states.size());
    std::vector<int> leaf(k), merge(k * TreeAutomaton::pair_count(n));
    for (int l = 0; l < k; ++l) leaf[l] = ids.at(leaf_state(l).key());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l)
                merge[l * TreeAutomaton::pair_count(n) + TreeAutomaton::pair_index(i, j)] =
                    ids.at(merge_state(l, states[i], states[j]).key());
    std::vector<bool> accepting(n, false);
    for (int i = 0; i < n; ++i)
        accepting[i] =
            states[i].kind == EncState::Kind::Tree && (states[i].down >> shape.root & 1);
    return TreeAutomaton(labels, n, std::move(accepting), std::move(leaf), std::move(merge));
}

// ---------------------------------------------------------------------------
// decisions

namespace {

GeneralTree decode_to_general(const BinaryTree& encoded) { return decode_general(encoded); }

}  // namespace

CographVerdict decide_jep_cographs(const std::vector<Cograph>& forbidden, Caps caps) {
    bool has_p4 = false;
    for (const auto& g : forbidden)
        if (is_p4(g)) has_p4 = true;
    if (!has_p4)
        throw MissingP4Error("the forbidden set must contain the four-vertex path");

    CographVerdict verdict;
    TreeAutomaton language = cotree_language();
    for (std::size_t i = 0; i < forbidden.size(); ++i) {
        const Cograph& g = forbidden[i];
        if (is_p4(g)) continue;
        std::optional<Cotree> pattern;
        try {
            pattern = cotree_of(g);
        } catch (const NotCographError&) {
            verdict.warnings.push_back(
                "forbidden graph #" + std::to_string(i) +
                " is neither P4 nor a cograph; it cannot embed in any cograph and is ignored");
            continue;
        }
        language = ta_minimize(
            ta_intersection(language, ta_complement(sup_general_encoded(*pattern))));
    }

    TreeVerdict inner = decide_jep_tree(language, PairMode::Bad, caps);
    verdict.jep = inner.jep;
    verdict.certificate = inner.certificate;
    if (!inner.jep) {
        Cotree xt = decode_to_general(*inner.x);
        Cotree yt = decode_to_general(*inner.y);
        verdict.x_cotree = xt;
        verdict.y_cotree = yt;
        verdict.x = graph_of(xt);
        verdict.y = graph_of(yt);
    }
    return verdict;
}

GeneralTreeVerdict decide_jep_general(const std::vector<GeneralTree>& forbidden,
                                      LabelSetPtr labels, Caps caps) {
    TreeAutomaton language = valid_encoding_language(labels);
    for (const auto& pattern : forbidden) {
        require_same_labels(*pattern.labels(), *labels, "decide_jep_general");
        language =
            ta_minimize(ta_intersection(language, ta_complement(sup_general_encoded(pattern))));
    }
    TreeVerdict inner = decide_jep_tree(language, PairMode::Bad, caps);
    GeneralTreeVerdict verdict;
    verdict.jep = inner.jep;
    verdict.certificate = inner.certificate;
    if (!inner.jep) {
        verdict.x = decode_to_general(*inner.x);
        verdict.y = decode_to_general(*inner.y);
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// formats

Cograph parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "n:") {
            if (!(ls >> n) || n < 1) throw ParseError("n: wants a positive count", lineno, 1);
        } else if (head == "edge:") {
            int u, v;
            if (!(ls >> u >> v)) throw ParseError("edge: wants two endpoints", lineno, 1);
            edges.emplace_back(u, v);
        } else {
            throw ParseError("unknown directive '" + head + "'", lineno, 1);
        }
    }
    if (n < 1) throw ParseError("missing n: header");
    Cograph g(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge endpoint out of range");
        g.add_edge(u, v);
    }
    return g;
}

std::string format_graph(const Cograph& g) {
    std::ostringstream out;
    out << "n: " << g.size() << '\n';
    for (int u = 0; u < g.size(); ++u)
        for (int v = u + 1; v < g.size(); ++v)
            if (g.adjacent(u, v)) out << "edge: " << u << ' ' << v << '\n';
    return out.str();
}

std::string format_graph_inline(const Cograph& g) {
    std::ostringstream out;
    out << "n=" << g.size() << ";edges=";
    bool first = true;
    for (int u = 0; u < g.size(); ++u)
        for (int v = u + 1; v < g.size(); ++v)
            if (g.adjacent(u, v)) {
                if (!first) out << ',';
                out << u << '-' << v;
                first = false;
            }
    return out.str();
}

}  // namespace jep
