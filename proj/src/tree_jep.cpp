#include "jep/tree_jep.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <tuple>

#include "jep/errors.hpp"

namespace jep {

// ---------------------------------------------------------------------------
// graph constructions

GluingGraph build_gluing_graph(const TreeAutomaton& m) {
    GluingGraph gg;
    gg.states = m.state_count();
    gg.label_count = m.labels()->size();
    gg.graph.vertex_count = gg.states * gg.label_count + TreeAutomaton::pair_count(gg.states);
    // gluing edges in (label, pair-index) order so gluing_edge() can index them
    for (int l = 0; l < gg.label_count; ++l)
        for (int b = 0; b < gg.states; ++b)
            for (int a = 0; a <= b; ++a)
                gg.graph.edges.push_back(
                    {gg.forest_vertex(a, b), gg.tree_vertex(m.merge_state(l, a, b), l), l});
    for (int t = 0; t < gg.states; ++t)
        for (int l = 0; l < gg.label_count; ++l)
            for (int s = 0; s < gg.states; ++s)
                gg.graph.edges.push_back({gg.tree_vertex(t, l), gg.forest_vertex(t, s), -1});
    return gg;
}

WalkGraph build_walk_graph(const TreeAutomaton& m, const GluingGraph& gg) {
    const int edge_count = static_cast<int>(gg.graph.edges.size());
    Digraph lg = line_graph(gg.graph);

    // post-initial: union vertices leaving a tree-like (m0(label), label)
    std::vector<int> post_initial;
    for (int e = 0; e < edge_count; ++e) {
        const auto& edge = gg.graph.edges[e];
        if (edge.label >= 0) continue;  // gluing
        int state = gg.tree_vertex_state(edge.tail);
        int label = gg.tree_vertex_label(edge.tail);
        if (m.leaf_state(label) == state) post_initial.push_back(e);
    }
    std::vector<bool> keep = reachable_from(lg, post_initial);

    WalkGraph wg;
    wg.vertex_of_edge.assign(edge_count, -1);
    int next = 0;
    for (int e = 0; e < edge_count; ++e)
        if (keep[e]) wg.vertex_of_edge[e] = next++;
    const int kept = next;
    const int label_count = gg.label_count;
    wg.graph = Digraph(kept + label_count);
    wg.kind.assign(kept + label_count, WalkGraph::Kind::Union);
    wg.label.assign(kept + label_count, -1);
    wg.target_state.assign(kept + label_count, -1);
    for (int e = 0; e < edge_count; ++e) {
        int v = wg.vertex_of_edge[e];
        if (v < 0) continue;
        const auto& edge = gg.graph.edges[e];
        if (edge.label >= 0) {
            wg.kind[v] = WalkGraph::Kind::Gluing;
            wg.label[v] = edge.label;
            wg.target_state[v] = gg.tree_vertex_state(edge.head);
        }
        for (int f : lg.adj[e])
            if (keep[f]) wg.graph.add_edge(v, wg.vertex_of_edge[f]);
    }
    // pair members per forest vertex, for the initial-edge rule
    std::vector<std::pair<int, int>> pair_members(TreeAutomaton::pair_count(gg.states));
    for (int b = 0; b < gg.states; ++b)
        for (int a = 0; a <= b; ++a) pair_members[TreeAutomaton::pair_index(a, b)] = {a, b};
    wg.initial_vertex.resize(label_count);
    for (int l = 0; l < label_count; ++l) {
        int v = kept + l;
        wg.initial_vertex[l] = v;
        wg.kind[v] = WalkGraph::Kind::Initial;
        wg.label[v] = l;
        int leaf_state = m.leaf_state(l);
        for (int e = 0; e < edge_count; ++e) {
            int u = wg.vertex_of_edge[e];
            if (u < 0 || gg.graph.edges[e].label >= 0) continue;
            auto [a, b] = pair_members[gg.graph.edges[e].head - gg.states * gg.label_count];
            if (a == leaf_state || b == leaf_state) wg.graph.add_edge(v, u);
        }
    }
    return wg;
}

TreeCondensation condense_walk_graph(const TreeAutomaton& m, const WalkGraph& wg) {
    TreeCondensation tc;
    tc.cond = condense(wg.graph);
    const int n = tc.cond.count;
    const int label_count = m.labels()->size();
    tc.initial.assign(n, false);
    tc.gluing.assign(n, false);
    tc.union_like.assign(n, false);
    tc.accepting.assign(n, false);
    tc.gluing_label.assign(n, std::vector<bool>(label_count, false));
    tc.initial_component.assign(label_count, -1);
    for (int v = 0; v < wg.graph.size(); ++v) {
        int c = tc.cond.component_of[v];
        switch (wg.kind[v]) {
            case WalkGraph::Kind::Initial:
                tc.initial[c] = true;
                tc.initial_component[wg.label[v]] = c;
                if (m.accepting(m.leaf_state(wg.label[v]))) tc.accepting[c] = true;
                break;
            case WalkGraph::Kind::Gluing:
                tc.gluing[c] = true;
                tc.gluing_label[c][wg.label[v]] = true;
                if (m.accepting(wg.target_state[v])) tc.accepting[c] = true;
                break;
            case WalkGraph::Kind::Union:
                tc.union_like[c] = true;
                break;
        }
    }
    for (int l = 0; l < label_count; ++l) {
        int c = tc.initial_component[l];
        if (c < 0 || tc.cond.members[c].size() != 1)
            throw InternalError("initial vertices must form singleton components");
    }
    // feeders: two-step paths (gluing-or-initial in c') -> union -> (gluing in c)
    std::vector<std::set<int>> feeders(n);
    std::vector<std::vector<int>> incoming(wg.graph.size());
    for (int v = 0; v < wg.graph.size(); ++v)
        for (int w : wg.graph.adj[v]) incoming[w].push_back(v);
    for (int u = 0; u < wg.graph.size(); ++u) {
        if (wg.kind[u] != WalkGraph::Kind::Union) continue;
        for (int a : incoming[u]) {
            if (wg.kind[a] == WalkGraph::Kind::Union) continue;
            for (int g : wg.graph.adj[u]) {
                if (wg.kind[g] != WalkGraph::Kind::Gluing) continue;
                int ca = tc.cond.component_of[a];
                int cg = tc.cond.component_of[g];
                if (ca != cg) feeders[cg].insert(ca);
            }
        }
    }
    tc.feeders.resize(n);
    for (int c = 0; c < n; ++c) tc.feeders[c].assign(feeders[c].begin(), feeders[c].end());
    return tc;
}

// ---------------------------------------------------------------------------
// pipeline construction

TreeWalk TreeJepPipeline::make_walk(int component, std::vector<TreeWalk> children) const {
    std::sort(children.begin(), children.end(),
              [](const TreeWalk& a, const TreeWalk& b) { return a.key() < b.key(); });
    children.erase(
        std::unique(children.begin(), children.end(),
                    [](const TreeWalk& a, const TreeWalk& b) { return a.key() == b.key(); }),
        children.end());
    std::string key = std::to_string(component);
    int size = 1;
    if (!children.empty()) {
        key += '(';
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (i) key += ',';
            key += children[i].key();
            size += children[i].size();
        }
        key += ')';
    }
    auto it = interner_.find(key);
    if (it != interner_.end()) return TreeWalk(it->second);
    std::vector<TreeWalk::NodePtr> kids;
    kids.reserve(children.size());
    for (const auto& c : children) kids.push_back(c.node());
    auto node =
        std::make_shared<TreeWalk::Node>(TreeWalk::Node{component, std::move(kids), size, key});
    interner_.emplace(key, node);
    return TreeWalk(node);
}

int TreeJepPipeline::gluing_component(int label, int s1, int s2) const {
    int vertex = walk_graph_.vertex_of_edge[gluing_.gluing_edge(label, s1, s2)];
    if (vertex < 0)
        throw InternalError("unreachable gluing vertex used by a run (label " +
                            machine_.labels()->name(label) + ", states " + std::to_string(s1) +
                            "," + std::to_string(s2) + ")");
    return cond_.cond.component_of[vertex];
}

void TreeJepPipeline::build_pairs() {
    const int k = machine_.labels()->size();
    std::set<std::pair<int, const TreeWalk::Node*>> seen;
    std::vector<std::pair<int, TreeWalk>> work;
    auto add_pair = [&](int state, const TreeWalk& walk) {
        if (!seen.emplace(state, walk.node().get()).second) return;
        work.emplace_back(state, walk);
        if (work.size() > caps_.max_families)
            throw SizeLimitError("realizable (state, walk) pairs exceed the cap of " +
                                 std::to_string(caps_.max_families));
    };
    for (int l = 0; l < k; ++l)
        add_pair(machine_.leaf_state(l), make_walk(cond_.initial_component[l], {}));
    for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (int l = 0; l < k; ++l) {
                // copies: the vector may reallocate as pairs are added
                auto [s1, w1] = work[i];
                auto [s2, w2] = work[j];
                int state = machine_.merge_state(l, s1, s2);
                int comp = gluing_component(l, s1, s2);
                std::vector<TreeWalk> children;
                for (const auto& w : {w1, w2}) {
                    if (w.component() == comp)
                        for (const auto& c : w.node()->children) children.emplace_back(c);
                    else
                        children.push_back(w);
                }
                add_pair(state, make_walk(comp, std::move(children)));
            }

    // canonical order: by walk key, then state
    std::sort(work.begin(), work.end(),
              [](const std::pair<int, TreeWalk>& a, const std::pair<int, TreeWalk>& b) {
                  if (a.second.key() != b.second.key()) return a.second.key() < b.second.key();
                  return a.first < b.first;
              });
    pairs_ = std::move(work);
    pair_walk_.resize(pairs_.size());
    pair_accepting_.resize(pairs_.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        pair_ids_.emplace(std::make_pair(pairs_[p].first, pairs_[p].second.node().get()),
                          static_cast<int>(p));
        pair_accepting_[p] = machine_.accepting(pairs_[p].first);
        if (walks_.empty() || walks_.back().key() != pairs_[p].second.key())
            walks_.push_back(pairs_[p].second);
        pair_walk_[p] = static_cast<int>(walks_.size()) - 1;
    }
}

void TreeJepPipeline::build_combine_table() {
    const int k = machine_.labels()->size();
    const std::size_t p = pairs_.size();
    const std::size_t slots = static_cast<std::size_t>(k) * TreeAutomaton::pair_count(p);
    if (slots > (std::size_t{1} << 27))
        throw SizeLimitError("combine table would need " + std::to_string(slots) +
                             " entries; the automaton is too large for the walk machinery");
    combine_.assign(slots, -1);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            auto [s1, w1] = pairs_[i];
            auto [s2, w2] = pairs_[j];
            for (int l = 0; l < k; ++l) {
                int state = machine_.merge_state(l, s1, s2);
                int comp = gluing_component(l, s1, s2);
                std::vector<TreeWalk> children;
                for (const auto& w : {w1, w2}) {
                    if (w.component() == comp)
                        for (const auto& c : w.node()->children) children.emplace_back(c);
                    else
                        children.push_back(w);
                }
                TreeWalk walk = make_walk(comp, std::move(children));
                auto it = pair_ids_.find({state, walk.node().get()});
                if (it == pair_ids_.end())
                    throw InternalError("combine left the realizable fixpoint: " + walk.key());
                combine_[static_cast<std::size_t>(l) * TreeAutomaton::pair_count(p) +
                         TreeAutomaton::pair_index(static_cast<int>(i), static_cast<int>(j))] =
                    it->second;
            }
        }
}

int TreeJepPipeline::combine_pair(int label, int p, int q) const {
    return combine_[static_cast<std::size_t>(label) *
                        TreeAutomaton::pair_count(static_cast<int>(pairs_.size())) +
                    TreeAutomaton::pair_index(p, q)];
}

void TreeJepPipeline::build_reach() {
    const int k = machine_.labels()->size();
    const int p = static_cast<int>(pairs_.size());
    // growth digraph: a pair can become a child of any labeled parent with an
    // arbitrary realizable sibling
    Digraph growth(p);
    for (int i = 0; i < p; ++i) {
        std::vector<int> succ;
        for (int j = 0; j < p; ++j)
            for (int l = 0; l < k; ++l) succ.push_back(combine_pair(l, i, j));
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        for (int s : succ) growth.add_edge(i, s);
    }
    Condensation cond = condense(growth);
    // components are numbered topologically; sweep sinks-first
    std::vector<IdSet> comp_reach(cond.count);
    for (int c = cond.count - 1; c >= 0; --c) {
        IdSet set(p);
        for (int member : cond.members[c]) set.insert(member);
        for (int d : cond.adj[c])
            for (int member : comp_reach[d].to_vector()) set.insert(member);
        comp_reach[c] = std::move(set);
    }
    reach_.resize(p);
    for (int i = 0; i < p; ++i) reach_[i] = comp_reach[cond.component_of[i]];

    leaf_families_.clear();
    for (int l = 0; l < k; ++l) {
        IdSet core(p);
        TreeWalk leaf = make_walk(cond_.initial_component[l], {});
        int id = pair_id(machine_.leaf_state(l), leaf);
        if (id < 0) throw InternalError("leaf pair missing from the fixpoint");
        core.insert(id);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j) core.insert(combine_pair(l, i, j));
        leaf_families_.push_back(close_up(core));
    }
}

TreeJepPipeline::TreeJepPipeline(const TreeAutomaton& machine, Caps caps)
    : machine_(ta_trim(machine)), caps_(caps) {
    gluing_ = build_gluing_graph(machine_);
    walk_graph_ = build_walk_graph(machine_, gluing_);
    cond_ = condense_walk_graph(machine_, walk_graph_);
    build_pairs();
    build_combine_table();
    build_reach();
}

int TreeJepPipeline::walk_id(const TreeWalk& w) const {
    auto it =
        std::lower_bound(walks_.begin(), walks_.end(), w.key(),
                         [](const TreeWalk& a, const std::string& key) { return a.key() < key; });
    if (it == walks_.end() || it->key() != w.key()) return -1;
    return static_cast<int>(it - walks_.begin());
}

int TreeJepPipeline::pair_id(int state, const TreeWalk& walk) const {
    auto it = pair_ids_.find({state, walk.node().get()});
    return it == pair_ids_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// walks of trees

namespace {

struct EvalPlan {
    std::vector<int> label;
    std::vector<int> left, right;  // -1 for leaves
    std::vector<int> state;
    int root;
};

EvalPlan evaluate(const TreeAutomaton& m, const BinaryTree& z) {
    require_same_labels(*m.labels(), *z.labels(), "walk_of_tree");
    EvalPlan plan;
    std::function<int(const BinaryTree::Node*)> visit = [&](const BinaryTree::Node* n) -> int {
        int left = -1, right = -1;
        if (n->left) {
            left = visit(n->left.get());
            right = visit(n->right.get());
        }
        int id = static_cast<int>(plan.label.size());
        plan.label.push_back(n->label);
        plan.left.push_back(left);
        plan.right.push_back(right);
        plan.state.push_back(left == -1 ? m.leaf_state(n->label)
                                        : m.merge_state(n->label, plan.state[left],
                                                        plan.state[right]));
        return id;
    };
    plan.root = visit(z.root().get());
    return plan;
}

}  // namespace

TreeWalk TreeJepPipeline::walk_of_tree_definitional(const BinaryTree& z) const {
    EvalPlan plan = evaluate(machine_, z);
    const int count = static_cast<int>(plan.label.size());
    std::vector<int> component(count);
    for (int u = 0; u < count; ++u) {
        if (plan.left[u] == -1) {
            component[u] = cond_.cond.component_of[walk_graph_.initial_vertex[plan.label[u]]];
        } else {
            component[u] = gluing_component(plan.label[u], plan.state[plan.left[u]],
                                            plan.state[plan.right[u]]);
        }
    }
    // contract connected same-component regions (ordered, mutable tree)
    struct Mut {
        int component;
        std::vector<int> children;
    };
    std::vector<Mut> arena;
    std::function<int(int)> contract = [&](int u) -> int {
        std::vector<int> kids;
        if (plan.left[u] != -1) {
            for (int v : {plan.left[u], plan.right[u]}) {
                int child = contract(v);
                if (arena[child].component == component[u]) {
                    for (int grand : arena[child].children) kids.push_back(grand);
                } else {
                    kids.push_back(child);
                }
            }
        }
        arena.push_back({component[u], std::move(kids)});
        return static_cast<int>(arena.size() - 1);
    };
    int root = contract(plan.root);

    // delete duplicate siblings until none remain
    std::function<std::string(int)> serialize = [&](int u) -> std::string {
        std::string s = std::to_string(arena[u].component);
        if (!arena[u].children.empty()) {
            std::vector<std::string> parts;
            for (int c : arena[u].children) parts.push_back(serialize(c));
            std::sort(parts.begin(), parts.end());
            s += '(';
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) s += ',';
                s += parts[i];
            }
            s += ')';
        }
        return s;
    };
    bool deleted = true;
    while (deleted) {
        deleted = false;
        std::function<void(int)> sweep = [&](int u) {
            std::set<std::string> seen;
            std::vector<int> kept;
            for (int c : arena[u].children) {
                if (seen.insert(serialize(c)).second)
                    kept.push_back(c);
                else
                    deleted = true;
            }
            arena[u].children = std::move(kept);
            for (int c : arena[u].children) sweep(c);
        };
        sweep(root);
    }

    std::function<TreeWalk(int)> build = [&](int u) -> TreeWalk {
        std::vector<TreeWalk> kids;
        for (int c : arena[u].children) kids.push_back(build(c));
        return make_walk(arena[u].component, std::move(kids));
    };
    return build(root);
}

TreeWalk TreeJepPipeline::walk_of_tree_compositional(const BinaryTree& z) const {
    EvalPlan plan = evaluate(machine_, z);
    std::vector<TreeWalk> walk_of(plan.label.size(), TreeWalk(nullptr));
    for (int u = 0; u < static_cast<int>(plan.label.size()); ++u) {
        if (plan.left[u] == -1) {
            walk_of[u] =
                make_walk(cond_.cond.component_of[walk_graph_.initial_vertex[plan.label[u]]], {});
            continue;
        }
        int comp = gluing_component(plan.label[u], plan.state[plan.left[u]],
                                    plan.state[plan.right[u]]);
        std::vector<TreeWalk> children;
        for (int v : {plan.left[u], plan.right[u]}) {
            const TreeWalk& w = walk_of[v];
            if (w.component() == comp)
                for (const auto& c : w.node()->children) children.emplace_back(c);
            else
                children.push_back(w);
        }
        walk_of[u] = make_walk(comp, std::move(children));
    }
    return walk_of[plan.root];
}

TreeWalk TreeJepPipeline::walk_of_tree(const BinaryTree& z) const {
    TreeWalk a = walk_of_tree_definitional(z);
    TreeWalk b = walk_of_tree_compositional(z);
    if (a != b)
        throw InternalError("walk_of_tree routes disagree on " + z.to_sexpr() + ": " + a.key() +
                            " vs " + b.key());
    return a;
}

// ---------------------------------------------------------------------------
// prefixes

bool TreeJepPipeline::embeds(const TreeWalk::Node* a, const TreeWalk::Node* b) const {
    if (a->component != b->component) return false;
    if (a->children.empty()) return b->children.empty();
    if (b->children.empty()) return false;
    auto& memo = embed_memo_[a];
    auto it = memo.find(b);
    if (it != memo.end()) return it->second;
    const auto& pa = a->children;
    const auto& pb = b->children;
    bool ok = false;
    if (pa.size() <= pb.size()) {
        std::vector<int> assigned_to(pb.size(), -1);
        std::function<bool(std::size_t, std::vector<char>&)> augment =
            [&](std::size_t i, std::vector<char>& visited) -> bool {
            for (std::size_t j = 0; j < pb.size(); ++j) {
                if (visited[j] || !embeds(pa[i].get(), pb[j].get())) continue;
                visited[j] = 1;
                if (assigned_to[j] < 0 ||
                    augment(static_cast<std::size_t>(assigned_to[j]), visited)) {
                    assigned_to[j] = static_cast<int>(i);
                    return true;
                }
            }
            return false;
        };
        ok = true;
        for (std::size_t i = 0; i < pa.size() && ok; ++i) {
            std::vector<char> visited(pb.size(), 0);
            ok = augment(i, visited);
        }
    }
    memo[b] = ok;
    return ok;
}

bool TreeJepPipeline::walk_prefix(const TreeWalk& w1, const TreeWalk& w) const {
    bool found = false;
    std::function<void(const TreeWalk::Node*)> visit = [&](const TreeWalk::Node* v) {
        if (found) return;
        if (embeds(w1.node().get(), v)) {
            found = true;
            return;
        }
        for (const auto& c : v->children) visit(c.get());
    };
    visit(w.node().get());
    return found;
}

// ---------------------------------------------------------------------------
// syntactic walk enumeration

std::vector<TreeWalk> TreeJepPipeline::syntactic_walks(std::size_t cap) const {
    const int n = cond_.cond.count;
    std::vector<std::vector<TreeWalk>> subtrees(n);
    std::size_t total = 0;
    for (int c = 0; c < n; ++c) {
        if (cond_.initial[c]) {
            subtrees[c].push_back(make_walk(c, {}));
            ++total;
            continue;
        }
        if (!cond_.gluing[c]) continue;
        std::vector<TreeWalk> pool;
        for (int f : cond_.feeders[c])
            pool.insert(pool.end(), subtrees[f].begin(), subtrees[f].end());
        if (pool.empty()) continue;
        if (pool.size() >= 63)
            throw SizeLimitError("tree-walk enumeration explodes: a component has " +
                                 std::to_string(pool.size()) + " candidate child subtrees");
        std::uint64_t count = (1ULL << pool.size()) - 1;
        if (total + count > cap)
            throw SizeLimitError("tree-walk enumeration exceeds the cap of " +
                                 std::to_string(cap) + " walks");
        for (std::uint64_t mask = 1; mask < (1ULL << pool.size()); ++mask) {
            std::vector<TreeWalk> children;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (mask >> i & 1) children.push_back(pool[i]);
            subtrees[c].push_back(make_walk(c, std::move(children)));
        }
        total += count;
    }
    std::vector<TreeWalk> out;
    for (int c = 0; c < n; ++c) out.insert(out.end(), subtrees[c].begin(), subtrees[c].end());
    std::sort(out.begin(), out.end(),
              [](const TreeWalk& a, const TreeWalk& b) { return a.key() < b.key(); });
    return out;
}

// ---------------------------------------------------------------------------
// summaries (the walk-family automaton)

TreeJepPipeline::Family TreeJepPipeline::close_up(const IdSet& core) const {
    IdSet out(pairs_.size());
    for (int p : core.to_vector())
        for (int q : reach_[p].to_vector()) out.insert(q);
    std::vector<int> ids = out.to_vector();
    return ids;
}

int TreeJepPipeline::intern_family(Family f) const {
    auto [it, fresh] = family_ids_.emplace(std::move(f), static_cast<int>(families_.size()));
    if (fresh) families_.push_back(&it->first);
    return it->second;
}

TreeJepPipeline::Family TreeJepPipeline::leaf_family(int label) const {
    if (label < 0 || label >= machine_.labels()->size())
        throw LabelMismatchError("label index outside the automaton's labels");
    return leaf_families_[label];
}

TreeJepPipeline::Family TreeJepPipeline::merge_family(int label, const Family& f1,
                                                      const Family& f2) const {
    int id1 = intern_family(f1);
    int id2 = intern_family(f2);
    if (id1 > id2) std::swap(id1, id2);  // combining is symmetric
    auto key = std::make_tuple(label, id1, id2);
    auto memo = merge_memo_.find(key);
    if (memo != merge_memo_.end()) return *families_[memo->second];
    IdSet core(pairs_.size());
    for (int i : *families_[id1])
        for (int j : *families_[id2]) core.insert(combine_pair(label, i, j));
    Family result = close_up(core);
    int rid = intern_family(result);
    merge_memo_.emplace(key, rid);
    return result;
}

TreeJepPipeline::Family TreeJepPipeline::n_run(const BinaryTree& x) const {
    require_same_labels(*machine_.labels(), *x.labels(), "n_run");
    std::function<Family(const BinaryTree::Node*)> visit =
        [&](const BinaryTree::Node* n) -> Family {
        if (!n->left) return leaf_family(n->label);
        Family f1 = visit(n->left.get());
        Family f2 = visit(n->right.get());
        return merge_family(n->label, f1, f2);
    };
    return visit(x.root().get());
}

std::vector<int> TreeJepPipeline::wset_from_family(const Family& family) const {
    std::vector<int> out;
    for (int p : family)
        if (pair_accepting_[p]) out.push_back(pair_walk_[p]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> TreeJepPipeline::wset(const BinaryTree& x) const {
    return wset_from_family(n_run(x));
}

bool TreeJepPipeline::joint_by_walks(const BinaryTree& x, const BinaryTree& y) const {
    std::vector<int> wx = wset(x), wy = wset(y), common;
    std::set_intersection(wx.begin(), wx.end(), wy.begin(), wy.end(),
                          std::back_inserter(common));
    return !common.empty();
}

TreeJepBounds TreeJepPipeline::bounds() const {
    TreeJepBounds b;
    b.realizable_walks = walks_.size();
    b.realizable_pairs = pairs_.size();
    std::uint64_t w;
    try {
        b.walk_count = syntactic_walks(caps_.max_walks).size();
        b.walk_count_exact = true;
        w = b.walk_count;
    } catch (const SizeLimitError&) {
        b.walk_count = caps_.max_walks;
        b.walk_count_exact = false;
        w = b.walk_count;
    }
    const char* prefix = b.walk_count_exact ? "" : ">= ";
    if (w <= 16)
        b.pair_size_bound = prefix + pow2_string(1ULL << w);
    else if (w < 64)
        b.pair_size_bound = prefix + ("2^" + std::to_string(1ULL << w));
    else
        b.pair_size_bound = prefix + ("2^2^" + std::to_string(w));
    const std::uint64_t factor =
        static_cast<std::uint64_t>(machine_.state_count()) * machine_.labels()->size();
    if (factor != 0 && w <= UINT64_MAX / factor)
        b.realization_bound = prefix + pow2_string(w * factor);
    else
        b.realization_bound =
            prefix + ("2^(" + std::to_string(w) + "*" + std::to_string(factor) + ")");
    return b;
}

// ---------------------------------------------------------------------------
// joint embedding

bool joint_tree_by_product(const TreeAutomaton& m, const BinaryTree& x, const BinaryTree& y) {
    TreeAutomaton product = ta_intersection(ta_intersection(m, sup_tree_automaton(x, m.labels())),
                                            sup_tree_automaton(y, m.labels()));
    return ta_empty_witness(product).has_value();
}

bool joint_tree(const TreeAutomaton& m, const BinaryTree& x, const BinaryTree& y) {
    TreeJepPipeline pipeline(m);
    bool route_a = pipeline.joint_by_walks(x, y);
    bool route_b = joint_tree_by_product(pipeline.machine(), x, y);
    if (route_a != route_b)
        throw InternalError("joint_tree routes disagree on x=" + x.to_sexpr() +
                            " y=" + y.to_sexpr());
    return route_b;
}

std::optional<BinaryTree> joint_witness(const TreeAutomaton& m, const BinaryTree& x,
                                        const BinaryTree& y) {
    TreeAutomaton product = ta_intersection(ta_intersection(m, sup_tree_automaton(x, m.labels())),
                                            sup_tree_automaton(y, m.labels()));
    return ta_empty_witness(product);
}

TreeVerdict decide_jep_tree(const TreeAutomaton& m, PairMode mode, Caps caps) {
    TreeJepPipeline pipeline(m, caps);
    const TreeAutomaton& machine = pipeline.machine();
    const int k = machine.labels()->size();

    // reachable (state, family) product states with smallest witness trees,
    // finalized in witness order so combinations always use final witnesses
    std::map<TreeJepPipeline::Family, int> family_ids;
    std::vector<TreeJepPipeline::Family> families;
    auto intern_family = [&](TreeJepPipeline::Family f) {
        auto [it, fresh] = family_ids.emplace(std::move(f), static_cast<int>(families.size()));
        if (fresh) families.push_back(it->first);
        return it->second;
    };

    struct PState {
        int state;
        int family;
        BinaryTree witness;
        std::string witness_key;
        bool finalized = false;
    };
    std::map<std::pair<int, int>, int> ids;
    std::vector<PState> states;
    using HeapItem = std::tuple<int, std::string, int>;  // (size, key, id)
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;

    auto offer = [&](int state, int family, const BinaryTree& witness, const std::string& key) {
        auto at = ids.find({state, family});
        if (at == ids.end()) {
            if (states.size() >= caps.max_families) {
                auto b = pipeline.bounds();
                throw SizeLimitError(
                    "reachable walk-family product states exceed the cap of " +
                    std::to_string(caps.max_families) +
                    " (realizable walks: " + std::to_string(b.realizable_walks) +
                    ", pair size bound: " + b.pair_size_bound +
                    ", realization bound: " + b.realization_bound + ")");
            }
            int id = static_cast<int>(states.size());
            ids.emplace(std::make_pair(state, family), id);
            states.push_back({state, family, witness, key});
            heap.emplace(witness.size(), key, id);
        } else {
            PState& cur = states[at->second];
            if (cur.finalized) return;
            if (witness.size() < cur.witness.size() ||
                (witness.size() == cur.witness.size() && key < cur.witness_key)) {
                cur.witness = witness;
                cur.witness_key = key;
                heap.emplace(witness.size(), key, at->second);
            }
        }
    };

    for (int l = 0; l < k; ++l) {
        BinaryTree leaf = BinaryTree::leaf(machine.labels(), l);
        offer(machine.leaf_state(l), intern_family(pipeline.leaf_family(l)), leaf,
              leaf.to_sexpr());
    }
    std::vector<int> finalized;
    while (!heap.empty()) {
        auto [size, key, id] = heap.top();
        heap.pop();
        PState& state = states[id];
        if (state.finalized || key != state.witness_key) continue;
        state.finalized = true;
        finalized.push_back(id);
        for (int other : finalized)
            for (int l = 0; l < k; ++l) {
                const PState a = states[id];
                const PState b = states[other];
                int ns = machine.merge_state(l, a.state, b.state);
                int nf =
                    intern_family(pipeline.merge_family(l, families[a.family], families[b.family]));
                BinaryTree witness = BinaryTree::node(l, a.witness, b.witness).canonical();
                offer(ns, nf, witness, witness.to_sexpr());
            }
    }

    // group relevant states by walk set, keeping the best witness
    std::vector<std::vector<int>> family_wset(families.size());
    std::vector<bool> ready(families.size(), false);
    struct Group {
        std::vector<int> wset;
        BinaryTree witness;
        std::string key;
    };
    std::map<std::vector<int>, int> group_ids;
    std::vector<Group> groups;
    for (const auto& st : states) {
        if (mode == PairMode::Bad && !machine.accepting(st.state)) continue;
        if (!ready[st.family]) {
            family_wset[st.family] = pipeline.wset_from_family(families[st.family]);
            ready[st.family] = true;
        }
        const auto& w = family_wset[st.family];
        auto [it, fresh] = group_ids.emplace(w, static_cast<int>(groups.size()));
        if (fresh)
            groups.push_back({w, st.witness, st.witness_key});
        else {
            Group& g = groups[it->second];
            if (st.witness.size() < g.witness.size() ||
                (st.witness.size() == g.witness.size() && st.witness_key < g.key)) {
                g.witness = st.witness;
                g.key = st.witness_key;
            }
        }
    }

    bool found = false;
    std::optional<std::pair<Group, Group>> best;
    auto group_less = [](const Group& a, const Group& b) {
        if (a.witness.size() != b.witness.size()) return a.witness.size() < b.witness.size();
        return a.key < b.key;
    };
    auto better = [&](const std::pair<Group, Group>& a, const std::pair<Group, Group>& b) {
        int sa = a.first.witness.size() + a.second.witness.size();
        int sb = b.first.witness.size() + b.second.witness.size();
        if (sa != sb) return sa < sb;
        if (a.first.key != b.first.key) return a.first.key < b.first.key;
        return a.second.key < b.second.key;
    };
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i; j < groups.size(); ++j) {
            std::vector<int> common;
            std::set_intersection(groups[i].wset.begin(), groups[i].wset.end(),
                                  groups[j].wset.begin(), groups[j].wset.end(),
                                  std::back_inserter(common));
            if (!common.empty()) continue;
            Group x = groups[i], y = groups[j];
            if (group_less(y, x)) std::swap(x, y);
            std::pair<Group, Group> cand{x, y};
            if (!found || better(cand, *best)) {
                best = cand;
                found = true;
            }
        }

    if (!found) return {true, std::nullopt, std::nullopt, {}};

    const BinaryTree& x = best->first.witness;
    const BinaryTree& y = best->second.witness;
    if (joint_tree_by_product(machine, x, y))
        throw InternalError("bad pair failed product-emptiness certification");
    if (mode == PairMode::Bad && (!machine.accepts(x) || !machine.accepts(y)))
        throw InternalError("bad pair member is not a language member");
    return {false, x, y, "product-empty"};
}

TreeJepBounds report_tree_bounds(const TreeAutomaton& m, Caps caps) {
    return TreeJepPipeline(m, caps).bounds();
}

}  // namespace jep
