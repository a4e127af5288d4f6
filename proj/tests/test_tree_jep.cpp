#include <functional>
#include <set>

#include "doctest.h"
#include "jep/errors.hpp"
#include "jep/oracle.hpp"
#include "jep/tree_jep.hpp"

using namespace jep;

namespace {

LabelSetPtr two() { return LabelSet::make(2); }
BinaryTree bt(const char* text) { return BinaryTree::parse(two(), text); }

TreeAutomaton all_zero() {
    std::vector<int> merge(2 * TreeAutomaton::pair_count(2), 1);
    merge[0 * 3 + TreeAutomaton::pair_index(0, 0)] = 0;
    return TreeAutomaton(two(), 2, {true, false}, {0, 1}, std::move(merge));
}

TreeAutomaton all_zero_or_all_one() {
    std::vector<int> merge(2 * TreeAutomaton::pair_count(3), 2);
    merge[0 * 6 + TreeAutomaton::pair_index(0, 0)] = 0;
    merge[1 * 6 + TreeAutomaton::pair_index(1, 1)] = 1;
    return TreeAutomaton(two(), 3, {true, true, false}, {0, 1}, std::move(merge));
}

TreeAutomaton everything() {
    return TreeAutomaton(two(), 1, {true}, {0, 0}, std::vector<int>(2, 0));
}

// all prefixes of a walk by exhaustive selection of connected subtrees whose
// leaves are leaves of the walk; keys use the same sorted serialization as
// the interner
std::set<std::string> brute_prefix_keys(const TreeWalk& w) {
    using Node = TreeWalk::Node;
    std::function<std::vector<std::string>(const Node*)> selections =
        [&](const Node* v) -> std::vector<std::string> {
        std::vector<std::string> out;
        if (v->children.empty()) {
            out.push_back(std::to_string(v->component));
            return out;
        }
        // nonempty child subsets, each child contributing any of its selections
        std::vector<std::vector<std::string>> per_child;
        for (const auto& c : v->children) per_child.push_back(selections(c.get()));
        const std::size_t n = v->children.size();
        for (std::size_t mask = 1; mask < (1ULL << n); ++mask) {
            std::vector<int> chosen;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) chosen.push_back(static_cast<int>(i));
            std::vector<std::string> parts(chosen.size());
            std::function<void(std::size_t)> assign = [&](std::size_t slot) {
                if (slot == chosen.size()) {
                    std::vector<std::string> sorted = parts;
                    std::sort(sorted.begin(), sorted.end());
                    std::string key = std::to_string(v->component) + "(";
                    for (std::size_t i = 0; i < sorted.size(); ++i) {
                        if (i) key += ',';
                        key += sorted[i];
                    }
                    key += ')';
                    out.push_back(key);
                    return;
                }
                for (const auto& sel : per_child[chosen[slot]]) {
                    parts[slot] = sel;
                    assign(slot + 1);
                }
            };
            assign(0);
        }
        return out;
    };
    std::set<std::string> keys;
    std::function<void(const Node*)> visit = [&](const Node* v) {
        for (const auto& key : selections(v)) keys.insert(key);
        for (const auto& c : v->children) visit(c.get());
    };
    visit(w.node().get());
    return keys;
}

}  // namespace

TEST_CASE("gluing graph shape") {
    // one state, one label: one tree-like, one forest-like vertex, one gluing
    // edge and one union edge
    TreeAutomaton tiny(LabelSet::make(1), 1, {true}, {0}, {0});
    GluingGraph gg = build_gluing_graph(tiny);
    CHECK(gg.graph.vertex_count == 2);
    CHECK(gg.graph.edges.size() == 2);
    CHECK(gg.gluing_edge_count() == 1);

    // gluing edges are total over (label, unordered pair)
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 3, 2);
        GluingGraph g = build_gluing_graph(m);
        int gluing = 0;
        for (const auto& e : g.graph.edges)
            if (e.label >= 0) ++gluing;
        CHECK(gluing == 2 * TreeAutomaton::pair_count(m.state_count()));
        CHECK(gluing == g.gluing_edge_count());
    }

    // all-0 automaton: 4 tree-like + 3 forest-like vertices, 6 gluing and 8
    // union edges
    GluingGraph g0 = build_gluing_graph(all_zero());
    CHECK(g0.graph.vertex_count == 7);
    CHECK(g0.gluing_edge_count() == 6);
    CHECK(g0.graph.edges.size() == 14);
}

TEST_CASE("walk graph structure") {
    TreeAutomaton m = all_zero();
    GluingGraph gg = build_gluing_graph(m);
    WalkGraph wg = build_walk_graph(m, gg);
    // one initial vertex per label, with no in-edges
    int initials = 0;
    std::vector<int> in_degree(wg.graph.size(), 0);
    for (int v = 0; v < wg.graph.size(); ++v)
        for (int w : wg.graph.adj[v]) ++in_degree[w];
    for (int v = 0; v < wg.graph.size(); ++v)
        if (wg.kind[v] == WalkGraph::Kind::Initial) {
            ++initials;
            CHECK(in_degree[v] == 0);
        }
    CHECK(initials == 2);
    // bipartite between gluing and union vertices
    for (int v = 0; v < wg.graph.size(); ++v)
        for (int w : wg.graph.adj[v]) {
            if (wg.kind[v] == WalkGraph::Kind::Gluing)
                CHECK(wg.kind[w] == WalkGraph::Kind::Union);
            if (wg.kind[v] == WalkGraph::Kind::Union)
                CHECK(wg.kind[w] == WalkGraph::Kind::Gluing);
            if (wg.kind[v] == WalkGraph::Kind::Initial)
                CHECK(wg.kind[w] == WalkGraph::Kind::Union);
        }
    // every post-initial union vertex is an out-neighbor of an initial vertex
    std::set<int> initial_succ;
    for (int v = 0; v < wg.graph.size(); ++v)
        if (wg.kind[v] == WalkGraph::Kind::Initial)
            for (int w : wg.graph.adj[v]) initial_succ.insert(w);
    for (std::size_t e = 0; e < gg.graph.edges.size(); ++e) {
        const auto& edge = gg.graph.edges[e];
        if (edge.label >= 0) continue;
        int state = gg.tree_vertex_state(edge.tail);
        int label = gg.tree_vertex_label(edge.tail);
        if (m.leaf_state(label) != state) continue;
        int v = wg.vertex_of_edge[e];
        REQUIRE(v >= 0);  // post-initial vertices are always kept
        CHECK(initial_succ.count(v) == 1);
    }
}

TEST_CASE("condensation flags on the all-0 automaton") {
    TreeJepPipeline pipeline(all_zero());
    const TreeCondensation& tc = pipeline.condensation();
    // two initial components, the clean loop, the spoiling gluing vertex,
    // the one-clean-child union vertex, and the spoiled cluster
    CHECK(tc.cond.count == 6);
    int loopy = 0, accepting = 0, initial = 0;
    for (int c = 0; c < tc.cond.count; ++c) {
        if (tc.cond.loopy[c]) ++loopy;
        if (tc.accepting[c]) ++accepting;
        if (tc.initial[c]) ++initial;
    }
    CHECK(loopy == 2);
    CHECK(initial == 2);
    // the clean loop and the 0-leaf initial component accept
    CHECK(accepting == 2);
    CHECK(tc.accepting[tc.initial_component[0]]);
    CHECK_FALSE(tc.accepting[tc.initial_component[1]]);
    // loopy components are both gluing and union
    for (int c = 0; c < tc.cond.count; ++c)
        if (tc.cond.loopy[c]) {
            CHECK(tc.gluing[c]);
            CHECK(tc.union_like[c]);
        }
    // initial components are singletons
    for (int l = 0; l < 2; ++l)
        CHECK(tc.cond.members[tc.initial_component[l]].size() == 1);
}

TEST_CASE("walk enumeration on the all-0 automaton") {
    TreeJepPipeline pipeline(all_zero());
    // realizable walks, counted by hand: the two leaf walks; the clean loop
    // over a 0-leaf; three spoiler walks (children drawn from {0-leaf, clean
    // loop}); and 60 spoiled-cluster walks (the 63 nonempty subsets of the
    // six feeder walks minus the three without any spoiled child)
    CHECK(pipeline.walks().size() == 66);
    // the structural enumeration also admits the three unrealizable subsets
    CHECK(pipeline.syntactic_walks(Caps().max_walks).size() == 69);
    // every walk of a small tree is found
    std::set<std::string> syntactic;
    for (const auto& w : pipeline.syntactic_walks(Caps().max_walks)) syntactic.insert(w.key());
    for (const auto& w : pipeline.walks()) CHECK(syntactic.count(w.key()) == 1);
    for (const auto& z : enumerate_binary(two(), 9)) {
        TreeWalk w = pipeline.walk_of_tree(z);
        CHECK(pipeline.walk_id(w) >= 0);
    }
}

TEST_CASE("walks of trees on the all-0 automaton") {
    TreeJepPipeline pipeline(all_zero());
    TreeWalk leaf0 = pipeline.walk_of_tree(bt("(0)"));
    CHECK(leaf0.size() == 1);
    CHECK(leaf0.component() == pipeline.condensation().initial_component[0]);
    // all-0 trees of any shape share one walk of depth 2
    TreeWalk small = pipeline.walk_of_tree(bt("(0 (0) (0))"));
    TreeWalk big = pipeline.walk_of_tree(bt("(0 (0 (0) (0)) (0 (0) (0)))"));
    TreeWalk lopsided = pipeline.walk_of_tree(bt("(0 (0 (0) (0)) (0))"));
    CHECK(small == big);
    CHECK(small == lopsided);
    CHECK(small.size() == 2);
    CHECK(small.node()->children[0]->component == pipeline.condensation().initial_component[0]);
}

TEST_CASE("walk routes agree and ignore child order") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 3, 2);
        TreeJepPipeline pipeline(m);
        for (int i = 0; i < 1000; ++i) {
            BinaryTree t = random_binary_tree(rng, two(), 11);
            TreeWalk a = pipeline.walk_of_tree_definitional(t);
            TreeWalk b = pipeline.walk_of_tree_compositional(t);
            REQUIRE(a == b);
            REQUIRE(a == pipeline.walk_of_tree_definitional(t.canonical()));
        }
    }
}

TEST_CASE("realizability fixpoint covers bounded generation on the all-0 automaton") {
    TreeJepPipeline pipeline(all_zero());
    std::set<int> generated;
    for (const auto& z : enumerate_binary(two(), 9))
        generated.insert(pipeline.walk_id(pipeline.walk_of_tree(z)));
    std::set<int> fixpoint;
    for (const auto& [state, walk] : pipeline.realizable_pairs())
        fixpoint.insert(pipeline.walk_id(walk));
    // the fixpoint closes over all trees; 9-node generation reaches a strict
    // subset (some spoiled-cluster child sets need larger members)
    CHECK(std::includes(fixpoint.begin(), fixpoint.end(), generated.begin(), generated.end()));
    CHECK(generated.size() < fixpoint.size());
    CHECK(fixpoint.size() == 66);
}

TEST_CASE("realizability is sound on random automata") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 3, 2);
        TreeJepPipeline pipeline(m);
        for (int i = 0; i < 200; ++i) {
            BinaryTree t = random_binary_tree(rng, two(), 9);
            TreeWalk w = pipeline.walk_of_tree(t);
            REQUIRE(pipeline.walk_id(w) >= 0);
            CHECK(pipeline.pair_id(ta_run(pipeline.machine(), t), w) >= 0);
        }
    }
}

TEST_CASE("walk prefixes agree with the exhaustive subgraph check") {
    for (auto machine : {all_zero(), all_zero_or_all_one()}) {
        TreeJepPipeline pipeline(machine);
        std::vector<const TreeWalk*> small;
        for (const auto& w : pipeline.walks())
            if (w.size() <= 5) small.push_back(&w);
        for (const auto* w : small) {
            auto keys = brute_prefix_keys(*w);
            CHECK(pipeline.walk_prefix(*w, *w));  // every walk prefixes itself
            for (const auto* w1 : small)
                REQUIRE(pipeline.walk_prefix(*w1, *w) == (keys.count(w1->key()) == 1));
        }
    }
}

TEST_CASE("leaf families and wsets on the all-0 automaton") {
    TreeJepPipeline pipeline(all_zero());
    auto f0 = pipeline.leaf_family(0);
    REQUIRE(f0.size() == 1);
    CHECK(pipeline.walks()[f0[0]].size() == 1);

    // wset(leaf 0) is exactly the walks of members, computed by scanning
    std::set<int> scan;
    for (const auto& z : enumerate_binary(two(), 9)) {
        if (!pipeline.machine().accepts(z)) continue;
        scan.insert(pipeline.walk_id(pipeline.walk_of_tree(z)));
    }
    auto got = pipeline.wset(bt("(0)"));
    CHECK(std::set<int>(got.begin(), got.end()) == scan);
    CHECK(got.size() == 2);
    // a tree containing a 1 embeds into no member
    CHECK(pipeline.wset(bt("(1)")).empty());
    CHECK(pipeline.wset(bt("(1 (0) (0))")).empty());
    // members keep their own walk
    for (const auto& z : enumerate_binary(two(), 5)) {
        if (!pipeline.machine().accepts(z)) continue;
        auto ws = pipeline.wset(z);
        CHECK(std::binary_search(ws.begin(), ws.end(),
                                 pipeline.walk_id(pipeline.walk_of_tree(z))));
    }
}

TEST_CASE("wset shrinks as the pattern grows") {
    TreeJepPipeline pipeline(all_zero_or_all_one());
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryTree t = random_binary_tree(rng, two(), 7);
        auto wt = pipeline.wset(t);
        BinaryTree bigger = BinaryTree::node(rng.range(0, 1), t,
                                             random_binary_tree(rng, two(), 5));
        auto wb = pipeline.wset(bigger);
        CHECK(std::includes(wt.begin(), wt.end(), wb.begin(), wb.end()));
    }
}

TEST_CASE("definitional cross-check of wset on tiny automata") {
    Rng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 2, 2);
        TreeJepPipeline pipeline(m);
        auto all = enumerate_binary(two(), 9);
        for (int i = 0; i < 20; ++i) {
            BinaryTree x = random_binary_tree(rng, two(), 7);
            auto ws = pipeline.wset(x);
            std::set<int> got(ws.begin(), ws.end());
            // one-sided beyond the scan bound: every scanned member walk
            // must be present
            for (const auto& z : all) {
                if (!pipeline.machine().accepts(z)) continue;
                if (!binary_contains(z, x)) continue;
                int id = pipeline.walk_id(pipeline.walk_of_tree(z));
                REQUIRE(got.count(id) == 1);
            }
        }
    }
}

TEST_CASE("joint embedding routes agree on the worked examples") {
    TreeAutomaton zero = all_zero();
    CHECK(joint_tree(zero, bt("(0)"), bt("(0 (0) (0))")));
    auto witness = joint_witness(zero, bt("(0)"), bt("(0 (0) (0))"));
    REQUIRE(witness.has_value());
    CHECK(zero.accepts(*witness));
    CHECK(binary_contains(*witness, bt("(0)")));
    CHECK(binary_contains(*witness, bt("(0 (0) (0))")));

    TreeAutomaton split = all_zero_or_all_one();
    CHECK_FALSE(joint_tree(split, bt("(0)"), bt("(1)")));
    CHECK_FALSE(joint_witness(split, bt("(0)"), bt("(1)")).has_value());
    CHECK(joint_tree(split, bt("(1 (1) (1))"), bt("(1 (1) (1))")));

    // smallest witness over everything: a three-node tree with both labels
    auto both = joint_witness(everything(), bt("(0)"), bt("(1)"));
    REQUIRE(both.has_value());
    CHECK(both->size() == 3);
    CHECK(binary_contains(*both, bt("(0)")));
    CHECK(binary_contains(*both, bt("(1)")));
}

TEST_CASE("claim-1 equivalence for trees on random automata") {
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 3, 2);
        TreeJepPipeline pipeline(m);
        for (int i = 0; i < 60; ++i) {
            BinaryTree x = random_binary_tree(rng, two(), 7);
            BinaryTree y = random_binary_tree(rng, two(), 7);
            bool route_a = pipeline.joint_by_walks(x, y);
            bool route_b = joint_tree_by_product(pipeline.machine(), x, y);
            if (route_a != route_b) {
                CAPTURE(format_tree_automaton(m));
                CAPTURE(x.to_sexpr());
                CAPTURE(y.to_sexpr());
            }
            REQUIRE(route_a == route_b);
        }
    }
}

TEST_CASE("jep decisions for tree languages") {
    auto zero = decide_jep_tree(forb_tree_automaton({bt("(1)")}, two()));
    CHECK(zero.jep);

    auto split = decide_jep_tree(all_zero_or_all_one());
    REQUIRE_FALSE(split.jep);
    CHECK(split.x->to_sexpr() == "(0)");
    CHECK(split.y->to_sexpr() == "(1)");
    CHECK(split.certificate == "product-empty");

    CHECK(decide_jep_tree(everything()).jep);

    // verdicts survive exhaustive member scans
    CHECK(scan_bad_pairs_tree(forb_tree_automaton({bt("(1)")}, two()), 5).empty());
    CHECK(scan_bad_pairs_tree(everything(), 5).empty());
    auto bad = scan_bad_pairs_tree(all_zero_or_all_one(), 3);
    bool found = false;
    for (const auto& [x, y] : bad)
        if ((x.to_sexpr() == "(0)" && y.to_sexpr() == "(1)") ||
            (x.to_sexpr() == "(1)" && y.to_sexpr() == "(0)"))
            found = true;
    CHECK(found);
}

TEST_CASE("bounds diagnostics") {
    TreeJepBounds b = report_tree_bounds(all_zero());
    CHECK(b.realizable_walks == 66);
    CHECK(b.walk_count_exact);
    CHECK(b.walk_count == 69);
    CHECK(b.pair_size_bound == "2^2^69");
    CHECK(b.realization_bound == pow2_decimal(69 * 2 * 2));
    // at least one walk per label
    Rng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        TreeAutomaton m = random_tree_automaton(rng, 3, 2);
        CHECK(report_tree_bounds(m).realizable_walks >= 2);
    }
}
