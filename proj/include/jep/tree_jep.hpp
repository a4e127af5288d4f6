#ifndef JEP_TREE_JEP_HPP
#define JEP_TREE_JEP_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jep/digraph.hpp"
#include "jep/string_jep.hpp"  // PairMode
#include "jep/tree_automaton.hpp"
#include "jep/trees.hpp"
#include "jep/util.hpp"

namespace jep {

/// Auxiliary digraph built from a tree automaton: tree-like vertices (state,
/// label), forest-like vertices (unordered state pairs), gluing edges
/// {s1,s2} -> (m2(label,s1,s2), label) carrying the label, and unlabeled
/// union edges (t, label) -> {t, s}.
struct GluingGraph {
    int states = 0;
    int label_count = 0;
    EdgeGraph graph;  // tree-like vertices first, then forest-like

    int tree_vertex(int state, int label) const { return state * label_count + label; }
    int forest_vertex(int s, int t) const {
        return states * label_count + TreeAutomaton::pair_index(s, t);
    }
    bool is_tree_vertex(int v) const { return v < states * label_count; }
    int tree_vertex_state(int v) const { return v / label_count; }
    int tree_vertex_label(int v) const { return v % label_count; }

    /// gluing edges come first: index by (label, unordered pair)
    int gluing_edge(int label, int s, int t) const {
        return label * TreeAutomaton::pair_count(states) + TreeAutomaton::pair_index(s, t);
    }
    int gluing_edge_count() const { return label_count * TreeAutomaton::pair_count(states); }
};

GluingGraph build_gluing_graph(const TreeAutomaton& m);

/// Line graph of the gluing graph, restricted to vertices reachable from
/// post-initial union vertices, with one added initial vertex per label.
struct WalkGraph {
    enum class Kind { Initial, Gluing, Union };
    Digraph graph;
    std::vector<Kind> kind;
    std::vector<int> label;           // gluing: edge label; initial: label; union: -1
    std::vector<int> target_state;    // gluing: state of the target tree-like; else -1
    std::vector<int> initial_vertex;  // per label
    std::vector<int> vertex_of_edge;  // gluing-graph edge index -> vertex id or -1
};

WalkGraph build_walk_graph(const TreeAutomaton& m, const GluingGraph& gg);

/// Condensation of the walk graph with the flags the tree-walk machinery
/// reads. `feeders[c]` lists the components allowed as child labels under a
/// node labeled c in a tree walk: those c' with a two-step path
/// (gluing-or-initial in c') -> (union vertex) -> (gluing in c).
struct TreeCondensation {
    Condensation cond;
    std::vector<bool> initial, gluing, union_like, accepting;
    std::vector<int> initial_component;           // per label
    std::vector<std::vector<bool>> gluing_label;  // [component][label]
    std::vector<std::vector<int>> feeders;        // per component, sorted
};

TreeCondensation condense_walk_graph(const TreeAutomaton& m, const WalkGraph& wg);

/// Canonical rooted tree over condensation components: children sorted and
/// deduplicated. Interned per pipeline, so equal walks share one node.
class TreeWalk {
  public:
    struct Node {
        int component;
        std::vector<std::shared_ptr<const Node>> children;
        int size;
        std::string key;  // canonical serialization
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit TreeWalk(NodePtr node) : node_(std::move(node)) {}
    const NodePtr& node() const { return node_; }
    int component() const { return node_->component; }
    int size() const { return node_->size; }
    const std::string& key() const { return node_->key; }

    bool operator==(const TreeWalk& other) const { return node_ == other.node_; }
    bool operator!=(const TreeWalk& other) const { return node_ != other.node_; }

  private:
    NodePtr node_;
};

struct TreeJepBounds {
    std::size_t realizable_walks = 0;  // distinct walks of trees
    std::size_t realizable_pairs = 0;  // (root state, walk) combinations
    bool walk_count_exact = false;     // full walk enumeration fit the cap
    std::size_t walk_count = 0;        // full count, or the cap when inexact
    std::string pair_size_bound;       // 2^(2^walks)
    std::string realization_bound;     // 2^(walks * states * labels)
};

/// Everything derived from one tree automaton. The decision machinery runs
/// on the exact universe of realizable (state, walk) pairs: the summary of
/// an input tree X is the set { (state(U), walk(U)) : X embeds into U },
/// computed bottom-up with a context-growth closure. Walk families are sets
/// of pair ids into realizable_pairs().
class TreeJepPipeline {
  public:
    using Family = std::vector<int>;  // sorted pair ids

    explicit TreeJepPipeline(const TreeAutomaton& machine, Caps caps = {});

    const TreeAutomaton& machine() const { return machine_; }  // trimmed
    const GluingGraph& gluing_graph() const { return gluing_; }
    const WalkGraph& walk_graph() const { return walk_graph_; }
    const TreeCondensation& condensation() const { return cond_; }

    /// Distinct walks of trees, sorted by canonical key.
    const std::vector<TreeWalk>& walks() const { return walks_; }
    int walk_id(const TreeWalk& w) const;

    /// The least fixpoint of the combine step: every (root state, walk)
    /// combination realized by some tree, in canonical order.
    const std::vector<std::pair<int, TreeWalk>>& realizable_pairs() const { return pairs_; }
    int pair_id(int state, const TreeWalk& walk) const;
    int pair_walk(int pair) const { return pair_walk_[pair]; }
    bool pair_accepting(int pair) const { return pair_accepting_[pair]; }

    /// Interned walk construction; children are sorted and deduplicated.
    TreeWalk make_walk(int component, std::vector<TreeWalk> children) const;

    /// Walk of a tree by the contraction definition: relabel nodes by their
    /// gluing vertices, contract connected same-component regions, then
    /// delete duplicate siblings until none remain.
    TreeWalk walk_of_tree_definitional(const BinaryTree& z) const;
    /// Walk of a tree by bottom-up combination: hoist a child walk's children
    /// when its root component matches, then deduplicate one level.
    TreeWalk walk_of_tree_compositional(const BinaryTree& z) const;
    /// Both routes; raises InternalError if they disagree.
    TreeWalk walk_of_tree(const BinaryTree& z) const;

    /// True iff w1 is isomorphic to a connected subtree of w whose leaves are
    /// leaves of w (anchored at any vertex of w).
    bool walk_prefix(const TreeWalk& w1, const TreeWalk& w) const;

    /// All structurally valid tree walks (initial leaves, gluing internal
    /// nodes, feeder-respecting edges, duplicate-free children), enumerated
    /// in topological order under the given cap. A superset of walks().
    std::vector<TreeWalk> syntactic_walks(std::size_t cap) const;

    /// Summary of a leaf pattern: every realizable pair whose tree contains
    /// the label anywhere.
    Family leaf_family(int label) const;
    /// Summary transition: hosts containing a label-node whose two branches
    /// host the two child patterns, closed under context growth.
    Family merge_family(int label, const Family& f1, const Family& f2) const;
    Family n_run(const BinaryTree& x) const;

    /// Walk ids of { W_Z : x topologically embeds in Z, Z in L }: the
    /// accepting-state projection of the summary.
    std::vector<int> wset(const BinaryTree& x) const;
    std::vector<int> wset_from_family(const Family& family) const;

    /// Route A of the joint-embedding test.
    bool joint_by_walks(const BinaryTree& x, const BinaryTree& y) const;

    TreeJepBounds bounds() const;

  private:
    void build_pairs();
    void build_combine_table();
    void build_reach();
    int combine_pair(int label, int p, int q) const;  // table lookup
    Family close_up(const IdSet& core) const;         // context-growth closure
    bool embeds(const TreeWalk::Node* a, const TreeWalk::Node* b) const;
    int gluing_component(int label, int s1, int s2) const;

    TreeAutomaton machine_;
    Caps caps_;
    GluingGraph gluing_;
    WalkGraph walk_graph_;
    TreeCondensation cond_;

    std::vector<std::pair<int, TreeWalk>> pairs_;  // canonical order
    std::map<std::pair<int, const TreeWalk::Node*>, int> pair_ids_;
    std::vector<int> pair_walk_;         // pair id -> walk id
    std::vector<bool> pair_accepting_;   // pair id -> state accepting
    std::vector<TreeWalk> walks_;        // distinct walks, sorted by key
    std::vector<int> combine_;           // [label][unordered pair of pair ids]
    std::vector<IdSet> reach_;           // pair id -> up-closure under growth
    std::vector<Family> leaf_families_;  // per label

    mutable std::unordered_map<std::string, TreeWalk::NodePtr> interner_;
    mutable std::unordered_map<const TreeWalk::Node*,
                               std::unordered_map<const TreeWalk::Node*, bool>>
        embed_memo_;
    mutable std::map<Family, int> family_ids_;
    mutable std::vector<const Family*> families_;
    mutable std::map<std::tuple<int, int, int>, int> merge_memo_;

    int intern_family(Family f) const;
};

/// Route B of the joint-embedding test: nonemptiness of
/// L(m) ∩ Sup(x) ∩ Sup(y) by tree-automaton product emptiness.
bool joint_tree_by_product(const TreeAutomaton& m, const BinaryTree& x, const BinaryTree& y);

/// Both routes; raises InternalError if they disagree.
bool joint_tree(const TreeAutomaton& m, const BinaryTree& x, const BinaryTree& y);

/// A smallest tree of L(m) containing both x and y; absent iff none exists.
std::optional<BinaryTree> joint_witness(const TreeAutomaton& m, const BinaryTree& x,
                                        const BinaryTree& y);

struct TreeVerdict {
    bool jep;
    std::optional<BinaryTree> x, y;
    std::string certificate;  // "product-empty" when !jep
};

/// Decides the joint embedding property of (L(m), topological containment).
TreeVerdict decide_jep_tree(const TreeAutomaton& m, PairMode mode = PairMode::Bad,
                            Caps caps = {});

TreeJepBounds report_tree_bounds(const TreeAutomaton& m, Caps caps = {});

}  // namespace jep

#endif
