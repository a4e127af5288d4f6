#ifndef JEP_TREE_AUTOMATON_HPP
#define JEP_TREE_AUTOMATON_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jep/dfa.hpp"  // BoolOp
#include "jep/labels.hpp"
#include "jep/trees.hpp"

namespace jep {

/// Deterministic bottom-up automaton on full binary labeled trees. The
/// internal transition is keyed on unordered state pairs, so the automaton
/// behaves identically on child-swapped trees by construction.
class TreeAutomaton {
  public:
    /// merge[label * pair_count + pair_index(s, t)] is the state reached by a
    /// `label`-labeled node whose children evaluated to s and t.
    TreeAutomaton(LabelSetPtr labels, int states, std::vector<bool> accepting,
                  std::vector<int> leaf, std::vector<int> merge);

    static int pair_index(int a, int b) {
        if (a > b) std::swap(a, b);
        return b * (b + 1) / 2 + a;
    }
    static int pair_count(int states) { return states * (states + 1) / 2; }

    const LabelSetPtr& labels() const { return labels_; }
    int state_count() const { return static_cast<int>(accepting_.size()); }
    bool accepting(int state) const { return accepting_[state]; }
    int leaf_state(int label) const { return leaf_[label]; }
    int merge_state(int label, int s, int t) const {
        return merge_[label * pair_count(state_count()) + pair_index(s, t)];
    }

    bool accepts(const BinaryTree& t) const;

  private:
    LabelSetPtr labels_;
    std::vector<bool> accepting_;
    std::vector<int> leaf_;   // [label]
    std::vector<int> merge_;  // [label][unordered pair]
};

/// State at the root after the bottom-up run.
int ta_run(const TreeAutomaton& a, const BinaryTree& t);

/// Product automaton over the reachable pairs.
TreeAutomaton ta_product(const TreeAutomaton& a, const TreeAutomaton& b, BoolOp op);
TreeAutomaton ta_complement(const TreeAutomaton& a);
inline TreeAutomaton ta_intersection(const TreeAutomaton& a, const TreeAutomaton& b) {
    return ta_product(a, b, BoolOp::And);
}
inline TreeAutomaton ta_union(const TreeAutomaton& a, const TreeAutomaton& b) {
    return ta_product(a, b, BoolOp::Or);
}
/// Restriction to states reachable by some tree.
TreeAutomaton ta_trim(const TreeAutomaton& a);
/// Canonical minimal automaton for the language (trim + partition refinement).
TreeAutomaton ta_minimize(const TreeAutomaton& a);
/// A smallest accepted tree (node count, then canonical serialization);
/// absent iff the language is empty.
std::optional<BinaryTree> ta_empty_witness(const TreeAutomaton& a);

/// Language { T : pattern topologically embeds into T }. States are the sets
/// of pattern subtrees embeddable into the processed subtree.
TreeAutomaton sup_tree_automaton(const BinaryTree& pattern, LabelSetPtr labels);
/// Language of trees avoiding every pattern in S; trimmed.
TreeAutomaton forb_tree_automaton(const std::vector<BinaryTree>& patterns, LabelSetPtr labels);
/// Language { X#Y : X in L(a), Y in L(b) } over the labels plus '#', where
/// '#' may appear only at the root.
TreeAutomaton hash_pair_ta(const TreeAutomaton& a, const TreeAutomaton& b);

/// Text format: labels/states/accept headers, `m0: label -> state` lines and
/// `m2: label (s,t) -> state` lines with unordered pair syntax. Totality is
/// enforced and duplicate or asymmetric entries are rejected.
TreeAutomaton parse_tree_automaton(std::string_view text);
std::string format_tree_automaton(const TreeAutomaton& a);

}  // namespace jep

#endif
