#ifndef JEP_STRING_JEP_HPP
#define JEP_STRING_JEP_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "jep/dfa.hpp"
#include "jep/digraph.hpp"
#include "jep/util.hpp"

namespace jep {

/// Walk through the condensation of the transition line graph, as the
/// sequence of component ids; the empty sequence is the empty walk (the run
/// of the empty word).
using SccWalk = std::vector<int>;

enum class PairMode { Bad, Semibad };

/// Condensation of the line graph of a DFA's transition digraph, with the
/// flags the walk machinery reads.
struct WalkDag {
    Condensation cond;
    std::vector<LabeledEdge> transitions;       // line-graph vertex -> (from, symbol, to)
    std::vector<bool> initial;                  // contains an out-edge of the start state
    std::vector<bool> accepting;                // contains an in-edge of an accepting state
    std::vector<std::vector<bool>> has_symbol;  // [component][symbol]
};

/// Everything derived from one machine: the walk DAG, the enumerated walk
/// set, and the lazily evaluated walk-family automaton.
class StringJepPipeline {
  public:
    using Family = std::vector<int>;  // sorted walk ids

    explicit StringJepPipeline(const Dfa& machine, Caps caps = {});

    const Dfa& machine() const { return machine_; }  // trimmed
    const WalkDag& dag() const { return dag_; }

    /// All walks from initial components, in lexicographic order; index 0 is
    /// the empty walk.
    const std::vector<SccWalk>& walks() const { return walks_; }
    int walk_id(const SccWalk& w) const;

    /// Component sequence of the run on z, consecutive duplicates collapsed.
    SccWalk walk_of_word(const Word& z) const;

    const Family& start_family() const { return start_family_; }
    Family n_step(const Family& family, int symbol) const;
    Family n_run(const Word& x) const;

    /// Walk ids of { W_z : x subsequence of z, z in L }.
    std::vector<int> wset(const Word& x) const;
    std::vector<int> wset_from_family(const Family& family) const;

    /// Route A of the joint-embedding test: wset intersection.
    bool joint_by_walks(const Word& x, const Word& y) const;

    struct Bounds {
        std::size_t walk_count;              // including the empty walk
        std::string pair_length_bound;       // 2^walk_count
        std::uint64_t pair_length_exponent;  // = walk_count
    };
    Bounds bounds() const;

    /// Test-only corruption hook for harness validation: when set, n_step
    /// accepts a walk as its own prefix witness even when its last component
    /// is not loopy.
    void set_corrupt_n_step(bool corrupt) { corrupt_n_step_ = corrupt; }

  private:
    Dfa machine_;
    WalkDag dag_;
    std::vector<SccWalk> walks_;
    std::vector<IdSet> prefix_sets_;         // per walk id: ids of its prefixes
    std::vector<IdSet> proper_prefix_sets_;  // the same minus the walk itself
    Family start_family_;
    bool accepts_empty_ = false;
    bool corrupt_n_step_ = false;
};

/// Route B of the joint-embedding test: nonemptiness of
/// L(m) ∩ Sup(x) ∩ Sup(y), by product emptiness. The certifying route.
bool joint_word_by_product(const Dfa& m, const Word& x, const Word& y);

/// Both routes; raises InternalError if they disagree.
bool joint_word(const Dfa& m, const Word& x, const Word& y);

struct WordPairVerdict {
    bool jep;
    Word x, y;                // a bad (or semibad) pair when !jep
    std::string certificate;  // "product-empty" when !jep
};

/// Decides the joint embedding property of (L(m), subsequence order).
/// Mode Bad restricts pair members to L; Semibad allows arbitrary words.
WordPairVerdict decide_jep_word(const Dfa& m, PairMode mode = PairMode::Bad, Caps caps = {});

/// All minimal semibad pairs with both sides of length <= bound, normalized
/// (x <= y in shortlex order) and deduplicated.
std::vector<std::pair<Word, Word>> minimal_semibad_words(const Dfa& m, int bound,
                                                         Caps caps = {});

/// Automaton over the alphabet plus '#' recognizing the (semi)bad pairs x#y
/// whose minimal witnesses fit within `bound`; exact for inputs with both
/// sides of length <= bound, and exact everywhere when bound covers the
/// pair-length bound reported by the pipeline.
Dfa badpair_dfa(const Dfa& m, int bound, PairMode mode = PairMode::Semibad, Caps caps = {});

}  // namespace jep

#endif
