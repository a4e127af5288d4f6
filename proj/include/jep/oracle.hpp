#ifndef JEP_ORACLE_HPP
#define JEP_ORACLE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jep/cograph.hpp"
#include "jep/dfa.hpp"
#include "jep/tree_automaton.hpp"
#include "jep/trees.hpp"
#include "jep/util.hpp"

namespace jep {

// ---------------------------------------------------------------------------
// Brute-force reference checkers. These share no code with the recursive
// containment or any automaton pipeline: containment is decided by exhaustive
// search over label-preserving injections, checking descendant preservation
// both ways and pairwise edge-disjointness of the embedded paths directly.

bool injection_contains_binary(const BinaryTree& host, const BinaryTree& pattern);
bool injection_contains_general(const GeneralTree& host, const GeneralTree& pattern);

/// Subsequence test by greedy scan.
bool word_subsequence(const Word& pattern, const Word& host);

/// Induced-subgraph test by exhaustive injection.
bool induced_subgraph(const Cograph& host, const Cograph& pattern);

// ---------------------------------------------------------------------------
// Random instance generators; deterministic per Rng state.

Dfa random_dfa(Rng& rng, int max_states, int alphabet_size);
TreeAutomaton random_tree_automaton(Rng& rng, int max_states, int label_count);
BinaryTree random_binary_tree(Rng& rng, LabelSetPtr labels, int max_nodes);
Cograph random_cograph(Rng& rng, int max_vertices);

// ---------------------------------------------------------------------------
// Exhaustive bad-pair scans. Members are enumerated up to the size bound and
// pair badness is decided exactly by product emptiness, so reported pairs are
// true bad pairs and an empty result is conclusive for the scanned range.

std::vector<std::pair<Word, Word>> scan_bad_pairs_word(const Dfa& language, int max_length,
                                                       Caps caps = {});
std::vector<std::pair<BinaryTree, BinaryTree>> scan_bad_pairs_tree(const TreeAutomaton& language,
                                                                   int max_nodes, Caps caps = {});
/// Scans S-free cographs up to the vertex bound; badness via the encoded
/// language and general-tree containment automata.
std::vector<std::pair<Cograph, Cograph>> scan_bad_pairs_cographs(const std::vector<Cograph>& state,
                                                                 int max_vertices, Caps caps = {});

// ---------------------------------------------------------------------------
// Cross-validation harness

enum class Suite {
    StringClaim1,   // walk-set intersection vs product emptiness, random DFAs
    TreeClaim1,     // same for tree automata
    WalkDef,        // definitional vs compositional tree-walk computation
    Cotree,         // cograph round trips and containment vs brute force
    EncodedSup,     // encoded-pattern automaton vs decode-then-containment
    JepVerdicts,    // verdict certification and exhaustive bad-pair scans
};

Suite suite_from_name(const std::string& name);
std::string suite_name(Suite suite);

struct TrialConfig {
    std::uint64_t seed = 1;
    int trials = 50;            // automata / instances per suite
    int pairs_per_trial = 50;   // probe pairs per instance where applicable
    int max_states = 3;
    int alphabet_size = 2;
    int max_word_length = 4;
    int max_tree_nodes = 7;
    Caps caps;
    bool corrupt_n_step = false;  // harness-validation mutation hook
};

struct Discrepancy {
    int trial;
    std::string description;  // includes a minimized reproduction
};

struct Report {
    Suite suite;
    int trials = 0;
    std::uint64_t checks = 0;
    std::vector<Discrepancy> discrepancies;
    std::string to_text() const;
    bool clean() const { return discrepancies.empty(); }
};

Report cross_validate(Suite suite, const TrialConfig& config);

}  // namespace jep

#endif
