#ifndef JEP_COGRAPH_HPP
#define JEP_COGRAPH_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jep/labels.hpp"
#include "jep/tree_automaton.hpp"
#include "jep/trees.hpp"
#include "jep/util.hpp"

namespace jep {

/// Simple undirected graph; P4-freeness is only required where stated.
class Cograph {
  public:
    explicit Cograph(int n);
    int size() const { return n_; }
    bool adjacent(int u, int v) const { return adj_[u][v]; }
    void add_edge(int u, int v);
    int edge_count() const;
    Cograph complement() const;
    /// Induced subgraph on the given vertices (ids renumbered in order).
    Cograph induced(const std::vector<int>& vertices) const;
    std::vector<std::vector<int>> components() const;  // vertex lists

    bool operator==(const Cograph& other) const { return adj_ == other.adj_; }

  private:
    int n_;
    std::vector<std::vector<bool>> adj_;
};

/// Label set {⊔, ∨, K1} of cotrees; indices kUnionLabel, kJoinLabel, kK1Label.
LabelSetPtr cotree_labels();
inline constexpr int kUnionLabel = 0;
inline constexpr int kJoinLabel = 1;
inline constexpr int kK1Label = 2;

/// Cotrees are general trees over cotree_labels() whose K1 leaves carry the
/// original vertex ids as tags.
using Cotree = GeneralTree;

/// Canonical cotree of a cograph: single vertices become K1 leaves,
/// disconnected graphs become ⊔ nodes over component cotrees, graphs with
/// disconnected complement become ∨ nodes over co-component cotrees.
Cotree cotree_of(const Cograph& g);
/// Inverse: ⊔ is disjoint union, ∨ is join. Leaf tags give vertex ids; when
/// absent, ids are assigned in traversal order.
Cograph graph_of(const Cotree& t);
/// Induced-subgraph test through cotree containment.
bool induced_via_cotrees(const Cograph& host, const Cograph& pattern);

/// Automaton over {⊔, ∨, K1, ↑} accepting exactly the binary encodings of
/// valid cotrees (K1 leaves only, internal ⊔/∨ with arity >= 2, no equal
/// adjacent labels through chains).
TreeAutomaton cotree_language();

/// Automaton over the pattern's labels plus ↑ accepting enc(T) iff the
/// pattern embeds topologically into T as general trees.
TreeAutomaton sup_general_encoded(const GeneralTree& pattern);

/// Automaton over `labels` plus ↑ accepting exactly the valid encodings of
/// general trees (internal arity >= 2) over `labels`.
TreeAutomaton valid_encoding_language(LabelSetPtr labels);

bool is_p4(const Cograph& g);

struct CographVerdict {
    bool jep;
    std::optional<Cograph> x, y;
    std::optional<Cotree> x_cotree, y_cotree;
    std::string certificate;
    std::vector<std::string> warnings;  // ignored non-cograph forbidden graphs
};

/// JEP of the S-free cographs under the induced subgraph order; S must
/// contain P4. Non-cograph members other than P4 impose no constraint and
/// are ignored with a warning.
CographVerdict decide_jep_cographs(const std::vector<Cograph>& forbidden, Caps caps = {});

struct GeneralTreeVerdict {
    bool jep;
    std::optional<GeneralTree> x, y;
    std::string certificate;
};

/// JEP of the S-free general trees over `labels` under topological
/// containment, through the binary encoding.
GeneralTreeVerdict decide_jep_general(const std::vector<GeneralTree>& forbidden,
                                      LabelSetPtr labels, Caps caps = {});

/// Graph file format: `n: 5` then `edge: u v` lines, 0-indexed.
Cograph parse_graph(std::string_view text);
std::string format_graph(const Cograph& g);
/// One-line form "n=3;edges=0-1,1-2" used in machine output.
std::string format_graph_inline(const Cograph& g);

}  // namespace jep

#endif
