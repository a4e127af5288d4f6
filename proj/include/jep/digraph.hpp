#ifndef JEP_DIGRAPH_HPP
#define JEP_DIGRAPH_HPP

#include <vector>

namespace jep {

/// Plain directed graph on vertices 0..n-1; parallel edges and loops allowed.
struct Digraph {
    explicit Digraph(int n = 0) : adj(n) {}
    int size() const { return static_cast<int>(adj.size()); }
    void add_edge(int from, int to) { adj[from].push_back(to); }
    std::vector<std::vector<int>> adj;
};

/// Edge-labeled directed multigraph, the view used for line graphs.
struct LabeledEdge {
    int tail;
    int head;
    int label;  // -1 for unlabeled edges
};

struct EdgeGraph {
    int vertex_count = 0;
    std::vector<LabeledEdge> edges;
};

/// Line graph: one vertex per edge of g, an edge e1 -> e2 whenever
/// head(e1) == tail(e2). A loop edge of g yields a loop here.
Digraph line_graph(const EdgeGraph& g);

/// Strongly connected components and the loop-free quotient DAG.
/// Components are numbered in topological order (sources first).
struct Condensation {
    int count = 0;
    std::vector<int> component_of;          // per input vertex
    std::vector<std::vector<int>> members;  // per component, sorted
    std::vector<std::vector<int>> adj;      // quotient edges, deduplicated, no loops
    std::vector<bool> loopy;                // component contains a closed walk
};

Condensation condense(const Digraph& g);

/// True if `target` is reachable from any vertex in `sources` (length-0 paths
/// count, so sources are reachable from themselves).
std::vector<bool> reachable_from(const Digraph& g, const std::vector<int>& sources);

}  // namespace jep

#endif
