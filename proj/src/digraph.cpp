#include "jep/digraph.hpp"

#include <algorithm>

namespace jep {

Digraph line_graph(const EdgeGraph& g) {
    const int m = static_cast<int>(g.edges.size());
    std::vector<std::vector<int>> edges_from(g.vertex_count);
    for (int e = 0; e < m; ++e) edges_from[g.edges[e].tail].push_back(e);
    Digraph out(m);
    for (int e = 0; e < m; ++e)
        for (int f : edges_from[g.edges[e].head]) out.add_edge(e, f);
    return out;
}

namespace {

// Iterative Tarjan; assigns component ids in reverse completion order so the
// final numbering is topological (sources first).
struct TarjanState {
    const Digraph& g;
    std::vector<int> index, lowlink, component;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int next_index = 0;
    int components = 0;

    explicit TarjanState(const Digraph& g)
        : g(g),
          index(g.size(), -1),
          lowlink(g.size(), 0),
          component(g.size(), -1),
          on_stack(g.size(), false) {}

    void run(int root) {
        struct Frame {
            int v;
            std::size_t edge;
        };
        std::vector<Frame> frames{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < g.adj[f.v].size()) {
                int w = g.adj[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component[w] = components;
                    } while (w != f.v);
                    ++components;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
            }
        }
    }
};

}  // namespace

Condensation condense(const Digraph& g) {
    TarjanState tarjan(g);
    for (int v = 0; v < g.size(); ++v)
        if (tarjan.index[v] == -1) tarjan.run(v);

    Condensation out;
    out.count = tarjan.components;
    out.component_of.resize(g.size());
    // Tarjan completes sinks first; flip ids so sources come first.
    for (int v = 0; v < g.size(); ++v)
        out.component_of[v] = tarjan.components - 1 - tarjan.component[v];
    out.members.resize(out.count);
    for (int v = 0; v < g.size(); ++v) out.members[out.component_of[v]].push_back(v);
    for (auto& m : out.members) std::sort(m.begin(), m.end());

    out.loopy.assign(out.count, false);
    std::vector<std::vector<int>> raw(out.count);
    for (int v = 0; v < g.size(); ++v) {
        int cv = out.component_of[v];
        if (out.members[cv].size() > 1) out.loopy[cv] = true;
        for (int w : g.adj[v]) {
            int cw = out.component_of[w];
            if (cv == cw)
                out.loopy[cv] = true;  // internal edge (incl. self loop)
            else
                raw[cv].push_back(cw);
        }
    }
    out.adj.resize(out.count);
    for (int c = 0; c < out.count; ++c) {
        std::sort(raw[c].begin(), raw[c].end());
        raw[c].erase(std::unique(raw[c].begin(), raw[c].end()), raw[c].end());
        out.adj[c] = std::move(raw[c]);
    }
    return out;
}

std::vector<bool> reachable_from(const Digraph& g, const std::vector<int>& sources) {
    std::vector<bool> seen(g.size(), false);
    std::vector<int> stack;
    for (int s : sources)
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

}  // namespace jep
