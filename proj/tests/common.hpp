#pragma once

// Small graph builders and brute-force oracles shared by the test binaries.
// The oracles deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "osn/graph.hpp"
#include "osn/rng.hpp"
#include "osn/synthgen.hpp"

namespace testing {

using osn::Edge;
using osn::Graph;
using osn::NodeId;

inline Graph make_graph(std::size_t n, std::vector<Edge> edges) {
    return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

/// Center 0, leaves 1..n.
inline Graph star_graph(std::size_t leaves) {
    std::vector<Edge> e;
    for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, e);
}

/// Random connected graph with a size drawn in [lo, hi].
inline Graph random_connected(osn::Rng& rng, std::size_t lo, std::size_t hi, double p) {
    const auto n = lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
    return osn::synth::random_connected(n, p, rng);
}

// ---------------------------------------------------------------------------
// Oracles

constexpr int kInf = -1;

/// O(n^3) all-pairs shortest paths on an adjacency matrix.
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
    const std::size_t n = g.node_count();
    const int big = 1 << 29;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, big));
    for (NodeId i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    for (auto& row : d)
        for (auto& x : row)
            if (x >= big) x = kInf;
    return d;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

/// Sorted component sizes.
inline std::vector<std::size_t> component_sizes_oracle(const Graph& g) {
    UnionFind uf(g.node_count());
    for (auto [u, v] : g.edges()) uf.unite(u, v);
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t v = 0; v < g.node_count(); ++v) ++sizes[uf.find(v)];
    std::vector<std::size_t> out;
    for (auto [r, s] : sizes) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

/// 2-core membership from the cycle structure around each node: v survives
/// leaf peeling iff it lies on a cycle (two neighbors share a component of
/// G - v) or it separates at least two components that contain cycles.
inline std::vector<bool> two_core_oracle(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<bool> in_core(n, false);
    const auto edges = g.edges();
    for (NodeId v = 0; v < n; ++v) {
        UnionFind uf(n);
        for (auto [a, b] : edges) {
            if (a != v && b != v) uf.unite(a, b);
        }
        std::map<std::size_t, std::size_t> nodes, edge_count, touching;
        for (NodeId u = 0; u < n; ++u) {
            if (u != v) ++nodes[uf.find(u)];
        }
        for (auto [a, b] : edges) {
            if (a != v && b != v) ++edge_count[uf.find(a)];
        }
        for (NodeId w : g.neighbors(v)) ++touching[uf.find(w)];
        std::size_t cyclic_branches = 0;
        bool on_cycle = false;
        for (auto [root, k] : touching) {
            if (k >= 2) on_cycle = true;
            if (edge_count[root] >= nodes[root]) ++cyclic_branches;
        }
        in_core[v] = on_cycle || cyclic_branches >= 2;
    }
    return in_core;
}

/// Smallest reference subset whose Chebyshev embedding keeps every pair
/// within `tolerance` hops, by exhaustive search (n <= ~10).
inline std::size_t minimum_reference_count(const std::vector<std::vector<int>>& d, int tolerance) {
    const std::size_t n = d.size();
    for (std::size_t size = 1; size <= n; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
        do {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                for (std::size_t j = 0; j < i && ok; ++j) {
                    int dv = 0;
                    for (std::size_t k = 0; k < n; ++k) {
                        if (pick[k]) dv = std::max(dv, std::abs(d[i][k] - d[j][k]));
                    }
                    ok = d[i][j] - dv <= tolerance;
                }
            }
            if (ok) return size;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return n;
}

}  // namespace testing
