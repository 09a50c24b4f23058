#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "osn/graph.hpp"
#include "osn/histogram.hpp"

namespace osn::cheb {

/// Coordinates x_P^i = hop distance from P to reference node i.
struct Embedding {
    std::size_t node_count = 0;
    std::vector<NodeId> references;
    std::vector<Hops> coords;  ///< row-major: node x reference
    bool full = false;         ///< references are all nodes in index order

    std::size_t dimension() const { return references.size(); }
    std::span<const Hops> coordinates(NodeId p) const {
        return {coords.data() + static_cast<std::size_t>(p) * references.size(), references.size()};
    }
};

/// Every node is a reference; the coordinate matrix is the distance matrix.
/// Throws PreconditionError on disconnected input.
Embedding embed_full(const Graph& g);

/// Coordinates for the given references only (one BFS per reference).
Embedding embed(const Graph& g, std::span<const NodeId> references);

/// Max over references of |x_P^i - x_Q^i|.
Hops chebyshev_distance(const Embedding& e, NodeId p, NodeId q);

/// The pair-coverage matrix of a full embedding, generated on demand.
///
/// Row (i, j), i > j, is covered by reference column k when
/// |d(i,k) - d(j,k)| >= max(0, d(i,j) - T). Nothing is materialized: the
/// matrix borrows the embedding, which must outlive it.
class CoverMatrix {
public:
    CoverMatrix(const Embedding& full, double tolerance);

    std::size_t row_count() const { return rows_; }
    std::size_t column_count() const { return e_->node_count; }
    double tolerance() const { return tolerance_; }
    const Embedding& embedding() const { return *e_; }

    /// Row index of (i, j) with i > j is i(i-1)/2 + j.
    static std::size_t row_index(NodeId i, NodeId j);
    static std::pair<NodeId, NodeId> row_pair(std::size_t row);

    bool covers(NodeId i, NodeId j, NodeId column) const {
        const auto xi = e_->coordinates(i);
        const auto xj = e_->coordinates(j);
        const double need = std::max(0.0, static_cast<double>(xi[j]) - tolerance_);
        const Hops diff = xi[column] > xj[column] ? xi[column] - xj[column] : xj[column] - xi[column];
        return static_cast<double>(diff) >= need;
    }

    /// Calls f(i, j, covering_columns) for every row in row-index order.
    template <typename F>
    void for_each_row(F&& f) const {
        std::vector<NodeId> cover;
        const auto n = static_cast<NodeId>(e_->node_count);
        for (NodeId i = 1; i < n; ++i) {
            for (NodeId j = 0; j < i; ++j) {
                cover.clear();
                for (NodeId k = 0; k < n; ++k) {
                    if (covers(i, j, k)) cover.push_back(k);
                }
                f(i, j, std::span<const NodeId>(cover));
            }
        }
    }

private:
    const Embedding* e_;
    double tolerance_;
    std::size_t rows_;
};

/// Pairwise embedding error d_m - d_v (never negative for subset references).
struct DistortionReport {
    Hops max_hops = 0;
    Histogram hops;                  ///< per-pair d_m - d_v
    double max_relative = 0.0;       ///< max |d_m / d_v - 1| over pairs with d_v > 0
    std::uint64_t collapsed_pairs = 0;  ///< distinct nodes with d_v = 0
};

struct ReduceOptions {
    std::uint64_t max_pairs = 50'000'000;  ///< abort beyond this many matrix rows
};

struct ReductionResult {
    std::vector<NodeId> kept;  ///< selection order: essentials ascending, then greedy picks
    std::size_t essential_count = 0;
    std::size_t greedy_count = 0;
    double tolerance = 0.0;
    DistortionReport distortion;
    bool verified = false;  ///< max distortion <= tolerance
};

/// Essential references (sole cover of some row) first, then greedy set
/// cover on the remaining rows, ties to the smallest index. The result is
/// verified against every pair before returning.
ReductionResult reduce_references(const CoverMatrix& cm, const ReduceOptions& options = {});

/// Distortion of the embedding restricted to `references`, from fresh BFS
/// passes over `g`. Throws ArgumentError on an empty reference set.
DistortionReport embedding_distortion(const Graph& g, std::span<const NodeId> references);

/// Same, reading graph distances from a full embedding.
DistortionReport embedding_distortion(const Embedding& full, std::span<const NodeId> references);

}  // namespace osn::cheb
