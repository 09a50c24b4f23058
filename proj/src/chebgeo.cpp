#include "osn/chebgeo.hpp"

#include <cmath>
#include <numeric>

#include "osn/error.hpp"
#include "osn/parallel.hpp"

namespace osn::cheb {

Embedding embed_full(const Graph& g) {
    if (!is_connected(g)) throw PreconditionError("embedding needs a connected graph");
    std::vector<NodeId> refs(g.node_count());
    std::iota(refs.begin(), refs.end(), NodeId{0});
    Embedding e;
    e.node_count = g.node_count();
    e.references = std::move(refs);
    e.coords = all_pairs_distances(g).data;
    e.full = true;
    return e;
}

Embedding embed(const Graph& g, std::span<const NodeId> references) {
    if (!is_connected(g)) throw PreconditionError("embedding needs a connected graph");
    const std::size_t n = g.node_count();
    const std::size_t dim = references.size();
    for (NodeId r : references) {
        if (r >= n) throw ArgumentError("reference node " + std::to_string(r) + " out of range");
    }
    Embedding e;
    e.node_count = n;
    e.references.assign(references.begin(), references.end());
    e.coords.assign(n * dim, 0);
    const auto workers = worker_count(dim);
    std::vector<std::vector<Hops>> dist(workers, std::vector<Hops>(n));
    std::vector<std::vector<NodeId>> queues(workers);
    parallel_for(dim, workers, [&](std::size_t i, std::size_t w) {
        bfs_into(g, references[i], dist[w], queues[w]);
        for (std::size_t p = 0; p < n; ++p) e.coords[p * dim + i] = dist[w][p];
    });
    e.full = dim == n;
    for (std::size_t i = 0; e.full && i < dim; ++i) e.full = references[i] == i;
    return e;
}

Hops chebyshev_distance(const Embedding& e, NodeId p, NodeId q) {
    if (p >= e.node_count || q >= e.node_count) throw ArgumentError("node out of range");
    const auto xp = e.coordinates(p);
    const auto xq = e.coordinates(q);
    Hops best = 0;
    for (std::size_t i = 0; i < xp.size(); ++i) best = std::max(best, static_cast<Hops>(std::abs(xp[i] - xq[i])));
    return best;
}

CoverMatrix::CoverMatrix(const Embedding& full, double tolerance) : e_(&full), tolerance_(tolerance) {
    if (!full.full) throw ArgumentError("cover matrix needs a full embedding");
    if (!(tolerance >= 0.0)) throw ArgumentError("tolerance T must be >= 0");
    rows_ = full.node_count < 2 ? 0 : full.node_count * (full.node_count - 1) / 2;
}

std::size_t CoverMatrix::row_index(NodeId i, NodeId j) {
    return static_cast<std::size_t>(i) * (i - 1) / 2 + j;
}

std::pair<NodeId, NodeId> CoverMatrix::row_pair(std::size_t row) {
    auto i = static_cast<NodeId>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(row))) / 2.0);
    while (row_index(i, 0) > row) --i;
    while (row_index(i + 1, 0) <= row) ++i;
    return {i, static_cast<NodeId>(row - row_index(i, 0))};
}

namespace {

DistortionReport distortion_from(std::size_t n, std::span<const NodeId> references,
                                 const std::function<void(NodeId, std::span<Hops>)>& graph_row,
                                 const Embedding& sub) {
    DistortionReport report;
    const auto workers = worker_count(n);
    struct Local {
        std::vector<std::uint64_t> hist;
        double max_rel = 0.0;
        std::uint64_t collapsed = 0;
        std::vector<Hops> row;
    };
    std::vector<Local> locals(workers);
    for (auto& l : locals) l.row.resize(n);
    parallel_for(n, workers, [&](std::size_t ii, std::size_t w) {
        auto& l = locals[w];
        const auto i = static_cast<NodeId>(ii);
        graph_row(i, l.row);
        const auto xi = sub.coordinates(i);
        for (NodeId j = 0; j < i; ++j) {
            const auto xj = sub.coordinates(j);
            Hops dv = 0;
            for (std::size_t r = 0; r < references.size(); ++r) dv = std::max(dv, static_cast<Hops>(std::abs(xi[r] - xj[r])));
            const Hops dm = l.row[j];
            const auto gap = static_cast<std::size_t>(dm - dv);
            if (l.hist.size() <= gap) l.hist.resize(gap + 1, 0);
            ++l.hist[gap];
            if (dv > 0) {
                l.max_rel = std::max(l.max_rel, std::abs(static_cast<double>(dm) / dv - 1.0));
            } else {
                ++l.collapsed;
            }
        }
    });
    for (const auto& l : locals) {
        for (std::size_t g = 0; g < l.hist.size(); ++g) report.hops.add(static_cast<std::int64_t>(g), l.hist[g]);
        report.max_relative = std::max(report.max_relative, l.max_rel);
        report.collapsed_pairs += l.collapsed;
    }
    report.max_hops = static_cast<Hops>(report.hops.max().value_or(0));
    return report;
}

}  // namespace

DistortionReport embedding_distortion(const Graph& g, std::span<const NodeId> references) {
    if (references.empty()) throw ArgumentError("distortion needs at least one reference");
    const Embedding sub = embed(g, references);
    thread_local std::vector<NodeId> queue;
    return distortion_from(g.node_count(), references,
                           [&](NodeId i, std::span<Hops> row) { bfs_into(g, i, row, queue); }, sub);
}

DistortionReport embedding_distortion(const Embedding& full, std::span<const NodeId> references) {
    if (!full.full) throw ArgumentError("distortion from an embedding needs the full embedding");
    if (references.empty()) throw ArgumentError("distortion needs at least one reference");
    const std::size_t n = full.node_count;
    Embedding sub;
    sub.node_count = n;
    sub.references.assign(references.begin(), references.end());
    sub.coords.resize(n * references.size());
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t r = 0; r < references.size(); ++r) {
            if (references[r] >= n) throw ArgumentError("reference out of range");
            sub.coords[p * references.size() + r] = full.coords[p * n + references[r]];
        }
    }
    return distortion_from(n, references,
                           [&](NodeId i, std::span<Hops> row) {
                               const auto src = full.coordinates(i);
                               std::copy(src.begin(), src.end(), row.begin());
                           },
                           sub);
}

ReductionResult reduce_references(const CoverMatrix& cm, const ReduceOptions& options) {
    const Embedding& e = cm.embedding();
    const auto n = static_cast<NodeId>(e.node_count);
    if (cm.row_count() > options.max_pairs) {
        throw PreconditionError("cover matrix has " + std::to_string(cm.row_count()) +
                                " rows, above the pair budget of " + std::to_string(options.max_pairs));
    }

    ReductionResult result;
    result.tolerance = cm.tolerance();

    // Essentials: columns that are the only cover of some row. A row's cover
    // set never changes and rows only disappear, so this pass is final.
    std::vector<char> essential(n, 0);
    for (NodeId i = 1; i < n; ++i) {
        for (NodeId j = 0; j < i; ++j) {
            NodeId only = 0;
            int found = 0;
            for (NodeId k = 0; k < n && found < 2; ++k) {
                if (cm.covers(i, j, k)) {
                    only = k;
                    ++found;
                }
            }
            if (found == 1) essential[only] = 1;
        }
    }
    for (NodeId k = 0; k < n; ++k) {
        if (essential[k]) result.kept.push_back(k);
    }
    result.essential_count = result.kept.size();

    // One bit per row; rows are regenerated from the embedding on every scan.
    std::vector<bool> covered(cm.row_count(), false);
    std::size_t open = 0;
    std::vector<std::uint64_t> count(n, 0);
    std::size_t row = 0;
    for (NodeId i = 1; i < n; ++i) {
        for (NodeId j = 0; j < i; ++j, ++row) {
            for (NodeId k : result.kept) {
                if (cm.covers(i, j, k)) {
                    covered[row] = true;
                    break;
                }
            }
            if (covered[row]) continue;
            ++open;
            for (NodeId k = 0; k < n; ++k) {
                if (cm.covers(i, j, k)) ++count[k];
            }
        }
    }

    // Greedy cover with incrementally maintained per-column counts.
    while (open > 0) {
        NodeId pick = 0;
        for (NodeId k = 1; k < n; ++k) {
            if (count[k] > count[pick]) pick = k;
        }
        result.kept.push_back(pick);
        ++result.greedy_count;
        row = 0;
        for (NodeId i = 1; i < n; ++i) {
            for (NodeId j = 0; j < i; ++j, ++row) {
                if (covered[row] || !cm.covers(i, j, pick)) continue;
                covered[row] = true;
                --open;
                for (NodeId k = 0; k < n; ++k) {
                    if (cm.covers(i, j, k)) --count[k];
                }
            }
        }
    }

    if (result.kept.empty()) {
        result.verified = true;  // fewer than two nodes: nothing to preserve
        return result;
    }
    result.distortion = embedding_distortion(e, result.kept);
    result.verified = static_cast<double>(result.distortion.max_hops) <= cm.tolerance();
    return result;
}

}  // namespace osn::cheb
