#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "osn/graph.hpp"
#include "osn/histogram.hpp"

namespace osn::macro {

Histogram degree_histogram(const Graph& g);

/// Two power-law segments fitted in log10-log10 space.
struct DoubleParetoFit {
    double left_exponent = 0.0;   ///< magnitude of the left slope
    double right_exponent = 0.0;  ///< magnitude of the right slope
    std::int64_t break_degree = 0;  ///< first degree of the right segment
    double left_sse = 0.0;
    double right_sse = 0.0;
    std::size_t left_bins = 0;
    std::size_t right_bins = 0;
    std::int64_t fit_min_degree = 0;
    std::int64_t fit_max_degree = 0;
    /// Single power law over the same bins, for judging whether the break
    /// explains anything.
    double single_exponent = 0.0;
    double single_sse = 0.0;

    double total_sse() const { return left_sse + right_sse; }
};

struct ParetoFitOptions {
    /// Weight each bin's log-count residual by its count (the inverse
    /// variance of log count under Poisson noise).
    bool weight_by_count = true;
    /// Fit only the run of consecutive degrees starting at the smallest
    /// positive degree, ending before the first empty degree. Falls back to
    /// all bins when that run is shorter than 2 * min_segment_bins.
    bool contiguous_range = true;
    std::size_t min_segment_bins = 3;
};

/// Sweeps every admissible break and keeps the one with the least total
/// squared error. Needs at least six distinct positive-degree bins.
DoubleParetoFit fit_double_pareto(const Histogram& h, const ParetoFitOptions& options = {});

struct SeniorReport {
    std::size_t threshold = 0;
    std::size_t node_count = 0;
    std::size_t senior_count = 0;
    double senior_fraction = 0.0;
    std::size_t without_senior_neighbors = 0;
    double mean_senior_neighbors = 0.0;
    Histogram senior_neighbor_counts;
};

/// Cohort of nodes with degree >= threshold and its induced adjacency.
SeniorReport senior_stats(const Graph& g, std::size_t threshold = 25);

struct PathMode {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    std::size_t sources = 0;
    std::uint64_t seed = 0;

    static PathMode exact() { return {}; }
    static PathMode sampled(std::size_t sources, std::uint64_t seed) {
        return {Kind::sampled, sources, seed};
    }
};

struct PathLengthReport {
    Histogram distances;
    double mean = 0.0;
    Hops diameter = 0;  ///< a lower bound in sampled mode
    PathMode mode;
    std::uint64_t path_count = 0;
    std::vector<NodeId> sources;  ///< sampled mode only, ascending

    bool is_estimate() const { return mode.kind == PathMode::Kind::sampled; }
};

/// Exact mode counts every unordered pair once. Sampled mode runs BFS from
/// `sources` distinct uniformly chosen nodes and counts every
/// (source, other) ordered pair. Throws PreconditionError on disconnected
/// or empty input.
PathLengthReport path_length_report(const Graph& g, PathMode mode = PathMode::exact());

/// Picks `k` distinct nodes uniformly (all nodes when k >= n), ascending.
std::vector<NodeId> sample_nodes(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace osn::macro
