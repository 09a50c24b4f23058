#include "osn/macrostats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "osn/error.hpp"
#include "osn/parallel.hpp"
#include "osn/rng.hpp"

namespace osn::macro {

Histogram degree_histogram(const Graph& g) {
    Histogram h;
    for (NodeId v = 0; v < g.node_count(); ++v) h.add(static_cast<std::int64_t>(g.degree(v)));
    return h;
}

namespace {

struct Point {
    double x;
    double y;
    double w;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};

LineFit weighted_line(std::span<const Point> pts) {
    double sw = 0, sx = 0, sy = 0;
    for (const auto& p : pts) {
        sw += p.w;
        sx += p.w * p.x;
        sy += p.w * p.y;
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sxx += p.w * (p.x - mx) * (p.x - mx);
        sxy += p.w * (p.x - mx) * (p.y - my);
    }
    LineFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    for (const auto& p : pts) {
        const double r = p.y - fit.intercept - fit.slope * p.x;
        fit.sse += p.w * r * r;
    }
    return fit;
}

}  // namespace

DoubleParetoFit fit_double_pareto(const Histogram& h, const ParetoFitOptions& options) {
    const std::size_t min_seg = std::max<std::size_t>(options.min_segment_bins, 2);
    std::vector<std::pair<std::int64_t, std::uint64_t>> bins;
    for (auto [v, c] : h.bins()) {
        if (v > 0) bins.emplace_back(v, c);
    }
    if (bins.size() < 6 || bins.size() < 2 * min_seg) {
        throw PreconditionError("double Pareto fit needs at least " + std::to_string(std::max<std::size_t>(6, 2 * min_seg)) +
                                " distinct positive-degree bins, got " + std::to_string(bins.size()));
    }
    if (options.contiguous_range) {
        std::size_t run = 1;
        while (run < bins.size() && bins[run].first == bins[run - 1].first + 1) ++run;
        if (run >= std::max<std::size_t>(6, 2 * min_seg)) bins.resize(run);
    }

    std::vector<Point> pts;
    pts.reserve(bins.size());
    for (auto [v, c] : bins) {
        pts.push_back({std::log10(static_cast<double>(v)), std::log10(static_cast<double>(c)),
                       options.weight_by_count ? static_cast<double>(c) : 1.0});
    }
    const std::span<const Point> all(pts);

    DoubleParetoFit best;
    bool have = false;
    for (std::size_t k = min_seg; k + min_seg <= pts.size(); ++k) {
        const auto left = weighted_line(all.first(k));
        const auto right = weighted_line(all.subspan(k));
        if (!have || left.sse + right.sse < best.total_sse()) {
            have = true;
            best.left_exponent = -left.slope;
            best.right_exponent = -right.slope;
            best.left_sse = left.sse;
            best.right_sse = right.sse;
            best.break_degree = bins[k].first;
            best.left_bins = k;
            best.right_bins = pts.size() - k;
        }
    }
    const auto single = weighted_line(all);
    best.single_exponent = -single.slope;
    best.single_sse = single.sse;
    best.fit_min_degree = bins.front().first;
    best.fit_max_degree = bins.back().first;
    return best;
}

SeniorReport senior_stats(const Graph& g, std::size_t threshold) {
    if (threshold < 1) throw ArgumentError("senior threshold must be >= 1");
    SeniorReport r;
    r.threshold = threshold;
    r.node_count = g.node_count();
    std::uint64_t neighbor_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) < threshold) continue;
        ++r.senior_count;
        std::size_t senior_neighbors = 0;
        for (NodeId w : g.neighbors(v)) {
            if (g.degree(w) >= threshold) ++senior_neighbors;
        }
        if (senior_neighbors == 0) ++r.without_senior_neighbors;
        neighbor_sum += senior_neighbors;
        r.senior_neighbor_counts.add(static_cast<std::int64_t>(senior_neighbors));
    }
    if (r.node_count > 0) r.senior_fraction = static_cast<double>(r.senior_count) / static_cast<double>(r.node_count);
    if (r.senior_count > 0) r.mean_senior_neighbors = static_cast<double>(neighbor_sum) / static_cast<double>(r.senior_count);
    return r;
}

std::vector<NodeId> sample_nodes(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    if (k >= n) return all;
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

PathLengthReport path_length_report(const Graph& g, PathMode mode) {
    const std::size_t n = g.node_count();
    if (n == 0) throw PreconditionError("path statistics need a non-empty graph");
    const auto comps = components(g).count();
    if (comps != 1) {
        throw PreconditionError("path statistics need a connected graph; input has " +
                                std::to_string(comps) + " components");
    }

    PathLengthReport report;
    report.mode = mode;
    const bool exact = mode.kind == PathMode::Kind::exact;
    std::vector<NodeId> sources;
    if (exact) {
        sources.resize(n);
        std::iota(sources.begin(), sources.end(), NodeId{0});
    } else {
        if (mode.sources == 0) throw ArgumentError("sampled path mode needs at least one source");
        sources = sample_nodes(n, mode.sources, mode.seed);
        report.sources = sources;
    }

    const auto workers = worker_count(sources.size());
    std::vector<std::vector<std::uint64_t>> counts(workers);
    std::vector<std::vector<Hops>> dist(workers, std::vector<Hops>(n));
    std::vector<std::vector<NodeId>> queues(workers);
    parallel_for(sources.size(), workers, [&](std::size_t t, std::size_t w) {
        const NodeId s = sources[t];
        bfs_into(g, s, dist[w], queues[w]);
        auto& local = counts[w];
        for (NodeId v = exact ? s + 1 : 0; v < n; ++v) {
            if (v == s) continue;
            const auto d = static_cast<std::size_t>(dist[w][v]);
            if (local.size() <= d) local.resize(d + 1, 0);
            ++local[d];
        }
    });
    for (const auto& local : counts) {
        for (std::size_t d = 0; d < local.size(); ++d) report.distances.add(static_cast<std::int64_t>(d), local[d]);
    }
    report.path_count = report.distances.total();
    report.mean = report.distances.mean();
    report.diameter = static_cast<Hops>(report.distances.max().value_or(0));
    return report;
}

}  // namespace osn::macro
