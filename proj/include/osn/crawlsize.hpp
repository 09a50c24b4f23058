#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "osn/graph.hpp"

namespace osn::crawl {

enum class Policy { fifo, random_frontier };

const char* to_string(Policy p);
/// Accepts "fifo" and "random" (or "random-frontier").
Policy parse_policy(std::string_view s);

struct Sample {
    std::int64_t processed = 0;   ///< P
    std::int64_t discovered = 0;  ///< D: discovered, not yet processed
};

struct CrawlTrace {
    std::vector<Sample> samples;
    Policy policy = Policy::fifo;
    std::uint64_t seed = 0;
    std::size_t stride = 1;
    std::optional<std::int64_t> true_size;
    /// The start's component is smaller than the graph; true_size refers to
    /// that component.
    bool partial = false;
};

/// Frontier crawl from `start`. A sample is taken after every `stride`
/// processed nodes and after the last one.
CrawlTrace simulate_crawl(const Graph& g, NodeId start, Policy policy = Policy::fifo,
                          std::size_t stride = 1, std::uint64_t seed = 0);

/// Trailing least-squares window, in samples. With `fixed` unset the window
/// at sample i is max(min_samples, floor(fraction * (i + 1))).
struct WindowPolicy {
    std::optional<std::size_t> fixed;
    std::size_t min_samples = 25;
    double fraction = 0.01;

    std::size_t at(std::size_t sample_index) const;
};

/// Slope of D against P over the trailing window; absent until the window
/// fills. Throws ArgumentError for a window below 2.
std::vector<std::optional<double>> estimate_derivative(const CrawlTrace& t, const WindowPolicy& window = {});

struct EstimateRow {
    std::size_t sample_index = 0;
    std::int64_t processed = 0;
    std::int64_t discovered = 0;
    double dprime = 0.0;
    double l_hat = 0.0;   ///< D' + 1
    double s_hat = 0.0;   ///< P + D + max(0, D' + 1) D
    bool clamped = false; ///< D' + 1 < 0, unseen mass set to 0
};

struct SizeEstimate {
    std::vector<EstimateRow> rows;  ///< full-window samples only
    WindowPolicy window;
};

SizeEstimate estimate_size(const CrawlTrace& t, const WindowPolicy& window = {});

/// D(P) = a0 (P^3 + a1 P^2 + a2 P) / (P^2 + a3 P + a4).
struct RationalFit {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double rmse = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
    std::size_t samples = 0;
    std::size_t rank = 0;  ///< of the linearized system

    double operator()(double p) const;
};

/// Linearized least squares followed by reweighted refinement passes; the
/// root-free iterate with the lowest RMSE is kept. Throws PreconditionError
/// for fewer than 20 samples, a rank-deficient system, or when every
/// candidate's denominator vanishes inside the fitted range.
RationalFit fit_rational(const CrawlTrace& t);
RationalFit fit_rational(std::span<const double> p, std::span<const double> d);

struct OdePoint {
    double p = 0.0;
    double d = 0.0;
    double dprime = 0.0;
    double s = 0.0;  ///< P + D + (D' + 1) D
};

struct OdeSolution {
    std::vector<OdePoint> grid;
    double p0 = 0.0, d0 = 0.0, dprime0 = 0.0;
    double step = 0.0;
    bool reached_zero = false;  ///< stopped because D would drop to 0
    double max_s_drift = 0.0;   ///< max |S - S0| / |S0|
};

/// Fixed-step RK4 for D D'' + (D' + 1)^2 = 0 from P0 until Pmax (the last
/// step is shortened to land on it) or until D would reach 0.
OdeSolution solve_acquisition_ode(double p0, double d0, double dprime0, double step, double p_max);

struct StepRefinement {
    double end_coarse = 0.0;
    double end_fine = 0.0;
    double relative_change = 0.0;
};

/// D at the final grid point with `step` and `step / 2`.
StepRefinement refine_step(double p0, double d0, double dprime0, double step, double p_max);

// CSV: sample_index,P,D with '#' comment lines carrying policy, seed and
// true size.
void write_trace_csv(std::ostream& out, const CrawlTrace& t);
CrawlTrace read_trace_csv(std::istream& in);
/// sample_index,P,D,dprime,L_hat,S_hat,clamped_flag
void write_estimate_csv(std::ostream& out, const SizeEstimate& e);

}  // namespace osn::crawl
