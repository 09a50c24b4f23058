#include "osn/crawlsize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "osn/error.hpp"
#include "osn/rng.hpp"
#include "osn/text.hpp"

namespace osn::crawl {

const char* to_string(Policy p) {
    return p == Policy::fifo ? "fifo" : "random";
}

Policy parse_policy(std::string_view s) {
    if (s == "fifo") return Policy::fifo;
    if (s == "random" || s == "random-frontier") return Policy::random_frontier;
    throw ArgumentError("unknown crawl policy '" + std::string(s) + "' (expected fifo or random)");
}

CrawlTrace simulate_crawl(const Graph& g, NodeId start, Policy policy, std::size_t stride, std::uint64_t seed) {
    const std::size_t n = g.node_count();
    if (start >= n) throw ArgumentError("crawl start " + std::to_string(start) + " is not a node");
    if (stride == 0) throw ArgumentError("crawl stride must be >= 1");

    CrawlTrace t;
    t.policy = policy;
    t.seed = seed;
    t.stride = stride;

    Rng rng(seed);
    std::vector<char> seen(n, 0);
    std::deque<NodeId> queue;     // fifo
    std::vector<NodeId> frontier;  // random
    seen[start] = 1;
    if (policy == Policy::fifo) {
        queue.push_back(start);
    } else {
        frontier.push_back(start);
    }
    std::int64_t processed = 0;
    std::int64_t discovered = 1;
    while (discovered > 0) {
        NodeId v;
        if (policy == Policy::fifo) {
            v = queue.front();
            queue.pop_front();
        } else {
            const auto k = static_cast<std::size_t>(rng.uniform_index(frontier.size()));
            v = frontier[k];
            frontier[k] = frontier.back();
            frontier.pop_back();
        }
        --discovered;
        ++processed;
        for (NodeId w : g.neighbors(v)) {
            if (seen[w]) continue;
            seen[w] = 1;
            ++discovered;
            if (policy == Policy::fifo) {
                queue.push_back(w);
            } else {
                frontier.push_back(w);
            }
        }
        if (processed % static_cast<std::int64_t>(stride) == 0 || discovered == 0) {
            t.samples.push_back({processed, discovered});
        }
    }
    t.true_size = processed;
    t.partial = static_cast<std::size_t>(processed) != n;
    return t;
}

std::size_t WindowPolicy::at(std::size_t sample_index) const {
    if (fixed) return *fixed;
    const auto scaled = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(sample_index + 1)));
    return std::max(min_samples, scaled);
}

namespace {

void check_window(const WindowPolicy& w) {
    if (w.fixed ? *w.fixed < 2 : w.min_samples < 2) throw ArgumentError("smoothing window must be >= 2 samples");
    if (!(w.fraction >= 0.0)) throw ArgumentError("window fraction must be >= 0");
}

}  // namespace

std::vector<std::optional<double>> estimate_derivative(const CrawlTrace& t, const WindowPolicy& window) {
    check_window(window);
    const std::size_t m = t.samples.size();
    // Exact prefix sums keep straight-line data exact.
    std::vector<__int128> sx(m + 1, 0), sy(m + 1, 0), sxx(m + 1, 0), sxy(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const __int128 x = t.samples[i].processed;
        const __int128 y = t.samples[i].discovered;
        sx[i + 1] = sx[i] + x;
        sy[i + 1] = sy[i] + y;
        sxx[i + 1] = sxx[i] + x * x;
        sxy[i + 1] = sxy[i] + x * y;
    }
    std::vector<std::optional<double>> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t w = window.at(i);
        if (i + 1 < w) continue;
        const std::size_t lo = i + 1 - w;
        const __int128 k = static_cast<__int128>(w);
        const __int128 X = sx[i + 1] - sx[lo];
        const __int128 Y = sy[i + 1] - sy[lo];
        const __int128 num = k * (sxy[i + 1] - sxy[lo]) - X * Y;
        const __int128 den = k * (sxx[i + 1] - sxx[lo]) - X * X;
        if (den == 0) continue;
        out[i] = static_cast<double>(num) / static_cast<double>(den);
    }
    return out;
}

SizeEstimate estimate_size(const CrawlTrace& t, const WindowPolicy& window) {
    const auto slopes = estimate_derivative(t, window);
    SizeEstimate e;
    e.window = window;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (!slopes[i]) continue;
        EstimateRow r;
        r.sample_index = i;
        r.processed = t.samples[i].processed;
        r.discovered = t.samples[i].discovered;
        r.dprime = *slopes[i];
        r.l_hat = r.dprime + 1.0;
        r.clamped = r.l_hat < 0.0;
        const double unseen = r.clamped ? 0.0 : r.l_hat * static_cast<double>(r.discovered);
        r.s_hat = static_cast<double>(r.processed + r.discovered) + unseen;
        e.rows.push_back(r);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Rational fit

double RationalFit::operator()(double p) const {
    return a0 * (p * p * p + a1 * p * p + a2 * p) / (p * p + a3 * p + a4);
}

namespace {

struct Scaled {
    Eigen::VectorXd u, v;
    double p_scale = 1.0, d_scale = 1.0;
};

// Real roots of x^2 + b x + c inside [lo, hi] (closed).
bool root_in_range(double b, double c, double lo, double hi) {
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return false;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0 ? s : -s));
    std::vector<double> roots;
    if (q != 0.0) {
        roots.push_back(q);
        roots.push_back(c / q);
    } else {
        roots.push_back(0.0);
    }
    for (double r : roots) {
        if (r >= lo && r <= hi) return true;
    }
    return false;
}

}  // namespace

RationalFit fit_rational(const CrawlTrace& t) {
    std::vector<double> p, d;
    p.reserve(t.samples.size());
    d.reserve(t.samples.size());
    for (const auto& smp : t.samples) {
        p.push_back(static_cast<double>(smp.processed));
        d.push_back(static_cast<double>(smp.discovered));
    }
    return fit_rational(p, d);
}

RationalFit fit_rational(std::span<const double> p, std::span<const double> d) {
    if (p.size() != d.size()) throw ArgumentError("rational fit needs as many D values as P values");
    const std::size_t m = p.size();
    if (m < 20) {
        throw PreconditionError("rational fit needs at least 20 samples, got " + std::to_string(m));
    }
    Scaled s;
    s.u.resize(static_cast<Eigen::Index>(m));
    s.v.resize(static_cast<Eigen::Index>(m));
    double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        pmin = std::min(pmin, p[i]);
        pmax = std::max(pmax, p[i]);
        dmax = std::max(dmax, std::abs(d[i]));
    }
    s.p_scale = pmax > 0 ? pmax : 1.0;
    s.d_scale = dmax > 0 ? dmax : 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        s.u[static_cast<Eigen::Index>(i)] = p[i] / s.p_scale;
        s.v[static_cast<Eigen::Index>(i)] = d[i] / s.d_scale;
    }
    const auto rows = static_cast<Eigen::Index>(m);

    // v u^2 = c0 u^3 + b1 u^2 + b2 u - c3 v u - c4 v in scaled units.
    Eigen::MatrixXd a(rows, 5);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double u = s.u[i], v = s.v[i];
        a(i, 0) = u * u * u;
        a(i, 1) = u * u;
        a(i, 2) = u;
        a(i, 3) = -v * u;
        a(i, 4) = -v;
        rhs[i] = v * u * u;
    }

    Eigen::VectorXd weight = Eigen::VectorXd::Ones(rows);
    std::optional<RationalFit> best;
    std::size_t rank = 0;
    const double lo = pmin / s.p_scale, hi = pmax / s.p_scale;
    for (int pass = 0; pass < 21; ++pass) {
        const Eigen::MatrixXd wa = weight.asDiagonal() * a;
        const Eigen::VectorXd wb = weight.cwiseProduct(rhs);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(wa);
        cod.setThreshold(1e-12);
        const auto r = static_cast<std::size_t>(cod.rank());
        if (pass == 0) {
            rank = r;
            if (rank <= 3) {
                throw PreconditionError("rational fit is singular (rank " + std::to_string(rank) +
                                        "); record more samples over a wider range of P");
            }
        }
        const Eigen::VectorXd x = cod.solve(wb);
        if (!x.allFinite() || x[0] == 0.0) break;
        const double c0 = x[0], c3 = x[3], c4 = x[4];
        const double c1 = x[1] / c0, c2 = x[2] / c0;

        bool finite = true;
        Eigen::VectorXd den(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double u = s.u[i];
            den[i] = u * u + c3 * u + c4;
            if (den[i] == 0.0) finite = false;
        }
        if (!finite) break;

        if (!root_in_range(c3, c4, lo, hi)) {
            RationalFit f;
            f.a0 = c0 * s.d_scale / s.p_scale;
            f.a1 = c1 * s.p_scale;
            f.a2 = c2 * s.p_scale * s.p_scale;
            f.a3 = c3 * s.p_scale;
            f.a4 = c4 * s.p_scale * s.p_scale;
            f.p_min = pmin;
            f.p_max = pmax;
            f.samples = m;
            f.rank = rank;
            double sse = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double r2 = f(p[i]) - d[i];
                sse += r2 * r2;
            }
            f.rmse = std::sqrt(sse / static_cast<double>(m));
            if (std::isfinite(f.rmse) && (!best || f.rmse < best->rmse)) best = f;
        }
        // Sanathanan-Koerner reweighting: divide out the current denominator.
        for (Eigen::Index i = 0; i < rows; ++i) weight[i] = 1.0 / std::max(std::abs(den[i]), 1e-12);
        weight /= weight.maxCoeff();
    }
    if (!best) {
        throw PreconditionError("rational fit rejected: the denominator vanishes inside the fitted range of P");
    }
    return *best;
}

// ---------------------------------------------------------------------------
// ODE

OdeSolution solve_acquisition_ode(double p0, double d0, double dprime0, double step, double p_max) {
    if (!(d0 > 0.0)) throw ArgumentError("ODE needs D0 > 0");
    if (!(step > 0.0)) throw ArgumentError("ODE step must be > 0");
    if (!(p_max >= p0)) throw ArgumentError("ODE needs Pmax >= P0");

    OdeSolution sol;
    sol.p0 = p0;
    sol.d0 = d0;
    sol.dprime0 = dprime0;
    sol.step = step;
    auto size_of = [](double p, double d, double dp) { return p + d + (dp + 1.0) * d; };
    const double s0 = size_of(p0, d0, dprime0);
    sol.grid.push_back({p0, d0, dprime0, s0});

    double p = p0, d = d0, dp = dprime0;
    // y = (D, D'), y' = (D', -(D' + 1)^2 / D)
    auto accel = [](double dd, double ddp) { return -(ddp + 1.0) * (ddp + 1.0) / dd; };
    const auto total_steps = static_cast<std::int64_t>(std::ceil((p_max - p0) / step - 1e-9));
    for (std::int64_t k = 0; k < total_steps; ++k) {
        const double h = std::min(step, p_max - p);
        if (h <= 0.0) break;
        const double k1d = dp, k1v = accel(d, dp);
        const double d2 = d + 0.5 * h * k1d, v2 = dp + 0.5 * h * k1v;
        if (d2 <= 0.0) { sol.reached_zero = true; break; }
        const double k2d = v2, k2v = accel(d2, v2);
        const double d3 = d + 0.5 * h * k2d, v3 = dp + 0.5 * h * k2v;
        if (d3 <= 0.0) { sol.reached_zero = true; break; }
        const double k3d = v3, k3v = accel(d3, v3);
        const double d4 = d + h * k3d, v4 = dp + h * k3v;
        if (d4 <= 0.0) { sol.reached_zero = true; break; }
        const double k4d = v4, k4v = accel(d4, v4);
        const double dn = d + h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
        const double vn = dp + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (!(dn > 0.0)) { sol.reached_zero = true; break; }
        // The final step lands exactly on p_max.
        p = k + 1 == total_steps ? p_max : p0 + static_cast<double>(k + 1) * step;
        d = dn;
        dp = vn;
        const double sz = size_of(p, d, dp);
        sol.grid.push_back({p, d, dp, sz});
        sol.max_s_drift = std::max(sol.max_s_drift, std::abs(sz - s0) / std::abs(s0));
    }
    return sol;
}

StepRefinement refine_step(double p0, double d0, double dprime0, double step, double p_max) {
    const auto coarse = solve_acquisition_ode(p0, d0, dprime0, step, p_max);
    const auto fine = solve_acquisition_ode(p0, d0, dprime0, step / 2.0, p_max);
    if (coarse.reached_zero || fine.reached_zero) {
        throw PreconditionError("D reaches 0 before Pmax; choose a smaller Pmax for the refinement study");
    }
    StepRefinement r;
    r.end_coarse = coarse.grid.back().d;
    r.end_fine = fine.grid.back().d;
    r.relative_change = std::abs(r.end_fine - r.end_coarse) / std::abs(r.end_fine);
    return r;
}

// ---------------------------------------------------------------------------
// CSV

void write_trace_csv(std::ostream& out, const CrawlTrace& t) {
    out << "# policy=" << to_string(t.policy) << " seed=" << t.seed << " stride=" << t.stride;
    if (t.true_size) out << " true_size=" << *t.true_size;
    if (t.partial) out << " partial=1";
    out << "\nsample_index,P,D\n";
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        out << i << ',' << t.samples[i].processed << ',' << t.samples[i].discovered << '\n';
    }
}

namespace {

std::int64_t parse_int(std::string_view s, std::size_t line) {
    s = trim(s);
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("expected an integer, got '" + std::string(s) + "'", line);
    }
    return v;
}

}  // namespace

CrawlTrace read_trace_csv(std::istream& in) {
    CrawlTrace t;
    std::string raw;
    std::size_t line = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = trim(raw);
        if (text.empty()) continue;
        if (text.front() == '#') {
            for (auto field : split(text.substr(1), ' ')) {
                const auto eq = field.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = field.substr(0, eq);
                const auto val = field.substr(eq + 1);
                if (key == "policy") t.policy = parse_policy(val);
                else if (key == "seed") t.seed = static_cast<std::uint64_t>(parse_int(val, line));
                else if (key == "stride") t.stride = static_cast<std::size_t>(parse_int(val, line));
                else if (key == "true_size") t.true_size = parse_int(val, line);
                else if (key == "partial") t.partial = parse_int(val, line) != 0;
            }
            continue;
        }
        if (!header) {
            if (text != "sample_index,P,D") throw ParseError("expected header 'sample_index,P,D'", line);
            header = true;
            continue;
        }
        const auto cols = split(text, ',');
        if (cols.size() != 3) throw ParseError("expected 3 columns", line);
        Sample s{parse_int(cols[1], line), parse_int(cols[2], line)};
        if (s.discovered < 0) throw ParseError("D must be >= 0", line);
        if (!t.samples.empty() && s.processed <= t.samples.back().processed) {
            throw ParseError("P must be strictly increasing", line);
        }
        t.samples.push_back(s);
    }
    if (!header) throw ParseError("missing header 'sample_index,P,D'", line);
    return t;
}

void write_estimate_csv(std::ostream& out, const SizeEstimate& e) {
    out << "sample_index,P,D,dprime,L_hat,S_hat,clamped_flag\n";
    for (const auto& r : e.rows) {
        out << r.sample_index << ',' << r.processed << ',' << r.discovered << ',' << format_double(r.dprime) << ','
            << format_double(r.l_hat) << ',' << format_double(r.s_hat) << ',' << (r.clamped ? 1 : 0) << '\n';
    }
}

}  // namespace osn::crawl
