#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common.hpp"
#include "osn/crawlsize.hpp"
#include "osn/error.hpp"
#include "osn/synthgen.hpp"

using namespace osn;
using namespace osn::crawl;

namespace {

CrawlTrace trace_of(std::vector<std::pair<std::int64_t, std::int64_t>> pd) {
    CrawlTrace t;
    for (auto [p, d] : pd) t.samples.push_back({p, d});
    return t;
}

WindowPolicy fixed_window(std::size_t w) {
    WindowPolicy p;
    p.fixed = w;
    return p;
}

// Plain least-squares slope, written out separately from the prefix-sum version.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

Graph giant_double_pareto(std::size_t n, std::uint64_t seed) {
    synth::DoubleParetoSpec s;
    s.nodes = n;
    s.left_exponent = 1.0;
    s.right_exponent = 3.0;
    s.break_degree = 25;
    s.seed = seed;
    return giant_core(synth::configuration_model(synth::generate_double_pareto_degrees(s), seed + 1).graph).graph;
}

}  // namespace

TEST_CASE("crawl: complete graph steps D down by one") {
    const auto t = simulate_crawl(testing::complete_graph(101), 0);
    REQUIRE(t.samples.size() == 101);
    for (std::size_t i = 0; i < 101; ++i) {
        CHECK(t.samples[i].processed == static_cast<std::int64_t>(i + 1));
        CHECK(t.samples[i].discovered == static_cast<std::int64_t>(100 - i));
    }
    CHECK(t.true_size == 101);
    CHECK_FALSE(t.partial);

    const auto e = estimate_size(t);
    REQUIRE(e.rows.size() == 101 - 24);
    for (const auto& r : e.rows) {
        CHECK(r.dprime == -1.0);
        CHECK(r.s_hat == 101.0);
        CHECK_FALSE(r.clamped);
    }
}

TEST_CASE("crawl: star from the hub is exact") {
    const std::size_t leaves = 200;
    for (auto policy : {Policy::fifo, Policy::random_frontier}) {
        const auto t = simulate_crawl(testing::star_graph(leaves), 0, policy, 1, 3);
        CHECK(t.samples.front().discovered == static_cast<std::int64_t>(leaves));
        const auto e = estimate_size(t);
        REQUIRE_FALSE(e.rows.empty());
        for (const auto& r : e.rows) CHECK(r.s_hat == static_cast<double>(leaves + 1));
    }
}

TEST_CASE("crawl: path keeps one node in the frontier") {
    const auto t = simulate_crawl(testing::path_graph(10), 0);
    REQUIRE(t.samples.size() == 10);
    for (std::size_t i = 0; i + 1 < 10; ++i) CHECK(t.samples[i].discovered == 1);
    CHECK(t.samples.back().discovered == 0);
}

TEST_CASE("crawl: conservation on a configuration-model graph") {
    synth::DoubleParetoSpec s;
    s.nodes = 10'000;
    s.seed = 40;
    const auto g = synth::configuration_model(synth::generate_double_pareto_degrees(s), 41).graph;
    const auto comps = components(g);
    for (auto policy : {Policy::fifo, Policy::random_frontier}) {
        const auto big = static_cast<std::uint32_t>(*comps.largest);
        const auto start = static_cast<NodeId>(
            std::find(comps.component_of.begin(), comps.component_of.end(), big) - comps.component_of.begin());
        const auto t = simulate_crawl(g, start, policy, 1, 7);
        CHECK(t.samples.back().processed == static_cast<std::int64_t>(comps.sizes[*comps.largest]));
        CHECK(t.samples.back().discovered == 0);
        CHECK(t.partial == (comps.count() > 1));
        std::int64_t prev_seen = 1;
        for (const auto& smp : t.samples) {
            // every processed or discovered node is distinct and was reached once
            CHECK(smp.processed + smp.discovered >= prev_seen);
            CHECK(smp.processed + smp.discovered <= static_cast<std::int64_t>(g.node_count()));
            prev_seen = smp.processed + smp.discovered;
        }
    }
}

TEST_CASE("crawl: stride and validation") {
    const auto t = simulate_crawl(testing::complete_graph(25), 3, Policy::fifo, 10);
    REQUIRE(t.samples.size() == 3);
    CHECK(t.samples[0].processed == 10);
    CHECK(t.samples[1].processed == 20);
    CHECK(t.samples[2].processed == 25);
    CHECK_THROWS_AS(simulate_crawl(testing::path_graph(3), 3), ArgumentError);
    CHECK_THROWS_AS(simulate_crawl(testing::path_graph(3), 0, Policy::fifo, 0), ArgumentError);
    CHECK(parse_policy("random-frontier") == Policy::random_frontier);
    CHECK_THROWS_AS(parse_policy("dfs"), ArgumentError);

    const auto a = simulate_crawl(testing::star_graph(50), 3, Policy::random_frontier, 1, 99);
    const auto b = simulate_crawl(testing::star_graph(50), 3, Policy::random_frontier, 1, 99);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].discovered == b.samples[i].discovered);
}

TEST_CASE("derivative: hand examples") {
    const auto down = estimate_derivative(trace_of({{1, 100}, {2, 99}, {3, 98}}), fixed_window(3));
    CHECK_FALSE(down[0].has_value());
    CHECK_FALSE(down[1].has_value());
    CHECK(*down[2] == -1.0);

    const auto flat = estimate_derivative(trace_of({{1, 7}, {5, 7}, {9, 7}, {10, 7}}), fixed_window(2));
    for (std::size_t i = 1; i < 4; ++i) CHECK(*flat[i] == 0.0);

    CHECK_THROWS_AS(estimate_derivative(trace_of({{1, 1}, {2, 1}}), fixed_window(1)), ArgumentError);
    WindowPolicy small;
    small.min_samples = 1;
    CHECK_THROWS_AS(estimate_derivative(trace_of({{1, 1}, {2, 1}}), small), ArgumentError);
}

TEST_CASE("derivative: noisy slope against a direct least-squares oracle") {
    Rng rng(5);
    CrawlTrace t;
    for (std::int64_t p = 1; p <= 5000; ++p) {
        t.samples.push_back({p, 2 * p + 10 + static_cast<std::int64_t>(rng.uniform_index(11)) - 5});
    }
    const auto w = fixed_window(200);
    const auto slopes = estimate_derivative(t, w);
    for (std::size_t i = 199; i < t.samples.size(); i += 397) {
        std::vector<double> x, y;
        for (std::size_t k = i + 1 - 200; k <= i; ++k) {
            x.push_back(static_cast<double>(t.samples[k].processed));
            y.push_back(static_cast<double>(t.samples[k].discovered));
        }
        REQUIRE(slopes[i].has_value());
        CHECK(*slopes[i] == doctest::Approx(ls_slope(x, y)).epsilon(1e-9));
        CHECK(*slopes[i] >= 1.8);
        CHECK(*slopes[i] <= 2.2);
    }
}

TEST_CASE("window policy") {
    WindowPolicy w;
    CHECK(w.at(0) == 25);
    CHECK(w.at(2498) == 25);
    CHECK(w.at(2599) == 26);
    CHECK(w.at(99'999) == 1000);
    CHECK(fixed_window(7).at(123456) == 7);
}

TEST_CASE("estimate: negative unseen mass is clamped") {
    CrawlTrace t;
    for (std::int64_t p = 1; p <= 40; ++p) t.samples.push_back({p, 200 - 2 * p});
    const auto e = estimate_size(t);
    REQUIRE_FALSE(e.rows.empty());
    for (const auto& r : e.rows) {
        CHECK(r.dprime == -2.0);
        CHECK(r.clamped);
        CHECK(r.s_hat == static_cast<double>(r.processed + r.discovered));
    }
}

TEST_CASE("rational fit: planted coefficients are recovered") {
    RationalFit planted;
    planted.a0 = -1.6;
    planted.a1 = -20500;
    planted.a2 = -1e5;
    planted.a3 = 2000;
    planted.a4 = 5e5;
    std::vector<double> p, d;
    for (int i = 0; i < 400; ++i) {
        p.push_back(1.0 + 19999.0 * i / 399.0);
        d.push_back(planted(p.back()));
    }
    const auto fit = fit_rational(p, d);
    CHECK(fit.a0 == doctest::Approx(planted.a0).epsilon(1e-6));
    CHECK(fit.a1 == doctest::Approx(planted.a1).epsilon(1e-6));
    CHECK(fit.a2 == doctest::Approx(planted.a2).epsilon(1e-6));
    CHECK(fit.a3 == doctest::Approx(planted.a3).epsilon(1e-6));
    CHECK(fit.a4 == doctest::Approx(planted.a4).epsilon(1e-6));
    CHECK(fit.rank == 5);
    CHECK(fit.rmse < 1e-6 * *std::max_element(d.begin(), d.end()));
}

TEST_CASE("rational fit: linear complete-graph trace and preconditions") {
    const auto t = simulate_crawl(testing::complete_graph(101), 0);
    const auto fit = fit_rational(t);
    CHECK(fit.rmse < 1e-6 * 100);
    CHECK(fit(50.0) == doctest::Approx(51.0).epsilon(1e-6));

    CrawlTrace few;
    for (std::int64_t p = 1; p <= 10; ++p) few.samples.push_back({p, 100 - p});
    CHECK_THROWS_AS(fit_rational(few), PreconditionError);
    const std::vector<double> a{1, 2}, b{1};
    CHECK_THROWS_AS(fit_rational(a, b), ArgumentError);
}

TEST_CASE("ode: D' = -1 keeps D linear") {
    const auto sol = solve_acquisition_ode(10, 500, -1.0, 1.0, 300);
    CHECK_FALSE(sol.reached_zero);
    CHECK(sol.grid.back().p == 300.0);
    for (const auto& pt : sol.grid) {
        CHECK(pt.d == doctest::Approx(500.0 - (pt.p - 10.0)).epsilon(1e-12));
        CHECK(pt.dprime == -1.0);
        CHECK(pt.s == doctest::Approx(510.0).epsilon(1e-12));
    }
}

TEST_CASE("ode: S is conserved and the step is converged") {
    for (double dp0 : {-0.5, 0.0, 2.0}) {
        const double d0 = 1000.0;
        const auto sol = solve_acquisition_ode(100, d0, dp0, 1e-3 * d0, 5000);
        const double s0 = 100 + d0 + (dp0 + 1.0) * d0;
        for (const auto& pt : sol.grid) CHECK(std::abs(pt.s - s0) <= 1e-6 * s0);
        CHECK(sol.max_s_drift <= 1e-6);
        // D'' < 0 wherever D' != -1
        for (std::size_t i = 1; i < sol.grid.size(); ++i) CHECK(sol.grid[i].dprime <= sol.grid[i - 1].dprime);

        const double end = sol.reached_zero ? sol.grid.back().p * 0.9 : 5000.0;
        const auto r = refine_step(100, d0, dp0, 1e-3 * d0, end);
        CHECK(r.relative_change < 1e-4);
    }
}

TEST_CASE("ode: running into D = 0 and validation") {
    const auto sol = solve_acquisition_ode(0, 100, -2.0, 0.5, 1000);
    CHECK(sol.reached_zero);
    CHECK(sol.grid.back().d > 0.0);
    CHECK(sol.grid.back().p < 1000.0);
    CHECK_THROWS_AS(solve_acquisition_ode(0, 0, -1, 1, 10), ArgumentError);
    CHECK_THROWS_AS(solve_acquisition_ode(0, -3, -1, 1, 10), ArgumentError);
    CHECK_THROWS_AS(solve_acquisition_ode(0, 10, -1, 0, 10), ArgumentError);
    CHECK_THROWS_AS(refine_step(0, 100, -2.0, 0.5, 1000), PreconditionError);
}

TEST_CASE("trace csv round trip") {
    auto t = simulate_crawl(testing::star_graph(30), 4, Policy::random_frontier, 2, 17);
    t.partial = true;
    std::stringstream ss;
    write_trace_csv(ss, t);
    const auto back = read_trace_csv(ss);
    CHECK(back.policy == t.policy);
    CHECK(back.seed == 17);
    CHECK(back.stride == 2);
    CHECK(back.true_size == t.true_size);
    CHECK(back.partial);
    REQUIRE(back.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(back.samples[i].processed == t.samples[i].processed);
        CHECK(back.samples[i].discovered == t.samples[i].discovered);
    }

    std::istringstream no_header("0,1,2\n");
    CHECK_THROWS_AS(read_trace_csv(no_header), ParseError);
    std::istringstream decreasing("sample_index,P,D\n0,5,1\n1,5,0\n");
    CHECK_THROWS_AS(read_trace_csv(decreasing), ParseError);
    std::istringstream negative("sample_index,P,D\n0,1,-1\n");
    CHECK_THROWS_AS(read_trace_csv(negative), ParseError);
    std::istringstream bad_policy("# policy=dfs\nsample_index,P,D\n");
    CHECK_THROWS_AS(read_trace_csv(bad_policy), ArgumentError);

    std::ostringstream est;
    write_estimate_csv(est, estimate_size(simulate_crawl(testing::complete_graph(30), 0)));
    const auto text = est.str();
    CHECK(text.rfind("sample_index,P,D,dprime,L_hat,S_hat,clamped_flag\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 30 - 24);
}

TEST_CASE("policy robustness: fifo and random-frontier errors agree in the median") {
    const auto g = giant_double_pareto(20000, 70);
    const double n = static_cast<double>(g.node_count());
    auto final_quarter_error = [&](Policy policy, std::uint64_t seed) {
        Rng rng(seed);
        const auto start = static_cast<NodeId>(rng.uniform_index(g.node_count()));
        const auto e = estimate_size(simulate_crawl(g, start, policy, 1, seed + 1));
        double sum = 0;
        std::size_t count = 0;
        for (const auto& r : e.rows) {
            if (static_cast<double>(r.processed) >= 0.75 * n) {
                sum += std::abs(r.s_hat - n) / n;
                ++count;
            }
        }
        return sum / static_cast<double>(count);
    };
    std::vector<double> fifo, random;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        fifo.push_back(final_quarter_error(Policy::fifo, seed));
        random.push_back(final_quarter_error(Policy::random_frontier, seed));
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[9] + v[10]);
    };
    const double mf = median(fifo), mr = median(random);
    MESSAGE("median final-quarter error: fifo " << mf << ", random " << mr);
    CHECK(std::max(mf, mr) <= 2.0 * std::min(mf, mr));
}
