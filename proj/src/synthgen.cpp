#include "osn/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "osn/error.hpp"

namespace osn::synth {

namespace {

constexpr int kRandomCoreAttempts = 1000;

std::vector<Edge> complete_edges(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return edges;
}

std::vector<Edge> random_core_edges(const CoreSpec& core, Rng& rng) {
    for (int attempt = 0; attempt < kRandomCoreAttempts; ++attempt) {
        const Graph g = erdos_renyi(core.nodes, core.edge_probability, rng);
        bool ok = is_connected(g);
        for (NodeId v = 0; ok && v < g.node_count(); ++v) ok = g.degree(v) >= 3;
        if (ok) return g.edges();
    }
    throw ArgumentError("random core G(" + std::to_string(core.nodes) + ", " +
                        std::to_string(core.edge_probability) +
                        ") never came out connected with minimum degree 3; raise p");
}

}  // namespace

LabeledGraph generate_appendage_graph(const AppendageSpec& spec) {
    if (spec.core.nodes < 3) throw ArgumentError("core needs at least 3 nodes");
    if (spec.core.kind == CoreKind::random &&
        !(spec.core.edge_probability > 0.0 && spec.core.edge_probability <= 1.0)) {
        throw ArgumentError("random core edge probability must be in (0, 1]");
    }
    for (auto len : spec.tentacle_lengths) {
        if (len < 1) throw ArgumentError("tentacle lengths must be >= 1");
    }
    for (auto inner : spec.fiber_inner_counts) {
        if (inner < 1) throw ArgumentError("fiber inner-node counts must be >= 1");
    }

    Rng rng(spec.seed);
    const std::size_t core_n = spec.core.nodes;
    std::vector<Edge> edges = spec.core.kind == CoreKind::complete ? complete_edges(core_n)
                                                                   : random_core_edges(spec.core, rng);
    std::vector<std::size_t> core_degree(core_n, 0);
    for (auto [u, v] : edges) {
        ++core_degree[u];
        ++core_degree[v];
    }
    std::vector<NodeId> hosts;
    for (NodeId v = 0; v < core_n; ++v) {
        if (core_degree[v] >= 3) hosts.push_back(v);
    }
    const bool has_attachments = !spec.tentacle_lengths.empty() || !spec.fiber_inner_counts.empty();
    if (has_attachments && hosts.size() != core_n) {
        throw ArgumentError("core too small to host attachments: every core node needs degree >= 3");
    }

    std::vector<NodeRole> roles(core_n, NodeRole::core);
    auto add_node = [&](NodeRole role) {
        roles.push_back(role);
        return static_cast<NodeId>(roles.size() - 1);
    };

    for (auto len : spec.tentacle_lengths) {
        NodeId prev = hosts[rng.uniform_index(hosts.size())];
        for (std::size_t i = 0; i < len; ++i) {
            const NodeId v = add_node(i + 1 == len ? NodeRole::loner : NodeRole::tentacle_inner);
            edges.emplace_back(prev, v);
            prev = v;
        }
    }

    for (auto inner : spec.fiber_inner_counts) {
        const NodeId a = hosts[rng.uniform_index(hosts.size())];
        NodeId b = 0;
        if (spec.allow_same_endpoint && inner >= 2) {
            b = hosts[rng.uniform_index(hosts.size())];
        } else {
            // Distinct pair; a one-node handle would need a doubled edge.
            auto j = rng.uniform_index(hosts.size() - 1);
            const auto ia = static_cast<std::size_t>(std::find(hosts.begin(), hosts.end(), a) - hosts.begin());
            if (j >= ia) ++j;
            b = hosts[j];
        }
        NodeId prev = a;
        for (std::size_t i = 0; i < inner; ++i) {
            const NodeId v = add_node(NodeRole::fiber_inner);
            edges.emplace_back(prev, v);
            prev = v;
        }
        edges.emplace_back(prev, b);
    }

    LabeledGraph out{Graph::from_edges(roles.size(), edges), std::move(roles)};
    return out;
}

std::vector<std::size_t> generate_double_pareto_degrees(const DoubleParetoSpec& spec) {
    if (!(spec.left_exponent > 0.0) || !(spec.right_exponent > 0.0)) {
        throw ArgumentError("double Pareto exponents must be positive");
    }
    if (spec.min_degree < 1) throw ArgumentError("minimum degree must be >= 1");
    if (!(spec.break_degree >= static_cast<double>(spec.min_degree))) {
        throw ArgumentError("break degree must be >= minimum degree");
    }
    std::size_t cap = spec.max_degree;
    if (cap == 0) {
        cap = std::max({spec.nodes > 1 ? spec.nodes - 1 : std::size_t{0},
                        static_cast<std::size_t>(std::ceil(spec.break_degree)), spec.min_degree});
    }
    if (cap < spec.min_degree) throw ArgumentError("maximum degree below minimum degree");

    const double a1 = spec.left_exponent;
    const double a2 = spec.right_exponent;
    const double b = spec.break_degree;
    const double right_scale = std::pow(b, a2 - a1);
    std::vector<double> cumulative;
    cumulative.reserve(cap - spec.min_degree + 1);
    double acc = 0.0;
    for (std::size_t k = spec.min_degree; k <= cap; ++k) {
        const double x = static_cast<double>(k);
        acc += x < b ? std::pow(x, -a1) : right_scale * std::pow(x, -a2);
        cumulative.push_back(acc);
    }

    Rng rng(spec.seed);
    std::vector<std::size_t> degrees(spec.nodes);
    std::size_t sum = 0;
    for (auto& d : degrees) {
        const double u = rng.uniform01() * acc;
        const auto idx = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        d = spec.min_degree + std::min(idx, cumulative.size() - 1);
        sum += d;
    }
    if (!degrees.empty() && sum % 2 == 1) ++degrees.front();
    return degrees;
}

ConfigurationModel configuration_model(std::span<const std::size_t> degrees, std::uint64_t seed,
                                       ConfigurationModelOptions options) {
    const std::size_t total = std::accumulate(degrees.begin(), degrees.end(), std::size_t{0});
    if (total % 2 != 0) throw ArgumentError("configuration model needs an even degree sum");

    std::vector<NodeId> stubs;
    stubs.reserve(total);
    for (NodeId v = 0; v < degrees.size(); ++v) stubs.insert(stubs.end(), degrees[v], v);

    Rng rng(seed);
    ConfigurationModel out;
    std::vector<Edge> edges(total / 2);
    for (unsigned attempt = 0;; ++attempt) {
        rng.shuffle(std::span<NodeId>(stubs));
        for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = {stubs[2 * i], stubs[2 * i + 1]};
        BuildStats stats;
        out.graph = Graph::from_edges(degrees.size(), edges, &stats);
        out.erased_self_loops = stats.self_loops;
        out.erased_multi_edges = stats.duplicate_edges;
        out.attempts = attempt + 1;
        const bool simple = stats.self_loops == 0 && stats.duplicate_edges == 0;
        if (simple || attempt >= options.simple_retries) break;
    }
    out.realized_degrees.resize(degrees.size());
    for (NodeId v = 0; v < degrees.size(); ++v) out.realized_degrees[v] = out.graph.degree(v);
    return out;
}

Graph erdos_renyi(std::size_t nodes, double p, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < nodes; ++u) {
        for (NodeId v = u + 1; v < nodes; ++v) {
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(nodes, edges);
}

Graph random_connected(std::size_t nodes, double extra_edge_probability, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v < nodes; ++v) edges.emplace_back(static_cast<NodeId>(rng.uniform_index(v)), v);
    for (NodeId u = 0; u < nodes; ++u) {
        for (NodeId v = u + 1; v < nodes; ++v) {
            if (rng.bernoulli(extra_edge_probability)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(nodes, edges);
}

}  // namespace osn::synth
