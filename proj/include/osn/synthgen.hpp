#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "osn/graph.hpp"
#include "osn/rng.hpp"
#include "osn/roles.hpp"

namespace osn::synth {

enum class CoreKind { complete, random };

struct CoreSpec {
    CoreKind kind = CoreKind::complete;
    std::size_t nodes = 10;
    double edge_probability = 0.0;  ///< random cores only
};

/// A dense core with chains hung off it: tentacles (one end free) and
/// fibers (both ends back on the core).
struct AppendageSpec {
    CoreSpec core;
    std::vector<std::size_t> tentacle_lengths;    ///< hops, i.e. nodes per tentacle
    std::vector<std::size_t> fiber_inner_counts;  ///< inner nodes per fiber
    std::uint64_t seed = 0;
    bool allow_same_endpoint = false;             ///< permit handle loops
};

struct LabeledGraph {
    Graph graph;
    std::vector<NodeRole> roles;
};

/// Node layout: core nodes first, then each tentacle from its attachment
/// outward (loner last), then each fiber's inner nodes in chain order.
/// Random cores are resampled until connected with minimum degree 3; any
/// attachment requires every core node to have degree >= 3.
LabeledGraph generate_appendage_graph(const AppendageSpec& spec);

struct DoubleParetoSpec {
    std::size_t nodes = 0;
    double left_exponent = 1.0;
    double right_exponent = 3.0;
    double break_degree = 25.0;
    std::size_t min_degree = 1;
    std::uint64_t seed = 0;
    std::size_t max_degree = 0;  ///< 0: max(nodes - 1, break, min_degree)
};

/// I.i.d. integer degrees with P(k) proportional to k^-a1 below the break and
/// b^(a2-a1) k^-a2 from the break on (continuous at b). If the sum is odd
/// the first sample is incremented.
std::vector<std::size_t> generate_double_pareto_degrees(const DoubleParetoSpec& spec);

struct ConfigurationModelOptions {
    /// Redraw the stub matching up to this many extra times while it
    /// produces self-loops or multi-edges; the last draw is then erased.
    unsigned simple_retries = 0;
};

struct ConfigurationModel {
    Graph graph;
    std::vector<std::size_t> realized_degrees;
    std::size_t erased_self_loops = 0;
    std::size_t erased_multi_edges = 0;
    unsigned attempts = 1;
};

/// Erased configuration model: uniform stub matching, then self-loops and
/// repeated edges are discarded.
ConfigurationModel configuration_model(std::span<const std::size_t> degrees, std::uint64_t seed,
                                       ConfigurationModelOptions options = {});

/// G(n, p).
Graph erdos_renyi(std::size_t nodes, double p, Rng& rng);

/// Uniform random recursive tree plus independent G(n, p) edges; always
/// connected.
Graph random_connected(std::size_t nodes, double extra_edge_probability, Rng& rng);

}  // namespace osn::synth
