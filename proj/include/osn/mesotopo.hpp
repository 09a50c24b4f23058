#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "osn/graph.hpp"
#include "osn/histogram.hpp"
#include "osn/roles.hpp"

namespace osn::meso {

/// A chain peeled off the dense core, loner first.
struct Tentacle {
    std::vector<NodeId> nodes;
    /// Node the chain's top hangs from: a dense-core node, or a branch node
    /// of another tentacle. Absent only for the root chain of a tree.
    std::optional<NodeId> anchor;

    std::size_t hops() const { return nodes.size(); }
};

/// A chain of dense-core nodes with core degree 2 between two endpoints of
/// core degree >= 3.
struct Fiber {
    std::vector<NodeId> inner;  ///< ordered from first_end to second_end
    NodeId first_end = 0;
    NodeId second_end = 0;
    bool same_endpoint = false;  ///< handle loop

    std::size_t hops() const { return inner.size() + 1; }
};

/// All node indices refer to the decomposed graph unless stated otherwise.
struct Decomposition {
    std::vector<NodeRole> roles;
    std::vector<Tentacle> tentacles;
    std::vector<Fiber> fibers;
    Subgraph dense_core;  ///< induced on the non-tentacle nodes
    bool degenerate = false;  ///< the input is a tree; the dense core is empty

    std::size_t tentacle_node_count() const;
};

/// Peels degree-1 nodes until none remain (2-core). Peeled trees are split
/// into tentacles by long-path decomposition: each branch point continues
/// the chain of its tallest child (ties: smallest index). Fibers are then
/// traced inside the dense core. Throws PreconditionError on empty or
/// disconnected input.
Decomposition decompose(const Graph& giant);

struct GeometricFit {
    double mean = 0.0;
    double p_hat = 0.0;  ///< MLE 1 / mean for support {1, 2, ...}
};

/// Throws PreconditionError on an empty histogram or non-positive values.
GeometricFit fit_geometric(const Histogram& h);

struct TentacleDistribution {
    Histogram hops;
    std::optional<GeometricFit> fit;
};

struct FiberDistribution {
    Histogram inner_nodes;
    Histogram hops;  ///< inner + 1
    std::optional<GeometricFit> fit;  ///< over inner-node counts
};

TentacleDistribution tentacle_histogram(const Decomposition& d);
FiberDistribution fiber_histogram(const Decomposition& d);

// ---------------------------------------------------------------------------
// Depth

struct DepthMode {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    std::size_t anchors = 0;
    std::uint64_t seed = 0;

    static DepthMode exact() { return {}; }
    static DepthMode sampled(std::size_t anchors, std::uint64_t seed) {
        return {Kind::sampled, anchors, seed};
    }
};

/// Mean distance to the other nodes (exact) or to the shared anchors
/// excluding the node itself (sampled), kept as an exact ratio.
struct Depth {
    std::uint64_t total = 0;
    std::uint64_t count = 0;

    double value() const { return count ? static_cast<double>(total) / static_cast<double>(count) : 0.0; }
};

struct DepthMap {
    std::vector<Depth> depths;
    double mean_depth = 0.0;
    DepthMode mode;
    std::vector<NodeId> anchors;  ///< sampled mode only

    double depth(NodeId v) const { return depths[v].value(); }
    double min_depth() const;
    double max_depth() const;
};

/// Throws PreconditionError when the graph is disconnected or has fewer
/// than two nodes.
DepthMap depth_map(const Graph& core, DepthMode mode = DepthMode::exact());

struct ComponentDepth {
    Subgraph component;
    DepthMap depths;
};

/// Depth per connected component (components with one node are skipped).
std::vector<ComponentDepth> depth_map_per_component(const Graph& core, DepthMode mode = DepthMode::exact());

struct DepthBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t node_count = 0;
    double mean_density = 0.0;  ///< mean degree in the bin
    double mean_depth = 0.0;
};

/// Nodes binned by depth into [k w, (k+1) w); empty bins are omitted.
std::vector<DepthBin> depth_density_profile(const Graph& core, const DepthMap& depths, double bin_width);

// ---------------------------------------------------------------------------
// Personality

enum class Personality : std::uint8_t { popular = 0, neutral = 1, marginal = 2 };

const char* to_string(Personality p);

/// Rows: class of the member; columns: class of first-circle neighbors,
/// pooled over every member of the row class.
struct MixingTable {
    std::array<std::array<std::uint64_t, 3>, 3> counts{};

    std::uint64_t row_total(Personality row) const;
    /// Zero for an empty row.
    double fraction(Personality row, Personality column) const;
};

struct PersonalityOptions {
    double tau = 0.05;  ///< neutral half-width on the log10 scale
    /// Optional per-node density replacing the degree within the graph
    /// (e.g. giant-core degrees). First circles stay the graph neighbors.
    std::vector<double> density;
};

struct PersonalityReport {
    double tau = 0.0;
    std::vector<double> density;           ///< rho
    std::vector<double> neighbor_density;  ///< rho_eps, mean density of the first circle
    std::vector<double> ratio;             ///< E/I = rho_eps / rho
    std::vector<double> personality;       ///< log10(E/I)
    std::vector<Personality> classes;
    std::array<std::size_t, 3> class_counts{};
    MixingTable mixing;

    /// Absent when there are no popular members.
    std::optional<double> marginal_to_popular() const;
};

/// Throws ArgumentError for tau < 0 or a density table of the wrong size,
/// PreconditionError when a node has no neighbors or zero density.
PersonalityReport personality_report(const Graph& core, const PersonalityOptions& options = {});

}  // namespace osn::meso
