#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace osn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Hop distance; kUnreachable marks nodes outside the source's component.
using Hops = std::int32_t;
inline constexpr Hops kUnreachable = -1;

/// Counts of input edges that were discarded while building a simple graph.
struct BuildStats {
    std::size_t self_loops = 0;
    std::size_t duplicate_edges = 0;
};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Nodes are dense indices 0..node_count()-1. Each adjacency list is sorted,
/// symmetric, and free of self-loops and duplicates. Optional string labels
/// map indices back to external names; without them a node's label is its
/// decimal index.
class Graph {
public:
    Graph() = default;

    /// Builds a simple graph on `node_count` nodes. Self-loops and repeated
    /// pairs (in either orientation) are dropped and counted in `stats`.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                            BuildStats* stats = nullptr);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    bool empty() const noexcept { return node_count() == 0; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    /// Every edge once, as (u, v) with u < v, in ascending order.
    std::vector<Edge> edges() const;

    bool has_labels() const noexcept { return !labels_.empty(); }
    std::string label(NodeId v) const;
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// Replaces the label table; size must equal node_count().
    void set_labels(std::vector<std::string> labels);
    std::optional<NodeId> find_label(std::string_view label) const;

    /// Same adjacency and the same label on every node (an unlabeled node
    /// reads as its index).
    bool operator==(const Graph& other) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<std::string> labels_;
};

/// A graph induced on a subset of a parent graph's nodes.
struct Subgraph {
    Graph graph;
    std::vector<NodeId> to_parent;  ///< subgraph index -> parent index

    bool operator==(const Subgraph&) const = default;
};

/// Induced subgraph on `nodes` (any order; duplicates rejected). Nodes keep
/// ascending parent order and inherit the parent's labels.
Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// ---------------------------------------------------------------------------
// Edge-list text format

struct EdgeListLoad {
    Graph graph;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t edge_lines = 0;
};

/// Reads one edge per line as two whitespace-separated labels. Lines whose
/// first non-blank character is '#' and blank lines are skipped. Labels map
/// to indices in order of first appearance.
EdgeListLoad load_edge_list(std::istream& in);
EdgeListLoad load_edge_list_file(const std::string& path);

/// Writes each edge once (u < v by index) using node labels. Isolated nodes
/// cannot be represented and are omitted.
void write_edge_list(std::ostream& out, const Graph& g);

// ---------------------------------------------------------------------------
// Components

struct ComponentLabeling {
    std::vector<std::uint32_t> component_of;  ///< per node
    std::vector<std::size_t> sizes;           ///< per component, in discovery order
    std::optional<std::size_t> largest;       ///< absent for the empty graph

    std::size_t count() const noexcept { return sizes.size(); }
};

/// Components are numbered in order of their smallest node index, so the
/// first maximal-size component is also the one with the smallest minimum
/// index.
ComponentLabeling components(const Graph& g);

bool is_connected(const Graph& g);

/// Induced subgraph on the largest connected component. Throws
/// PreconditionError on an empty graph.
Subgraph giant_core(const Graph& g);

// ---------------------------------------------------------------------------
// Shortest paths

struct DistanceMap {
    NodeId source = 0;
    std::vector<Hops> distance;

    bool reachable(NodeId v) const { return distance[v] != kUnreachable; }
};

/// Breadth-first hop distances from `source`. Throws ArgumentError for an
/// out-of-range source.
DistanceMap bfs(const Graph& g, NodeId source);

/// Allocation-free BFS for hot loops: fills `distance` (size node_count())
/// and reuses `queue` as scratch. Returns the number of reached nodes.
std::size_t bfs_into(const Graph& g, NodeId source, std::span<Hops> distance,
                     std::vector<NodeId>& queue);

/// Dense all-pairs hop matrix, row-major.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<Hops> data;

    Hops at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    std::span<const Hops> row(std::size_t i) const { return {data.data() + i * n, n}; }
};

/// One BFS per node, run concurrently.
DistanceMatrix all_pairs_distances(const Graph& g);

}  // namespace osn
