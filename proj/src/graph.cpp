#include "osn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "osn/error.hpp"
#include "osn/parallel.hpp"

namespace osn {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, BuildStats* stats) {
    BuildStats local;
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                ") references a node outside [0, " + std::to_string(node_count) + ")");
        }
        if (u == v) {
            ++local.self_loops;
            continue;
        }
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    const auto unique_end = std::unique(canon.begin(), canon.end());
    local.duplicate_edges = static_cast<std::size_t>(canon.end() - unique_end);
    canon.erase(unique_end, canon.end());

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : canon) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(canon.size() * 2);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) g.targets_[cursor[v]++] = u;
    for (auto [u, v] : canon) g.targets_[cursor[u]++] = v;
    for (std::size_t i = 0; i < node_count; ++i) {
        std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    if (stats) *stats = local;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

std::string Graph::label(NodeId v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
}

bool Graph::operator==(const Graph& other) const {
    if (offsets_ != other.offsets_ || targets_ != other.targets_) return false;
    if (labels_ == other.labels_) return true;
    for (NodeId v = 0; v < node_count(); ++v) {
        if (label(v) != other.label(v)) return false;
    }
    return true;
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != node_count()) {
        throw ArgumentError("label table has " + std::to_string(labels.size()) +
                            " entries for " + std::to_string(node_count()) + " nodes");
    }
    labels_ = std::move(labels);
}

std::optional<NodeId> Graph::find_label(std::string_view label) const {
    if (labels_.empty()) {
        NodeId v = 0;
        const auto* end = label.data() + label.size();
        auto [ptr, ec] = std::from_chars(label.data(), end, v);
        if (ec == std::errc() && ptr == end && v < node_count()) return v;
        return std::nullopt;
    }
    for (NodeId v = 0; v < labels_.size(); ++v) {
        if (labels_[v] == label) return v;
    }
    return std::nullopt;
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    constexpr NodeId kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> to_parent(nodes.begin(), nodes.end());
    std::sort(to_parent.begin(), to_parent.end());
    if (std::adjacent_find(to_parent.begin(), to_parent.end()) != to_parent.end()) {
        throw ArgumentError("induced_subgraph: duplicate node in selection");
    }
    std::vector<NodeId> to_child(g.node_count(), kAbsent);
    for (NodeId i = 0; i < to_parent.size(); ++i) {
        if (to_parent[i] >= g.node_count()) throw ArgumentError("induced_subgraph: node out of range");
        to_child[to_parent[i]] = i;
    }
    std::vector<Edge> edges;
    for (NodeId i = 0; i < to_parent.size(); ++i) {
        for (NodeId w : g.neighbors(to_parent[i])) {
            const NodeId j = to_child[w];
            if (j != kAbsent && i < j) edges.emplace_back(i, j);
        }
    }
    Subgraph sub{Graph::from_edges(to_parent.size(), edges), std::move(to_parent)};
    std::vector<std::string> labels;
    labels.reserve(sub.to_parent.size());
    for (NodeId p : sub.to_parent) labels.push_back(g.label(p));
    sub.graph.set_labels(std::move(labels));
    return sub;
}

EdgeListLoad load_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    EdgeListLoad result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r\n\f\v");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a >> b) || (fields >> extra)) {
            throw ParseError("expected exactly two node labels", line_no);
        }
        ++result.edge_lines;
        const NodeId u = intern(a);
        const NodeId v = intern(b);
        edges.emplace_back(u, v);
    }
    BuildStats stats;
    result.graph = Graph::from_edges(labels.size(), edges, &stats);
    result.graph.set_labels(std::move(labels));
    result.self_loops_dropped = stats.self_loops;
    result.duplicates_dropped = stats.duplicate_edges;
    return result;
}

EdgeListLoad load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list '" + path + "'");
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

ComponentLabeling components(const Graph& g) {
    constexpr auto kUnset = static_cast<std::uint32_t>(-1);
    ComponentLabeling result;
    result.component_of.assign(g.node_count(), kUnset);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (result.component_of[s] != kUnset) continue;
        const auto id = static_cast<std::uint32_t>(result.sizes.size());
        std::size_t size = 0;
        result.component_of[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v)) {
                if (result.component_of[w] == kUnset) {
                    result.component_of[w] = id;
                    stack.push_back(w);
                }
            }
        }
        result.sizes.push_back(size);
        if (!result.largest || size > result.sizes[*result.largest]) result.largest = id;
    }
    return result;
}

bool is_connected(const Graph& g) { return components(g).count() <= 1; }

Subgraph giant_core(const Graph& g) {
    if (g.empty()) throw PreconditionError("giant core of an empty graph is undefined");
    const auto labeling = components(g);
    std::vector<NodeId> members;
    members.reserve(labeling.sizes[*labeling.largest]);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (labeling.component_of[v] == *labeling.largest) members.push_back(v);
    }
    return induced_subgraph(g, members);
}

std::size_t bfs_into(const Graph& g, NodeId source, std::span<Hops> distance,
                     std::vector<NodeId>& queue) {
    std::fill(distance.begin(), distance.end(), kUnreachable);
    queue.clear();
    queue.push_back(source);
    distance[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId v = queue[head];
        const Hops next = distance[v] + 1;
        for (NodeId w : g.neighbors(v)) {
            if (distance[w] == kUnreachable) {
                distance[w] = next;
                queue.push_back(w);
            }
        }
    }
    return queue.size();
}

DistanceMap bfs(const Graph& g, NodeId source) {
    if (source >= g.node_count()) {
        throw ArgumentError("bfs source " + std::to_string(source) + " out of range");
    }
    DistanceMap map{source, std::vector<Hops>(g.node_count())};
    std::vector<NodeId> queue;
    queue.reserve(g.node_count());
    bfs_into(g, source, map.distance, queue);
    return map;
}

DistanceMatrix all_pairs_distances(const Graph& g) {
    const std::size_t n = g.node_count();
    DistanceMatrix m{n, std::vector<Hops>(n * n)};
    const auto workers = worker_count(n);
    std::vector<std::vector<NodeId>> queues(workers);
    parallel_for(n, workers, [&](std::size_t s, std::size_t w) {
        bfs_into(g, static_cast<NodeId>(s), std::span<Hops>(m.data.data() + s * n, n), queues[w]);
    });
    return m;
}

}  // namespace osn
