#include "osn/mesotopo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "osn/error.hpp"
#include "osn/macrostats.hpp"
#include "osn/parallel.hpp"

namespace osn::meso {

namespace {
constexpr NodeId kNone = static_cast<NodeId>(-1);
}

std::size_t Decomposition::tentacle_node_count() const {
    std::size_t total = 0;
    for (const auto& t : tentacles) total += t.nodes.size();
    return total;
}

Decomposition decompose(const Graph& giant) {
    const std::size_t n = giant.node_count();
    if (n == 0) throw PreconditionError("cannot decompose an empty graph");
    if (!is_connected(giant)) throw PreconditionError("decompose expects a connected giant core");

    // Leaf peeling. parent[v] is v's only unpeeled neighbor at removal time.
    std::vector<std::size_t> degree(n);
    std::vector<char> queued(n, 0), peeled(n, 0);
    std::vector<NodeId> parent(n, kNone);
    std::vector<NodeId> order;
    std::deque<NodeId> queue;
    for (NodeId v = 0; v < n; ++v) {
        degree[v] = giant.degree(v);
        if (degree[v] <= 1) {
            queue.push_back(v);
            queued[v] = 1;
        }
    }
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        peeled[v] = 1;
        order.push_back(v);
        for (NodeId w : giant.neighbors(v)) {
            if (peeled[w]) continue;
            parent[v] = w;
            if (--degree[w] <= 1 && !queued[w]) {
                queue.push_back(w);
                queued[w] = 1;
            }
        }
    }

    // Long-path decomposition of the peeled forest. Children are always
    // peeled before their parent, so `order` is a valid bottom-up order.
    std::vector<std::size_t> height(n, 0);
    std::vector<NodeId> preferred(n, kNone);
    for (NodeId v : order) {
        height[v] += 1;
        const NodeId p = parent[v];
        if (p == kNone || !peeled[p]) continue;
        if (preferred[p] == kNone || height[v] > height[preferred[p]] ||
            (height[v] == height[preferred[p]] && v < preferred[p])) {
            preferred[p] = v;
            height[p] = height[v];
        }
    }

    Decomposition d;
    d.roles.assign(n, NodeRole::core);
    for (NodeId v = 0; v < n; ++v) {
        if (!peeled[v]) continue;
        const NodeId p = parent[v];
        const bool top = p == kNone || !peeled[p] || preferred[p] != v;
        if (!top) continue;
        Tentacle t;
        if (p != kNone) t.anchor = p;
        for (NodeId cur = v; cur != kNone; cur = preferred[cur]) t.nodes.push_back(cur);
        std::reverse(t.nodes.begin(), t.nodes.end());
        d.roles[t.nodes.front()] = NodeRole::loner;
        for (std::size_t i = 1; i < t.nodes.size(); ++i) d.roles[t.nodes[i]] = NodeRole::tentacle_inner;
        d.tentacles.push_back(std::move(t));
    }

    std::vector<NodeId> core_nodes;
    for (NodeId v = 0; v < n; ++v) {
        if (!peeled[v]) core_nodes.push_back(v);
    }
    d.degenerate = core_nodes.empty();
    d.dense_core = induced_subgraph(giant, core_nodes);

    // Fibers: walk degree-2 runs starting from every node of core degree >= 3.
    const Graph& core = d.dense_core.graph;
    std::vector<char> visited(core.node_count(), 0);
    for (NodeId u = 0; u < core.node_count(); ++u) {
        if (core.degree(u) < 3) continue;
        for (NodeId start : core.neighbors(u)) {
            if (core.degree(start) != 2 || visited[start]) continue;
            Fiber f;
            NodeId prev = u;
            NodeId cur = start;
            while (core.degree(cur) == 2) {
                visited[cur] = 1;
                f.inner.push_back(d.dense_core.to_parent[cur]);
                const auto nb = core.neighbors(cur);
                const NodeId next = nb[0] == prev ? nb[1] : nb[0];
                prev = cur;
                cur = next;
            }
            f.first_end = d.dense_core.to_parent[u];
            f.second_end = d.dense_core.to_parent[cur];
            f.same_endpoint = u == cur;
            for (NodeId v : f.inner) d.roles[v] = NodeRole::fiber_inner;
            d.fibers.push_back(std::move(f));
        }
    }
    return d;
}

GeometricFit fit_geometric(const Histogram& h) {
    if (h.empty()) throw PreconditionError("geometric fit of an empty histogram");
    if (*h.min() < 1) throw PreconditionError("geometric fit needs values >= 1");
    GeometricFit fit;
    fit.mean = h.mean();
    fit.p_hat = 1.0 / fit.mean;
    return fit;
}

TentacleDistribution tentacle_histogram(const Decomposition& d) {
    TentacleDistribution out;
    for (const auto& t : d.tentacles) out.hops.add(static_cast<std::int64_t>(t.hops()));
    if (!out.hops.empty()) out.fit = fit_geometric(out.hops);
    return out;
}

FiberDistribution fiber_histogram(const Decomposition& d) {
    FiberDistribution out;
    for (const auto& f : d.fibers) {
        out.inner_nodes.add(static_cast<std::int64_t>(f.inner.size()));
        out.hops.add(static_cast<std::int64_t>(f.hops()));
    }
    if (!out.inner_nodes.empty()) out.fit = fit_geometric(out.inner_nodes);
    return out;
}

// ---------------------------------------------------------------------------

double DepthMap::min_depth() const {
    double m = depths.empty() ? 0.0 : depths.front().value();
    for (const auto& d : depths) m = std::min(m, d.value());
    return m;
}

double DepthMap::max_depth() const {
    double m = depths.empty() ? 0.0 : depths.front().value();
    for (const auto& d : depths) m = std::max(m, d.value());
    return m;
}

DepthMap depth_map(const Graph& core, DepthMode mode) {
    const std::size_t n = core.node_count();
    if (n < 2) throw PreconditionError("depth needs at least two nodes");
    const auto comps = components(core).count();
    if (comps != 1) {
        throw PreconditionError("depth needs a connected dense core; input has " + std::to_string(comps) +
                                " components");
    }

    DepthMap map;
    map.mode = mode;
    map.depths.assign(n, {});
    if (mode.kind == DepthMode::Kind::exact) {
        const auto workers = worker_count(n);
        std::vector<std::vector<Hops>> dist(workers, std::vector<Hops>(n));
        std::vector<std::vector<NodeId>> queues(workers);
        parallel_for(n, workers, [&](std::size_t s, std::size_t w) {
            bfs_into(core, static_cast<NodeId>(s), dist[w], queues[w]);
            std::uint64_t total = 0;
            for (Hops h : dist[w]) total += static_cast<std::uint64_t>(h);
            map.depths[s] = {total, n - 1};
        });
        std::uint64_t grand = 0;
        for (const auto& d : map.depths) grand += d.total;
        map.mean_depth = static_cast<double>(grand) / (static_cast<double>(n) * static_cast<double>(n - 1));
        return map;
    }

    if (mode.anchors == 0) throw ArgumentError("sampled depth needs at least one anchor");
    map.anchors = macro::sample_nodes(n, mode.anchors, mode.seed);
    std::vector<Hops> dist(n);
    std::vector<NodeId> queue;
    for (NodeId a : map.anchors) {
        bfs_into(core, a, dist, queue);
        for (NodeId v = 0; v < n; ++v) {
            if (v == a) continue;
            map.depths[v].total += static_cast<std::uint64_t>(dist[v]);
            map.depths[v].count += 1;
        }
    }
    double sum = 0.0;
    for (const auto& d : map.depths) sum += d.value();
    map.mean_depth = sum / static_cast<double>(n);
    return map;
}

std::vector<ComponentDepth> depth_map_per_component(const Graph& core, DepthMode mode) {
    const auto labeling = components(core);
    std::vector<std::vector<NodeId>> members(labeling.count());
    for (NodeId v = 0; v < core.node_count(); ++v) members[labeling.component_of[v]].push_back(v);
    std::vector<ComponentDepth> out;
    for (const auto& m : members) {
        if (m.size() < 2) continue;
        ComponentDepth cd;
        cd.component = induced_subgraph(core, m);
        cd.depths = depth_map(cd.component.graph, mode);
        out.push_back(std::move(cd));
    }
    return out;
}

std::vector<DepthBin> depth_density_profile(const Graph& core, const DepthMap& depths, double bin_width) {
    if (!(bin_width > 0.0)) throw ArgumentError("depth bin width must be positive");
    if (depths.depths.size() != core.node_count()) {
        throw ArgumentError("depth map does not belong to this graph");
    }
    struct Acc {
        std::size_t count = 0;
        std::uint64_t degree_sum = 0;
        double depth_sum = 0.0;
    };
    std::map<std::int64_t, Acc> bins;
    for (NodeId v = 0; v < core.node_count(); ++v) {
        const double d = depths.depth(v);
        const auto key = static_cast<std::int64_t>(std::floor(d / bin_width + 1e-9));
        auto& acc = bins[key];
        ++acc.count;
        acc.degree_sum += core.degree(v);
        acc.depth_sum += d;
    }
    std::vector<DepthBin> out;
    for (const auto& [key, acc] : bins) {
        const double count = static_cast<double>(acc.count);
        out.push_back({static_cast<double>(key) * bin_width, static_cast<double>(key + 1) * bin_width, acc.count,
                       static_cast<double>(acc.degree_sum) / count, acc.depth_sum / count});
    }
    return out;
}

// ---------------------------------------------------------------------------

const char* to_string(Personality p) {
    switch (p) {
        case Personality::popular: return "Popular";
        case Personality::neutral: return "Neutral";
        case Personality::marginal: return "Marginal";
    }
    return "?";
}

std::uint64_t MixingTable::row_total(Personality row) const {
    const auto& r = counts[static_cast<std::size_t>(row)];
    return r[0] + r[1] + r[2];
}

double MixingTable::fraction(Personality row, Personality column) const {
    const auto total = row_total(row);
    if (total == 0) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(column)]) /
           static_cast<double>(total);
}

std::optional<double> PersonalityReport::marginal_to_popular() const {
    const auto popular = class_counts[static_cast<std::size_t>(Personality::popular)];
    if (popular == 0) return std::nullopt;
    return static_cast<double>(class_counts[static_cast<std::size_t>(Personality::marginal)]) /
           static_cast<double>(popular);
}

PersonalityReport personality_report(const Graph& core, const PersonalityOptions& options) {
    if (!(options.tau >= 0.0)) throw ArgumentError("neutral half-width tau must be >= 0");
    const std::size_t n = core.node_count();
    if (!options.density.empty() && options.density.size() != n) {
        throw ArgumentError("density table size does not match the graph");
    }

    PersonalityReport r;
    r.tau = options.tau;
    r.density.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        r.density[v] = options.density.empty() ? static_cast<double>(core.degree(v)) : options.density[v];
        if (core.degree(v) == 0) {
            throw PreconditionError("node " + core.label(v) + " has an empty first circle");
        }
        if (!(r.density[v] > 0.0)) throw PreconditionError("node " + core.label(v) + " has zero density");
    }

    r.neighbor_density.resize(n);
    r.ratio.resize(n);
    r.personality.resize(n);
    r.classes.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        double sum = 0.0;
        for (NodeId a : core.neighbors(v)) sum += r.density[a];
        r.neighbor_density[v] = sum / static_cast<double>(core.degree(v));
        r.ratio[v] = r.neighbor_density[v] / r.density[v];
        r.personality[v] = std::log10(r.ratio[v]);
        const double pi = r.personality[v];
        r.classes[v] = pi < -r.tau ? Personality::popular : pi > r.tau ? Personality::marginal : Personality::neutral;
        ++r.class_counts[static_cast<std::size_t>(r.classes[v])];
    }
    for (NodeId v = 0; v < n; ++v) {
        auto& row = r.mixing.counts[static_cast<std::size_t>(r.classes[v])];
        for (NodeId a : core.neighbors(v)) ++row[static_cast<std::size_t>(r.classes[a])];
    }
    return r;
}

}  // namespace osn::meso
