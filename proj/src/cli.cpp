#include "osn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "osn/chebgeo.hpp"
#include "osn/crawlsize.hpp"
#include "osn/error.hpp"
#include "osn/graph.hpp"
#include "osn/histogram.hpp"
#include "osn/macrostats.hpp"
#include "osn/mesotopo.hpp"
#include "osn/report.hpp"
#include "osn/rng.hpp"
#include "osn/roles.hpp"
#include "osn/synthgen.hpp"
#include "osn/text.hpp"

namespace osn::cli {

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("OSN_OUT_DIR"); env && *env) return env;
    return ".";
}

template <typename T>
T parse_number(std::string_view s, const std::string& what) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ArgumentError("bad value '" + std::string(s) + "' for " + what);
    }
    return v;
}

std::vector<std::size_t> parse_size_list(std::string_view s, const std::string& what) {
    std::vector<std::size_t> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) out.push_back(parse_number<std::size_t>(trim(part), what));
    return out;
}

std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& tokens, const std::string& what) {
    std::map<std::string, std::string> kv;
    for (const auto& t : tokens) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ArgumentError(what + " expects key=value tokens, got '" + t + "'");
        kv[t.substr(0, eq)] = t.substr(eq + 1);
    }
    return kv;
}

struct LoadedGraph {
    Graph graph;
    Json info;
};

/// Reads an edge list; with `giant` only its largest component is kept.
LoadedGraph load_graph(const std::string& path, RunOutput& run, bool giant) {
    auto load = load_edge_list_file(path);
    run.add_input(path);
    LoadedGraph lg;
    lg.info["path"] = path;
    lg.info["nodes"] = load.graph.node_count();
    lg.info["edges"] = load.graph.edge_count();
    lg.info["self_loops_dropped"] = load.self_loops_dropped;
    lg.info["duplicates_dropped"] = load.duplicates_dropped;
    if (giant) {
        auto sub = giant_core(load.graph);
        lg.info["giant_core_nodes"] = sub.graph.node_count();
        lg.info["giant_core_edges"] = sub.graph.edge_count();
        lg.graph = std::move(sub.graph);
    } else {
        lg.graph = std::move(load.graph);
    }
    return lg;
}

std::string histogram_text(const Histogram& h, const char* comment) {
    std::ostringstream ss;
    write_two_column(ss, h, comment);
    return ss.str();
}

Json histogram_json(const Histogram& h) {
    Json j = Json::array();
    for (auto [v, c] : h.bins()) j.push_back({v, c});
    return j;
}

std::string edge_text(const Graph& g) {
    std::ostringstream ss;
    write_edge_list(ss, g);
    return ss.str();
}

/// "exact" or "sampled:K"
struct SampledSpec {
    bool sampled = false;
    std::size_t count = 0;
};

SampledSpec parse_mode(const std::string& s, const std::string& what) {
    if (s == "exact") return {};
    if (s.rfind("sampled:", 0) == 0) {
        const auto k = parse_number<std::size_t>(std::string_view(s).substr(8), what);
        if (k == 0) throw ArgumentError(what + " sample count must be >= 1");
        return {true, k};
    }
    throw ArgumentError(what + " must be exact or sampled:K, got '" + s + "'");
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::vector<std::string> appendage;
    std::vector<std::string> double_pareto;
    bool allow_handles = false;
    unsigned simple_retries = 0;
};

void cmd_generate(const GenerateArgs& a, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
    if (a.appendage.empty() == a.double_pareto.empty()) {
        throw ArgumentError("generate needs exactly one of --appendage or --double-pareto");
    }
    RunOutput run(out_dir, "generate");
    run.set_seed(seed);
    Json summary;
    if (!a.appendage.empty()) {
        const auto kv = parse_pairs(a.appendage, "--appendage");
        synth::AppendageSpec spec;
        spec.seed = seed;
        spec.allow_same_endpoint = a.allow_handles;
        for (const auto& [k, v] : kv) {
            if (k == "core") {
                if (v.size() < 2) throw ArgumentError("core must be K<n> or G<n>,<p>");
                if (v[0] == 'K') {
                    spec.core.kind = synth::CoreKind::complete;
                    spec.core.nodes = parse_number<std::size_t>(std::string_view(v).substr(1), "core size");
                } else if (v[0] == 'G') {
                    const auto parts = split(std::string_view(v).substr(1), ',');
                    if (parts.size() != 2) throw ArgumentError("random core must be G<n>,<p>");
                    spec.core.kind = synth::CoreKind::random;
                    spec.core.nodes = parse_number<std::size_t>(parts[0], "core size");
                    spec.core.edge_probability = parse_number<double>(parts[1], "core edge probability");
                } else {
                    throw ArgumentError("core must be K<n> or G<n>,<p>, got '" + v + "'");
                }
            } else if (k == "tentacles") {
                spec.tentacle_lengths = parse_size_list(v, "tentacle length");
            } else if (k == "fibers") {
                spec.fiber_inner_counts = parse_size_list(v, "fiber inner count");
            } else {
                throw ArgumentError("unknown --appendage key '" + k + "'");
            }
        }
        const auto lg = synth::generate_appendage_graph(spec);
        run.config()["appendage"] = a.appendage;
        run.config()["allow_handles"] = a.allow_handles;
        run.write("graph.edges", edge_text(lg.graph));
        std::ostringstream roles;
        write_roles(roles, lg.graph, lg.roles);
        run.write("graph.labels", roles.str());
        summary["kind"] = "appendage";
        summary["nodes"] = lg.graph.node_count();
        summary["edges"] = lg.graph.edge_count();
    } else {
        const auto kv = parse_pairs(a.double_pareto, "--double-pareto");
        synth::DoubleParetoSpec spec;
        spec.seed = seed;
        for (const auto& [k, v] : kv) {
            if (k == "nodes") spec.nodes = parse_number<std::size_t>(v, "nodes");
            else if (k == "a1") spec.left_exponent = parse_number<double>(v, "a1");
            else if (k == "a2") spec.right_exponent = parse_number<double>(v, "a2");
            else if (k == "break") spec.break_degree = parse_number<double>(v, "break");
            else if (k == "min") spec.min_degree = parse_number<std::size_t>(v, "min");
            else if (k == "max") spec.max_degree = parse_number<std::size_t>(v, "max");
            else throw ArgumentError("unknown --double-pareto key '" + k + "'");
        }
        const auto degrees = synth::generate_double_pareto_degrees(spec);
        // Stub matching draws from its own stream so the degree sequence
        // stays reproducible on its own.
        const auto cm = synth::configuration_model(degrees, seed ^ 0x9e3779b97f4a7c15ULL, {a.simple_retries});
        run.config()["double_pareto"] = a.double_pareto;
        run.config()["simple_retries"] = a.simple_retries;
        run.write("graph.edges", edge_text(cm.graph));
        Histogram target;
        for (auto d : degrees) target.add(static_cast<std::int64_t>(d));
        run.write("target_degrees.dat", histogram_text(target, "sampled degree  count"));
        summary["kind"] = "double_pareto";
        summary["nodes"] = cm.graph.node_count();
        summary["edges"] = cm.graph.edge_count();
        summary["erased_self_loops"] = cm.erased_self_loops;
        summary["erased_multi_edges"] = cm.erased_multi_edges;
        summary["attempts"] = cm.attempts;
    }
    run.write_json("generate.json", summary);
    run.commit();
    out << "generate: " << summary["nodes"].get<std::size_t>() << " nodes, " << summary["edges"].get<std::size_t>()
        << " edges -> " << run.dir().string() << "\n";
}

// ---------------------------------------------------------------------------

struct StatsArgs {
    std::string graph;
    bool degrees = false;
    std::optional<std::string> paths;
    std::optional<std::size_t> seniors;
    bool giant = false;
};

void cmd_stats(const StatsArgs& a, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "stats");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    Json report;
    report["graph"] = lg.info;
    run.config()["giant"] = a.giant;

    const bool all = !a.degrees && !a.paths && !a.seniors;
    if (a.degrees || all) {
        const auto h = macro::degree_histogram(g);
        run.write("degrees.dat", histogram_text(h, "degree  node count"));
        Json j;
        j["histogram"] = histogram_json(h);
        try {
            const auto fit = macro::fit_double_pareto(h);
            j["double_pareto"] = {{"left_exponent", fit.left_exponent},   {"right_exponent", fit.right_exponent},
                                  {"break_degree", fit.break_degree},     {"left_sse", fit.left_sse},
                                  {"right_sse", fit.right_sse},           {"fit_min_degree", fit.fit_min_degree},
                                  {"fit_max_degree", fit.fit_max_degree}, {"single_exponent", fit.single_exponent},
                                  {"single_sse", fit.single_sse}};
        } catch (const PreconditionError& e) {
            j["double_pareto"] = nullptr;
            j["double_pareto_skipped"] = e.what();
        }
        report["degrees"] = j;
        run.config()["degrees"] = true;
    }
    if (a.seniors || all) {
        const std::size_t threshold = a.seniors.value_or(25);
        const auto s = macro::senior_stats(g, threshold);
        run.write("seniors.dat", histogram_text(s.senior_neighbor_counts, "senior neighbors  senior count"));
        report["seniors"] = {{"threshold", s.threshold},
                             {"senior_count", s.senior_count},
                             {"senior_fraction", s.senior_fraction},
                             {"without_senior_neighbors", s.without_senior_neighbors},
                             {"mean_senior_neighbors", s.mean_senior_neighbors}};
        run.config()["seniors"] = threshold;
    }
    if (a.paths || all) {
        const auto spec = parse_mode(a.paths.value_or("exact"), "--paths");
        const auto mode = spec.sampled ? macro::PathMode::sampled(spec.count, seed) : macro::PathMode::exact();
        if (spec.sampled) run.set_seed(seed);
        const auto p = macro::path_length_report(g, mode);
        run.write("paths.dat", histogram_text(p.distances, "hops  path count"));
        report["paths"] = {{"mode", spec.sampled ? "sampled" : "exact"},
                           {"sources", spec.sampled ? Json(spec.count) : Json(nullptr)},
                           {"path_count", p.path_count},
                           {"mean", p.mean},
                           {"diameter", p.diameter},
                           {"diameter_is_lower_bound", p.is_estimate()},
                           {"histogram", histogram_json(p.distances)}};
        run.config()["paths"] = a.paths.value_or("exact");
    }
    run.write_json("stats.json", report);
    run.commit();
    if (report.contains("paths")) {
        out << "paths: mean " << report["paths"]["mean"].get<double>() << ", diameter "
            << report["paths"]["diameter"].get<int>() << "\n";
    }
    out << "stats -> " << run.dir().string() << "\n";
}

// ---------------------------------------------------------------------------

struct GraphArgs {
    std::string graph;
    bool giant = false;
};

void cmd_decompose(const GraphArgs& a, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "decompose");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    run.config()["giant"] = a.giant;
    const auto d = meso::decompose(g);
    const auto th = meso::tentacle_histogram(d);
    const auto fh = meso::fiber_histogram(d);

    std::ostringstream roles;
    write_roles(roles, g, d.roles);
    run.write("roles.labels", roles.str());
    run.write("tentacles.dat", histogram_text(th.hops, "tentacle hops  count"));
    run.write("fibers.dat", histogram_text(fh.inner_nodes, "fiber inner nodes  count"));
    run.write("fiber_hops.dat", histogram_text(fh.hops, "fiber hops  count"));
    run.write("dense_core.edges", edge_text(d.dense_core.graph));

    std::array<std::size_t, 4> role_counts{};
    for (auto r : d.roles) ++role_counts[static_cast<std::size_t>(r)];
    auto fit_json = [](const std::optional<meso::GeometricFit>& f) {
        return f ? Json{{"mean", f->mean}, {"p_hat", f->p_hat}} : Json(nullptr);
    };
    std::size_t handles = 0;
    for (const auto& f : d.fibers) handles += f.same_endpoint ? 1 : 0;
    Json report;
    report["graph"] = lg.info;
    report["degenerate"] = d.degenerate;
    report["dense_core_nodes"] = d.dense_core.graph.node_count();
    report["dense_core_edges"] = d.dense_core.graph.edge_count();
    report["dense_core_fraction"] =
        g.node_count() ? static_cast<double>(d.dense_core.graph.node_count()) / static_cast<double>(g.node_count()) : 0.0;
    report["roles"] = {{"core", role_counts[0]},
                       {"tentacle", role_counts[1]},
                       {"loner", role_counts[2]},
                       {"fiber", role_counts[3]}};
    report["tentacles"] = {{"count", d.tentacles.size()},
                           {"nodes", d.tentacle_node_count()},
                           {"geometric_fit", fit_json(th.fit)},
                           {"histogram", histogram_json(th.hops)}};
    report["fibers"] = {{"count", d.fibers.size()},
                        {"handles", handles},
                        {"geometric_fit", fit_json(fh.fit)},
                        {"inner_histogram", histogram_json(fh.inner_nodes)}};
    run.write_json("decompose.json", report);
    run.commit();
    out << "decompose: dense core " << d.dense_core.graph.node_count() << " of " << g.node_count() << " nodes, "
        << d.tentacles.size() << " tentacles, " << d.fibers.size() << " fibers -> " << run.dir().string() << "\n";
}

// ---------------------------------------------------------------------------

struct DepthArgs {
    std::string graph;
    bool giant = false;
    std::string mode = "exact";
    double bin_width = 0.5;
};

void cmd_depth(const DepthArgs& a, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
    if (!(a.bin_width > 0.0)) throw ArgumentError("--bin-width must be positive");
    RunOutput run(out_dir, "depth");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    const auto spec = parse_mode(a.mode, "--mode");
    run.config()["giant"] = a.giant;
    run.config()["mode"] = a.mode;
    run.config()["bin_width"] = a.bin_width;
    if (spec.sampled) run.set_seed(seed);
    const auto dm = meso::depth_map(g, spec.sampled ? meso::DepthMode::sampled(spec.count, seed) : meso::DepthMode::exact());
    const auto profile = meso::depth_density_profile(g, dm, a.bin_width);

    Histogram by_bin;
    std::ostringstream nodes;
    nodes << "node,depth,degree\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const double d = dm.depth(v);
        by_bin.add(static_cast<std::int64_t>(std::floor(d / a.bin_width + 1e-9)));
        nodes << g.label(v) << ',' << format_double(d) << ',' << g.degree(v) << '\n';
    }
    const std::string comment = "depth bin k covers [k*" + format_double(a.bin_width) + ", (k+1)*" +
                                format_double(a.bin_width) + ")  node count";
    run.write("depth.dat", histogram_text(by_bin, comment.c_str()));
    std::ostringstream dens;
    dens << "# depth_lower depth_upper nodes mean_degree mean_depth\n";
    Json bins = Json::array();
    for (const auto& b : profile) {
        dens << format_double(b.lower) << ' ' << format_double(b.upper) << ' ' << b.node_count << ' '
             << format_double(b.mean_density) << ' ' << format_double(b.mean_depth) << '\n';
        bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"nodes", b.node_count},
                        {"mean_degree", b.mean_density}, {"mean_depth", b.mean_depth}});
    }
    run.write("depth_density.dat", dens.str());
    run.write("node_depths.csv", nodes.str());

    Json report;
    report["graph"] = lg.info;
    report["mode"] = spec.sampled ? "sampled" : "exact";
    if (spec.sampled) {
        Json anchors = Json::array();
        for (auto v : dm.anchors) anchors.push_back(g.label(v));
        report["anchors"] = anchors;
    }
    report["mean_depth"] = dm.mean_depth;
    report["min_depth"] = dm.min_depth();
    report["max_depth"] = dm.max_depth();
    report["density_profile"] = bins;
    run.write_json("depth.json", report);
    run.commit();
    out << "depth: mean " << dm.mean_depth << " -> " << run.dir().string() << "\n";
}

// ---------------------------------------------------------------------------

struct PersonalityArgs {
    std::string graph;
    bool giant = false;
    double tau = 0.05;
    double bin_width = 0.05;
    std::string density_graph;
};

void cmd_personality(const PersonalityArgs& a, const std::string& out_dir, std::ostream& out) {
    if (!(a.bin_width > 0.0)) throw ArgumentError("--bin-width must be positive");
    RunOutput run(out_dir, "personality");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    run.config()["giant"] = a.giant;
    run.config()["tau"] = a.tau;
    run.config()["bin_width"] = a.bin_width;
    meso::PersonalityOptions opts;
    opts.tau = a.tau;
    if (!a.density_graph.empty()) {
        // Density read from a larger graph: degree of the same label there.
        const auto outer = load_edge_list_file(a.density_graph).graph;
        run.add_input(a.density_graph);
        run.config()["density_graph"] = a.density_graph;
        opts.density.resize(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const auto w = outer.find_label(g.label(v));
            if (!w) throw ArgumentError("node '" + g.label(v) + "' is missing from the density graph");
            opts.density[v] = static_cast<double>(outer.degree(*w));
        }
    }
    const auto r = meso::personality_report(g, opts);

    Histogram by_bin;
    std::ostringstream nodes;
    nodes << "node,density,first_circle_density,ratio,personality,class\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        by_bin.add(static_cast<std::int64_t>(std::floor(r.personality[v] / a.bin_width + 1e-9)));
        nodes << g.label(v) << ',' << format_double(r.density[v]) << ',' << format_double(r.neighbor_density[v]) << ','
              << format_double(r.ratio[v]) << ',' << format_double(r.personality[v]) << ','
              << meso::to_string(r.classes[v]) << '\n';
    }
    const std::string comment = "personality bin k covers [k*" + format_double(a.bin_width) + ", (k+1)*" +
                                format_double(a.bin_width) + ")  node count";
    run.write("personality.dat", histogram_text(by_bin, comment.c_str()));
    run.write("node_personality.csv", nodes.str());

    const std::array<meso::Personality, 3> order{meso::Personality::popular, meso::Personality::neutral,
                                                 meso::Personality::marginal};
    std::ostringstream mix;
    mix << "class,Popular,Neutral,Marginal\n";
    Json mixing = Json::object();
    for (auto row : order) {
        mix << meso::to_string(row);
        Json jr = Json::object();
        for (auto col : order) {
            const double pct = 100.0 * r.mixing.fraction(row, col);
            mix << ',' << format_fixed(pct, 1);
            jr[meso::to_string(col)] = {{"neighbors", r.mixing.counts[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]},
                                        {"percent", pct}};
        }
        mix << '\n';
        mixing[meso::to_string(row)] = jr;
    }
    run.write("mixing.csv", mix.str());

    Json report;
    report["graph"] = lg.info;
    report["tau"] = r.tau;
    report["class_counts"] = {{"Popular", r.class_counts[0]}, {"Neutral", r.class_counts[1]}, {"Marginal", r.class_counts[2]}};
    const auto ratio = r.marginal_to_popular();
    report["marginal_to_popular"] = ratio ? Json(*ratio) : Json(nullptr);
    report["mixing"] = mixing;
    run.write_json("personality.json", report);
    run.commit();
    out << "personality: " << r.class_counts[0] << " popular, " << r.class_counts[1] << " neutral, "
        << r.class_counts[2] << " marginal -> " << run.dir().string() << "\n";
}

// ---------------------------------------------------------------------------

std::vector<NodeId> read_reference_labels(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::vector<NodeId> refs;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto t = trim(raw);
        if (t.empty() || t.front() == '#') continue;
        const auto id = g.find_label(t);
        if (!id) throw ParseError("unknown node label '" + std::string(t) + "'", line);
        refs.push_back(*id);
    }
    if (refs.empty()) throw ParseError("reference list is empty");
    return refs;
}

struct EmbedArgs {
    std::string graph;
    bool giant = false;
    std::optional<std::string> refs;
    std::string out = "coords.csv";
};

void cmd_embed(const EmbedArgs& a, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "embed");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    run.config()["giant"] = a.giant;
    std::vector<NodeId> refs;
    if (a.refs) {
        refs = read_reference_labels(*a.refs, g);
        run.add_input(*a.refs);
        run.config()["refs"] = *a.refs;
    } else {
        refs.resize(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) refs[v] = v;
    }
    const auto e = cheb::embed(g, refs);
    std::ostringstream csv;
    csv << "node";
    for (auto r : refs) csv << ',' << g.label(r);
    csv << '\n';
    for (NodeId v = 0; v < g.node_count(); ++v) {
        csv << g.label(v);
        for (auto x : e.coordinates(v)) csv << ',' << x;
        csv << '\n';
    }
    run.write(a.out, csv.str());
    Json report;
    report["graph"] = lg.info;
    report["dimension"] = refs.size();
    run.write_json("embed.json", report);
    run.commit();
    out << "embed: " << g.node_count() << " nodes x " << refs.size() << " references -> " << run.dir().string() << "\n";
}

struct ReduceArgs {
    std::string graph;
    bool giant = false;
    double tolerance = 0.0;
    std::uint64_t max_pairs = cheb::ReduceOptions{}.max_pairs;
};

void cmd_reduce(const ReduceArgs& a, const std::string& out_dir, std::ostream& out) {
    if (!(a.tolerance >= 0.0)) throw ArgumentError("--tolerance must be >= 0");
    RunOutput run(out_dir, "reduce");
    const auto lg = load_graph(a.graph, run, a.giant);
    const Graph& g = lg.graph;
    run.config()["giant"] = a.giant;
    run.config()["tolerance"] = a.tolerance;
    run.config()["max_pairs"] = a.max_pairs;
    const std::uint64_t n = g.node_count();
    if (n * (n > 0 ? n - 1 : 0) / 2 > a.max_pairs) {
        throw PreconditionError("graph has " + std::to_string(n * (n - 1) / 2) + " node pairs, above --max-pairs " +
                                std::to_string(a.max_pairs));
    }
    const auto full = cheb::embed_full(g);
    const cheb::CoverMatrix cm(full, a.tolerance);
    const auto r = cheb::reduce_references(cm, {a.max_pairs});

    std::ostringstream kept;
    for (auto v : r.kept) kept << g.label(v) << '\n';
    run.write("kept_refs.txt", kept.str());
    run.write("distortion.dat", histogram_text(r.distortion.hops, "hop distortion  pair count"));
    Json labels = Json::array();
    for (auto v : r.kept) labels.push_back(g.label(v));
    Json report;
    report["graph"] = lg.info;
    report["tolerance"] = r.tolerance;
    report["pairs"] = cm.row_count();
    report["kept"] = labels;
    report["kept_count"] = r.kept.size();
    report["essential_count"] = r.essential_count;
    report["greedy_count"] = r.greedy_count;
    report["verification"] = {{"max_distortion_hops", r.distortion.max_hops},
                              {"max_relative_distortion", r.distortion.max_relative},
                              {"collapsed_pairs", r.distortion.collapsed_pairs},
                              {"within_tolerance", r.verified}};
    run.write_json("reduce.json", report);
    run.commit();
    out << "reduce: kept " << r.kept.size() << " of " << n << " references, max distortion " << r.distortion.max_hops
        << (r.verified ? " (verified)" : " (FAILED verification)") << " -> " << run.dir().string() << "\n";
    if (!r.verified) throw Error("reduction failed its own verification");
}

// ---------------------------------------------------------------------------

struct CrawlArgs {
    std::string graph;
    std::string policy = "fifo";
    std::size_t stride = 1;
    std::optional<std::string> start;
    std::string out = "trace.csv";
};

void cmd_crawl(const CrawlArgs& a, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "crawl-sim");
    const auto lg = load_graph(a.graph, run, false);
    const Graph& g = lg.graph;
    if (g.empty()) throw PreconditionError("cannot crawl an empty graph");
    const auto policy = crawl::parse_policy(a.policy);
    NodeId start;
    if (a.start) {
        const auto id = g.find_label(*a.start);
        if (!id) throw ArgumentError("start node '" + *a.start + "' is not in the graph");
        start = *id;
    } else {
        Rng rng(seed);
        start = static_cast<NodeId>(rng.uniform_index(g.node_count()));
    }
    run.set_seed(seed);
    run.config()["policy"] = crawl::to_string(policy);
    run.config()["stride"] = a.stride;
    run.config()["start"] = g.label(start);
    // Frontier choices draw from a stream separate from the start choice.
    const auto t = crawl::simulate_crawl(g, start, policy, a.stride, seed + 1);
    std::ostringstream csv;
    crawl::write_trace_csv(csv, t);
    run.write(a.out, csv.str());
    run.commit();
    out << "crawl-sim: " << t.samples.size() << " samples, " << *t.true_size << " nodes crawled"
        << (t.partial ? " (start component only)" : "") << " -> " << run.dir().string() << "\n";
}

crawl::CrawlTrace load_trace(const std::string& path, RunOutput& run) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    auto t = crawl::read_trace_csv(in);
    run.add_input(path);
    return t;
}

struct EstimateArgs {
    std::string trace;
    std::optional<std::size_t> window;
    std::size_t min_window = 25;
    double window_fraction = 0.01;
};

void cmd_estimate(const EstimateArgs& a, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "estimate");
    const auto t = load_trace(a.trace, run);
    crawl::WindowPolicy w;
    w.fixed = a.window;
    w.min_samples = a.min_window;
    w.fraction = a.window_fraction;
    run.config()["window"] = a.window ? Json(*a.window) : Json(nullptr);
    run.config()["min_window"] = a.min_window;
    run.config()["window_fraction"] = a.window_fraction;
    const auto e = crawl::estimate_size(t, w);

    std::ostringstream csv;
    crawl::write_estimate_csv(csv, e);
    run.write("estimate.csv", csv.str());
    std::ostringstream dat;
    dat << "# P S_hat\n";
    for (const auto& r : e.rows) dat << r.processed << ' ' << format_double(r.s_hat) << '\n';
    run.write("estimate.dat", dat.str());

    Json report;
    report["samples"] = t.samples.size();
    report["estimated_samples"] = e.rows.size();
    std::size_t clamped = 0;
    for (const auto& r : e.rows) clamped += r.clamped ? 1 : 0;
    report["clamped_samples"] = clamped;
    report["final_s_hat"] = e.rows.empty() ? Json(nullptr) : Json(e.rows.back().s_hat);
    if (t.true_size) {
        const double truth = static_cast<double>(*t.true_size);
        double worst = 0.0;
        bool any = false;
        for (const auto& r : e.rows) {
            if (static_cast<double>(r.processed) < 0.25 * truth) continue;
            any = true;
            worst = std::max(worst, std::abs(r.s_hat - truth) / truth);
        }
        report["true_size"] = *t.true_size;
        report["max_relative_error_from_quarter"] = any ? Json(worst) : Json(nullptr);
    }
    run.write_json("estimate.json", report);
    run.commit();
    out << "estimate: " << e.rows.size() << " estimates -> " << run.dir().string() << "\n";
}

void cmd_fit_rational(const std::string& trace, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "fit-rational");
    const auto t = load_trace(trace, run);
    const auto f = crawl::fit_rational(t);
    std::int64_t dmax = 0;
    std::ostringstream dat;
    dat << "# P D D_fit\n";
    for (const auto& s : t.samples) {
        dmax = std::max(dmax, s.discovered);
        dat << s.processed << ' ' << s.discovered << ' ' << format_double(f(static_cast<double>(s.processed))) << '\n';
    }
    run.write("fit.dat", dat.str());
    Json report;
    report["coefficients"] = {{"a0", f.a0}, {"a1", f.a1}, {"a2", f.a2}, {"a3", f.a3}, {"a4", f.a4}};
    report["rmse"] = f.rmse;
    report["rmse_over_max_d"] = dmax > 0 ? f.rmse / static_cast<double>(dmax) : 0.0;
    report["p_range"] = {f.p_min, f.p_max};
    report["samples"] = f.samples;
    report["rank"] = f.rank;
    run.write_json("fit.json", report);
    run.commit();
    out << "fit-rational: rmse " << f.rmse << " -> " << run.dir().string() << "\n";
}

struct OdeArgs {
    double p0 = 0, d0 = 0, dprime0 = 0, step = 0, pmax = 0;
};

void cmd_solve_ode(const OdeArgs& a, const std::string& out_dir, std::ostream& out) {
    RunOutput run(out_dir, "solve-ode");
    run.config() = {{"p0", a.p0}, {"d0", a.d0}, {"dprime0", a.dprime0}, {"step", a.step}, {"pmax", a.pmax}};
    const auto sol = crawl::solve_acquisition_ode(a.p0, a.d0, a.dprime0, a.step, a.pmax);
    std::ostringstream csv;
    csv << "P,D,dprime,S\n";
    for (const auto& pt : sol.grid) {
        csv << format_double(pt.p) << ',' << format_double(pt.d) << ',' << format_double(pt.dprime) << ','
            << format_double(pt.s) << '\n';
    }
    run.write("ode.csv", csv.str());
    Json report;
    report["points"] = sol.grid.size();
    report["reached_zero"] = sol.reached_zero;
    report["final"] = {{"P", sol.grid.back().p}, {"D", sol.grid.back().d}, {"dprime", sol.grid.back().dprime}};
    report["s_initial"] = sol.grid.front().s;
    report["max_relative_s_drift"] = sol.max_s_drift;
    if (!sol.reached_zero) {
        const auto ref = crawl::refine_step(a.p0, a.d0, a.dprime0, a.step, a.pmax);
        report["step_halving"] = {{"d_end", ref.end_coarse}, {"d_end_half_step", ref.end_fine},
                                  {"relative_change", ref.relative_change}};
    } else {
        report["step_halving"] = nullptr;
    }
    run.write_json("ode.json", report);
    run.commit();
    out << "solve-ode: " << sol.grid.size() << " points, S drift " << sol.max_s_drift << " -> "
        << run.dir().string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"osnscope: structure analysis of online social networks"};
    app.name("osnscope");
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 1;
    app.add_option("--out-dir", out_dir, "Output directory (default: $OSN_OUT_DIR or .)");
    app.add_option("--seed", seed, "Seed for every random choice; recorded in the metadata")->capture_default_str();

    auto add_graph = [](CLI::App* sub, std::string& path, bool& giant) {
        sub->add_option("--graph", path, "Edge list: two labels per line, '#' comments")->required();
        sub->add_flag("--giant", giant, "Analyse only the largest connected component");
    };

    GenerateArgs gen;
    auto* g_gen = app.add_subcommand("generate", "Synthetic graphs with known structure");
    g_gen->add_option("--appendage", gen.appendage,
                      "Core with chains: core=K<n>|G<n>,<p> tentacles=L1,L2,.. fibers=I1,I2,..")
        ->expected(1, -1);
    g_gen->add_option("--double-pareto", gen.double_pareto,
                      "Erased configuration model: nodes=N a1=A a2=B break=X min=M [max=K]")
        ->expected(1, -1);
    g_gen->add_flag("--allow-handles", gen.allow_handles, "Fibers may start and end on the same core node");
    g_gen->add_option("--simple-retries", gen.simple_retries, "Redraw non-simple stub matchings up to N times");

    StatsArgs st;
    auto* g_stats = app.add_subcommand("stats", "Degree distribution, senior cohort and path lengths");
    add_graph(g_stats, st.graph, st.giant);
    g_stats->add_flag("--degrees", st.degrees, "Degree histogram with a double-Pareto fit (log-log degree plot)");
    g_stats->add_option("--paths", st.paths, "exact | sampled:K  hop-count distribution and diameter");
    g_stats->add_option("--seniors", st.seniors, "Degree threshold of the senior cohort (default 25)");

    GraphArgs dec;
    auto* g_dec = app.add_subcommand("decompose", "Tentacles, fibers and the dense core; chain length histograms");
    add_graph(g_dec, dec.graph, dec.giant);

    DepthArgs dep;
    auto* g_dep = app.add_subcommand("depth", "Mean distance of each node to the rest; density against depth");
    add_graph(g_dep, dep.graph, dep.giant);
    g_dep->add_option("--mode", dep.mode, "exact | sampled:K anchors")->capture_default_str();
    g_dep->add_option("--bin-width", dep.bin_width, "Depth bin width for the histogram and density profile")
        ->capture_default_str();

    PersonalityArgs per;
    auto* g_per = app.add_subcommand("personality", "log10 of first-circle density over own density; mixing table");
    add_graph(g_per, per.graph, per.giant);
    g_per->add_option("--tau", per.tau, "Neutral band half-width on the log10 scale")->capture_default_str();
    g_per->add_option("--bin-width", per.bin_width, "Bin width of the personality histogram")->capture_default_str();
    g_per->add_option("--density-graph", per.density_graph,
                      "Take each node's density as its degree in this larger edge list");

    EmbedArgs emb;
    auto* g_emb = app.add_subcommand("embed", "Hop-distance coordinates relative to reference nodes");
    add_graph(g_emb, emb.graph, emb.giant);
    g_emb->add_option("--refs", emb.refs, "File with one reference label per line (default: every node)");
    g_emb->add_option("--out", emb.out, "Coordinates file name inside the output directory")->capture_default_str();

    ReduceArgs red;
    auto* g_red = app.add_subcommand("reduce", "Fewest references keeping every distance within T hops");
    add_graph(g_red, red.graph, red.giant);
    g_red->add_option("--tolerance", red.tolerance, "Allowed hop distortion T")->capture_default_str();
    g_red->add_option("--max-pairs", red.max_pairs, "Refuse graphs with more node pairs than this")
        ->capture_default_str();

    CrawlArgs cr;
    auto* g_cr = app.add_subcommand("crawl-sim", "Simulated frontier crawl recording processed and discovered counts");
    g_cr->add_option("--graph", cr.graph, "Edge list to crawl")->required();
    g_cr->add_option("--policy", cr.policy, "fifo | random")->capture_default_str();
    g_cr->add_option("--stride", cr.stride, "Record every N processed nodes")->capture_default_str();
    g_cr->add_option("--start", cr.start, "Start label (default: drawn from the seed)");
    g_cr->add_option("--out", cr.out, "Trace file name inside the output directory")->capture_default_str();

    EstimateArgs est;
    auto* g_est = app.add_subcommand("estimate", "Online network size estimate from a crawl trace");
    g_est->add_option("--trace", est.trace, "Trace CSV from crawl-sim")->required();
    g_est->add_option("--window", est.window, "Fixed smoothing window in samples");
    g_est->add_option("--min-window", est.min_window, "Smallest adaptive window in samples")->capture_default_str();
    g_est->add_option("--window-fraction", est.window_fraction, "Adaptive window as a fraction of the sample count")
        ->capture_default_str();

    std::string fit_trace;
    auto* g_fit = app.add_subcommand("fit-rational", "Fractional-rational fit of D against P");
    g_fit->add_option("--trace", fit_trace, "Trace CSV from crawl-sim")->required();

    OdeArgs ode;
    auto* g_ode = app.add_subcommand("solve-ode", "Integrate D D'' + (D' + 1)^2 = 0 (acquisition curve)");
    g_ode->add_option("--p0", ode.p0, "Initial P")->required();
    g_ode->add_option("--d0", ode.d0, "Initial D (> 0)")->required();
    g_ode->add_option("--dprime0", ode.dprime0, "Initial dD/dP")->required();
    g_ode->add_option("--step", ode.step, "Fixed step in P")->required();
    g_ode->add_option("--pmax", ode.pmax, "Final P")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "osnscope: " << e.what() << "\n";
        return 1;
    }

    try {
        if (g_gen->parsed()) cmd_generate(gen, seed, out_dir, out);
        else if (g_stats->parsed()) cmd_stats(st, seed, out_dir, out);
        else if (g_dec->parsed()) cmd_decompose(dec, out_dir, out);
        else if (g_dep->parsed()) cmd_depth(dep, seed, out_dir, out);
        else if (g_per->parsed()) cmd_personality(per, out_dir, out);
        else if (g_emb->parsed()) cmd_embed(emb, out_dir, out);
        else if (g_red->parsed()) cmd_reduce(red, out_dir, out);
        else if (g_cr->parsed()) cmd_crawl(cr, seed, out_dir, out);
        else if (g_est->parsed()) cmd_estimate(est, out_dir, out);
        else if (g_fit->parsed()) cmd_fit_rational(fit_trace, out_dir, out);
        else if (g_ode->parsed()) cmd_solve_ode(ode, out_dir, out);
    } catch (const PreconditionError& e) {
        err << "osnscope: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "osnscope: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace osn::cli
