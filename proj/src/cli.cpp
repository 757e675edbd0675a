#include "rainbow/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "rainbow/experiments.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/rainbow_check.hpp"
#include "rainbow/thresholds.hpp"
#include "rainbow/tree_grower.hpp"

namespace rainbow {

using nlohmann::json;

namespace {

// Thrown for results that are valid input but have no answer
// (e.g. no palette up to max_colors works).
struct DomainFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json path_json(const Path& p) {
    json out = json::array();
    for (const Vertex& x : p.vertices) out.push_back(to_string(x));
    return out;
}

json edges_json(const BipartiteGraph& g) {
    json out = json::array();
    for (const Edge& e : g.edges()) out.push_back({e.u, e.v});
    return out;
}

json failure_json(const GrowthFailure& f) {
    return {{"level", f.level},
            {"stuck_vertex", to_string(f.stuck_vertex)},
            {"available", f.available},
            {"required", f.required}};
}

json plan_json(const GrowthPlan& plan) {
    return {{"even_branch", plan.even_branch},
            {"odd_branch", plan.odd_branch},
            {"depth", plan.depth},
            {"selection", plan.selection == Selection::Lexicographic ? "lexicographic" : "seeded_random"}};
}

json report_json(const DisjointPathsReport& r) {
    json counts = json::array();
    for (const auto& [top, c] : r.per_vice_tree_counts) counts.push_back({{"top", to_string(top)}, {"count", c}});
    json paths = json::array();
    for (const Path& p : r.extracted_paths) paths.push_back(path_json(p));
    return {{"root", to_string(r.root)},
            {"target", to_string(r.target)},
            {"leaf_neighbor_count", r.leaf_neighbor_count},
            {"per_vice_tree_counts", counts},
            {"paths", paths},
            {"path_count", r.extracted_paths.size()},
            {"params_used", plan_json(r.params_used)}};
}

json regime_json(const RegimeCheck& check) {
    json ineq = json::array();
    for (const auto& i : check.inequalities)
        ineq.push_back({{"name", i.name}, {"lhs", i.lhs}, {"rhs", i.rhs}, {"slack", i.slack}, {"holds", i.holds}});
    return {{"valid", check.valid}, {"inequalities", ineq}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------

struct GenArgs {
    std::size_t m = 0, n = 0;
    double p = 0;
    Seed seed = 1;
    std::string out;
};

void cmd_gen(const GenArgs& a, std::ostream& out) {
    if (!(a.p >= 0.0 && a.p <= 1.0)) throw std::invalid_argument("--p must lie in [0,1]");
    const auto g = sample_gnp(a.m, a.n, a.p, a.seed);
    json j{{"m", a.m}, {"n", a.n}, {"p", a.p}, {"seed", a.seed}, {"edge_count", g.edge_count()}};
    if (a.out.empty()) {
        j["edges"] = edges_json(g);
    } else {
        save_graph(a.out, g);
        j["file"] = a.out;
    }
    emit(out, j);
}

struct ColorArgs {
    std::string graph;
    std::size_t num_colors = 3;
    Seed seed = 1;
    std::string out;
};

void cmd_color(const ColorArgs& a, std::ostream& out) {
    if (a.num_colors == 0) throw std::invalid_argument("--num-colors must be at least 1");
    const auto g = load_graph(a.graph);
    const auto c = random_coloring(g, a.num_colors, a.seed);
    json j{{"num_colors", a.num_colors}, {"seed", a.seed}, {"edge_count", g.edge_count()}};
    if (a.out.empty()) {
        json colored = json::array();
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            colored.push_back({g.edges()[i].u, g.edges()[i].v, c.color_of(i)});
        j["colored_edges"] = colored;
    } else {
        save_coloring(a.out, g, c);
        j["file"] = a.out;
    }
    emit(out, j);
}

struct CheckArgs {
    std::string graph, coloring;
    std::size_t k = 1;
    std::optional<std::size_t> max_len;
    std::optional<std::size_t> num_colors;
};

void cmd_check(const CheckArgs& a, std::ostream& out) {
    const auto g = load_graph(a.graph);
    const auto c = load_coloring(a.coloring, g, a.num_colors);
    const auto v = is_rainbow_k_connected(g, c, a.k, a.max_len);
    json j{{"rainbow_k_connected", v.connected}, {"k", v.k}, {"max_len", v.max_len}};
    if (v.failing_pair) j["failing_pair"] = {to_string(v.failing_pair->first), to_string(v.failing_pair->second)};
    emit(out, j);
}

struct RcArgs {
    std::string graph;
    std::string fixture;
    std::size_t k = 1;
    std::size_t max_colors = 6;
    std::size_t edge_cap = 12;
};

BipartiteGraph fixture_graph(const std::string& name) {
    // P<vertices>, C<length>, K<m>x<n>
    if (name.size() >= 2 && (name[0] == 'P' || name[0] == 'p')) {
        const std::size_t vertices = std::stoul(name.substr(1));
        if (vertices < 2) throw std::invalid_argument("path fixture needs at least two vertices");
        const std::size_t len = vertices - 1;
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < len; ++i)
            edges.push_back(i % 2 == 0 ? Edge{static_cast<std::uint32_t>(i / 2), static_cast<std::uint32_t>(i / 2)}
                                       : Edge{static_cast<std::uint32_t>(i / 2 + 1), static_cast<std::uint32_t>(i / 2)});
        return BipartiteGraph(len / 2 + 1, (len + 1) / 2, std::move(edges));
    }
    if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'c')) {
        const std::size_t len = std::stoul(name.substr(1));
        if (len < 4 || len % 2 == 1) throw std::invalid_argument("cycle fixture needs an even length >= 4");
        return even_cycle(len / 2);
    }
    if (name.size() >= 4 && (name[0] == 'K' || name[0] == 'k')) {
        const auto x = name.find('x');
        if (x == std::string::npos) throw std::invalid_argument("complete fixture is K<m>x<n>");
        return complete_bipartite(std::stoul(name.substr(1, x - 1)), std::stoul(name.substr(x + 1)));
    }
    throw std::invalid_argument("unknown fixture '" + name + "' (P<vertices>, C<length>, K<m>x<n>)");
}

void cmd_rc_exact(const RcArgs& a, std::ostream& out) {
    if (a.graph.empty() == a.fixture.empty()) throw std::invalid_argument("give exactly one of --graph, --fixture");
    const auto g = a.graph.empty() ? fixture_graph(a.fixture) : load_graph(a.graph);
    ExactRcResult r;
    try {
        r = brute_force_rc_k(g, a.k, a.max_colors, a.edge_cap);
    } catch (const std::length_error& e) {
        throw DomainFailure(e.what());
    }
    json j{{"k", a.k}, {"max_colors", a.max_colors}, {"edge_count", g.edge_count()},
           {"colorings_tried", r.colorings_tried}};
    if (!r.rc) {
        j["rc"] = nullptr;
        emit(out, j);
        throw DomainFailure("none <= max_colors");
    }
    j["rc"] = *r.rc;
    json colored = json::array();
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        colored.push_back({g.edges()[i].u, g.edges()[i].v, r.witness->color_of(i)});
    j["witness"] = colored;
    emit(out, j);
}

struct GrowArgs {
    std::string graph;
    std::string root, target;
    std::optional<std::size_t> depth, even_branch, odd_branch;
    bool regime = false;
    std::optional<std::size_t> d;
    std::optional<double> p;
    double c0 = 1.0, epsilon = 0.5;
    Seed seed = 1;
    bool lexicographic = false;
    std::optional<std::size_t> limit;
};

void cmd_grow(const GrowArgs& a, std::ostream& out) {
    const auto g = load_graph(a.graph);
    const Vertex root = parse_vertex(a.root);
    const Vertex target = parse_vertex(a.target);
    const Selection sel = a.lexicographic ? Selection::Lexicographic : Selection::SeededRandom;
    const std::size_t limit = a.limit.value_or(static_cast<std::size_t>(-1));
    if (a.even_branch.has_value() != a.odd_branch.has_value())
        throw std::invalid_argument("--even-branch and --odd-branch go together");

    if (a.regime) {
        if (!a.d || !a.p) throw std::invalid_argument("--regime needs --d and --p");
        if (a.depth) throw std::invalid_argument("--depth is derived under --regime");
        const RegimeParams regime(g.left_size(), g.right_size(), *a.d, a.c0, a.epsilon);
        std::optional<BranchOverride> ov;
        if (a.even_branch) ov = BranchOverride{*a.even_branch, *a.odd_branch};
        const auto o = lemma_paths(g, root, target, regime, *a.p, a.seed, ov, sel, limit);
        json j{{"pair_case", to_string(o.plan.pair_case)},
               {"tree_root", to_string(o.plan.root)},
               {"tree_target", to_string(o.plan.target)},
               {"even_branch_formula", o.plan.even_branch_formula},
               {"odd_branch_formula", o.plan.odd_branch_formula},
               {"overridden", o.plan.overridden},
               {"plan", plan_json(o.plan.plan)},
               {"expected_path_length", o.plan.expected_path_length},
               {"required_paths", o.required_paths},
               {"regime", regime_json(o.regime)},
               {"success", o.succeeded()}};
        if (const auto* r = std::get_if<DisjointPathsReport>(&o.result))
            j["report"] = report_json(*r);
        else
            j["failure"] = failure_json(std::get<GrowthFailure>(o.result));
        emit(out, j);
        return;
    }

    if (!a.depth || !a.even_branch) throw std::invalid_argument("give --depth, --even-branch, --odd-branch or --regime");
    GrowthPlan plan;
    plan.even_branch = *a.even_branch;
    plan.odd_branch = *a.odd_branch;
    plan.depth = *a.depth;
    plan.avoid = {target};
    plan.selection = sel;
    const auto grown = grow_tree(g, root, plan, a.seed);
    json j{{"plan", plan_json(plan)}};
    if (const auto* f = std::get_if<GrowthFailure>(&grown)) {
        j["success"] = false;
        j["failure"] = failure_json(*f);
    } else {
        j["success"] = true;
        j["report"] = report_json(extract_disjoint_paths(g, std::get<GrownTree>(grown), target, limit));
    }
    emit(out, j);
}

struct ThresholdArgs {
    std::size_t m = 0, n = 0, d = 2;
    std::optional<std::size_t> k;
    std::optional<double> p;
    double c0 = 1.0, epsilon = 0.5;
};

void cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
    const RegimeParams regime(a.m, a.n, a.d, a.c0, a.epsilon, a.k);
    const double pstar = regime.threshold();
    const double p = a.p.value_or(pstar);
    json j{{"m", a.m}, {"n", a.n}, {"d", a.d}, {"k", regime.k()}, {"c0", a.c0}, {"epsilon", a.epsilon}};
    j[regime.odd() ? "p1" : "p2"] = pstar;
    j["threshold"] = pstar;
    j["diameter_threshold"] = diameter_threshold(a.m, a.n, a.d);
    j["lower_bound_probability"] = lower_bound_probability(a.m, a.n, a.d);
    j["log_C1"] = regime.log_C1();
    j["log_C2"] = regime.log_C2();
    j["c1"] = regime.c1();
    j["c2"] = regime.c2();
    j["log_upper_probability"] = regime.log_upper_probability();
    j["symbolic_only"] = regime.symbolic_only();
    j["p"] = p;
    if (p >= 0.0) {
        const auto crit = diameter_criterion(a.m, a.n, p, a.d);
        j["diameter_criterion"] = {{"value", crit.value}, {"expected", to_string(crit.expected)}};
        j["regime"] = regime_json(regime_valid(a.m, a.n, p, a.d, a.epsilon));
    }
    const auto q1 = rainbow_success_prob(a.d, a.d + 1);
    const auto q2 = rainbow_success_prob(a.d, a.d);
    j["q1"] = {{"value", q1.value}, {"numerator", q1.numerator.str()}, {"denominator", q1.denominator.str()},
               {"lower_bound", q1.lower_bound}};
    j["q2"] = {{"value", q2.value}, {"numerator", q2.numerator.str()}, {"denominator", q2.denominator.str()},
               {"lower_bound", q2.lower_bound}};
    if (a.d <= 64) {
        const auto fb = per_pair_failure_bound(regime.k(), a.d, a.c0, static_cast<double>(a.n));
        j["failure_bound"] = {{"path_count", fb.path_count},       {"q", fb.q},
                              {"log_bound", fb.log_bound},         {"log_chain_bound", fb.log_chain_bound},
                              {"exponent", fb.exponent},           {"below_n_pow_100", fb.below_n_pow_100}};
    }
    emit(out, j);
}

struct SweepArgs {
    std::string config;
    std::vector<std::string> overrides;  // key=value, applied after the config file
    std::string out;
    bool as_json = false;
    bool verbose = false;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    std::string text = a.config.empty() ? std::string() : read_text(a.config);
    const bool json_config = !text.empty() && text.find_first_not_of(" \t\r\n") != std::string::npos &&
                             text[text.find_first_not_of(" \t\r\n")] == '{';
    if (json_config && !a.overrides.empty()) {
        auto j = json::parse(text);
        for (const auto& kv : a.overrides) {
            const auto eq = kv.find('=');
            j[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        text = j.dump();
    } else {
        for (const auto& kv : a.overrides) text += "\n" + kv;
    }
    const SweepConfig cfg = parse_config(text);

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw std::runtime_error("cannot write '" + a.out + "'");
        write_csv_header(file);
        file.flush();
    }
    const auto result = run_sweep(cfg, [&](const PointResult& pt) {
        if (file.is_open()) {
            write_csv_row(file, cfg, pt);
            file.flush();
        }
        err << "point m=" << pt.m << " n=" << pt.n << " multiplier=" << pt.multiplier << " done\n";
    });
    if (a.as_json)
        emit(out, to_json(result, a.verbose));
    else
        write_csv(out, result);
}

struct CrossingArgs {
    std::string csv;
    std::string measure = "diam_rate";
    double level = 0.5;
};

void cmd_crossing(const CrossingArgs& a, std::ostream& out) {
    std::ifstream in(a.csv);
    if (!in) throw std::runtime_error("cannot open '" + a.csv + "'");
    const auto rows = read_csv(in);
    const Measure measure = parse_measure(a.measure);
    if (measure == Measure::TreePaths) throw std::invalid_argument("crossing needs a rate column");

    // Group rows by (m, n) in first-appearance order.
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    std::vector<std::vector<const CsvRow*>> groups;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.m, r.n);
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) {
            keys.push_back(key);
            groups.emplace_back();
            it = keys.end() - 1;
        }
        groups[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
    }
    json sizes = json::array();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto& g = groups[i];
        std::sort(g.begin(), g.end(), [](const CsvRow* x, const CsvRow* y) { return x->multiplier < y->multiplier; });
        std::vector<double> mult, rate;
        for (const CsvRow* r : g) {
            mult.push_back(r->multiplier);
            rate.push_back(measure == Measure::Diameter ? r->diam_rate : r->rainbow_rate);
        }
        json entry{{"m", keys[i].first}, {"n", keys[i].second}, {"points", g.size()}};
        if (g.size() < 2) {
            entry["crossing"] = nullptr;
        } else if (const auto c = estimate_crossing(mult, rate, a.level)) {
            entry["crossing"] = {{"multiplier", c->multiplier},
                                 {"p", c->multiplier * g.front()->p / g.front()->multiplier},
                                 {"lower_multiplier", mult[c->lower_index]},
                                 {"upper_multiplier", mult[c->upper_index]}};
        } else {
            entry["crossing"] = nullptr;
        }
        if (const auto w = g.size() >= 2 ? transition_width(mult, rate) : std::nullopt)
            entry["width_0.1_0.9"] = *w;
        else
            entry["width_0.1_0.9"] = nullptr;
        sizes.push_back(entry);
    }
    emit(out, {{"measure", to_string(measure)}, {"level", a.level}, {"sizes", sizes}});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random bipartite graphs, rainbow k-connectivity and threshold sweeps", "rainbow"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* sc_gen = app.add_subcommand("gen", "Sample G(m,n,p) and write it as an edge-list file");
    sc_gen->add_option("--m", gen.m, "Size of partite U")->required()->check(CLI::Range(2ul, 1ul << 31));
    sc_gen->add_option("--n", gen.n, "Size of partite V")->required()->check(CLI::Range(2ul, 1ul << 31));
    sc_gen->add_option("--p", gen.p, "Edge probability")->required();
    sc_gen->add_option("--seed", gen.seed, "RNG seed");
    sc_gen->add_option("--out", gen.out, "Graph file to write (edges go to stdout JSON when omitted)");

    ColorArgs color;
    auto* sc_color = app.add_subcommand("color", "Uniform random edge coloring of a graph file");
    sc_color->add_option("--graph", color.graph, "Graph file")->required();
    sc_color->add_option("--num-colors", color.num_colors, "Palette size");
    sc_color->add_option("--seed", color.seed, "RNG seed");
    sc_color->add_option("--out", color.out, "Coloring file to write");

    CheckArgs check;
    auto* sc_check = app.add_subcommand("check", "Decide rainbow k-connectivity of a colored graph");
    sc_check->add_option("--graph", check.graph, "Graph file")->required();
    sc_check->add_option("--coloring", check.coloring, "Coloring file")->required();
    sc_check->add_option("--k", check.k, "Disjoint paths per pair")->check(CLI::PositiveNumber);
    sc_check->add_option("--max-len", check.max_len, "Path length bound (default: unbounded)");
    sc_check->add_option("--num-colors", check.num_colors, "Palette size (default: largest color in the file)");

    RcArgs rc;
    auto* sc_rc = app.add_subcommand("rc-exact", "Exact rc_k of a small graph by exhaustive coloring search");
    sc_rc->add_option("--graph", rc.graph, "Graph file");
    sc_rc->add_option("--fixture", rc.fixture, "Built-in graph: P<vertices>, C<length>, K<m>x<n>");
    sc_rc->add_option("--k", rc.k, "Disjoint paths per pair")->check(CLI::PositiveNumber);
    sc_rc->add_option("--max-colors", rc.max_colors, "Largest palette tried");
    sc_rc->add_option("--edge-cap", rc.edge_cap, "Refuse graphs with more edges");

    GrowArgs grow;
    auto* sc_grow = app.add_subcommand("grow", "Grow an (s,t)-ary tree and extract disjoint paths to a target");
    sc_grow->add_option("--graph", grow.graph, "Graph file")->required();
    sc_grow->add_option("--root", grow.root, "Root vertex, e.g. U0")->required();
    sc_grow->add_option("--target", grow.target, "Target vertex, e.g. U1")->required();
    sc_grow->add_option("--depth", grow.depth, "Tree depth")->check(CLI::PositiveNumber);
    sc_grow->add_option("--even-branch", grow.even_branch, "Children per even-level vertex")->check(CLI::PositiveNumber);
    sc_grow->add_option("--odd-branch", grow.odd_branch, "Children per odd-level vertex")->check(CLI::PositiveNumber);
    sc_grow->add_flag("--regime", grow.regime, "Derive case, depth and branchings from (m, n, d, p)");
    sc_grow->add_option("--d", grow.d, "Length parameter d (with --regime)");
    sc_grow->add_option("--p", grow.p, "Edge probability (with --regime)");
    sc_grow->add_option("--c0", grow.c0, "Constant c0 (with --regime)");
    sc_grow->add_option("--epsilon", grow.epsilon, "Epsilon (with --regime)");
    sc_grow->add_option("--seed", grow.seed, "RNG seed");
    sc_grow->add_flag("--lexicographic", grow.lexicographic, "Take the smallest eligible neighbors");
    sc_grow->add_option("--limit", grow.limit, "Cap on extracted paths");

    ThresholdArgs thr;
    auto* sc_thr = app.add_subcommand("threshold", "Threshold functions, criterion and regime diagnostics");
    sc_thr->add_option("--m", thr.m, "Size of partite U")->required();
    sc_thr->add_option("--n", thr.n, "Size of partite V")->required();
    sc_thr->add_option("--d", thr.d, "Length parameter d");
    sc_thr->add_option("--k", thr.k, "Connectivity k (default max(1, floor(c0 ln n)))");
    sc_thr->add_option("--p", thr.p, "Edge probability for criterion and regime (default: the threshold)");
    sc_thr->add_option("--c0", thr.c0, "Constant c0");
    sc_thr->add_option("--epsilon,--eps", thr.epsilon, "Epsilon");

    SweepArgs sweep;
    auto* sc_sweep = app.add_subcommand("sweep", "Monte Carlo sweep; CSV on stdout");
    sc_sweep->add_option("--config", sweep.config, "Config file (key=value lines or JSON)");
    sc_sweep->add_option("--set", sweep.overrides, "Extra key=value, applied after the config")
        ->each([](const std::string& kv) {
            if (kv.find('=') == std::string::npos) throw CLI::ValidationError("--set", "expected key=value");
        });
    sc_sweep->add_option("--out", sweep.out, "Also write CSV here, one row per finished point");
    sc_sweep->add_flag("--json", sweep.as_json, "Print JSON instead of CSV");
    sc_sweep->add_flag("--verbose", sweep.verbose, "Include per-trial records (with --json)");

    CrossingArgs cross;
    auto* sc_cross = app.add_subcommand("crossing", "Interpolated 0.5-crossing per size from a sweep CSV");
    sc_cross->add_option("--csv", cross.csv, "Sweep CSV")->required();
    sc_cross->add_option("--measure", cross.measure, "diam_rate or rainbow_rate");
    sc_cross->add_option("--level", cross.level, "Rate level")->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 2;
    }

    try {
        if (sc_gen->parsed()) cmd_gen(gen, out);
        else if (sc_color->parsed()) cmd_color(color, out);
        else if (sc_check->parsed()) cmd_check(check, out);
        else if (sc_rc->parsed()) cmd_rc_exact(rc, out);
        else if (sc_grow->parsed()) cmd_grow(grow, out);
        else if (sc_thr->parsed()) cmd_threshold(thr, out);
        else if (sc_sweep->parsed()) cmd_sweep(sweep, out, err);
        else if (sc_cross->parsed()) cmd_crossing(cross, out);
    } catch (const DomainFailure& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace rainbow
