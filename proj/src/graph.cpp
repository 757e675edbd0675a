#include "rainbow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bitrows.hpp"

namespace rainbow {

std::string to_string(Vertex v) {
    return (v.side == Side::U ? "U" : "V") + std::to_string(v.index);
}

Vertex parse_vertex(const std::string& text) {
    if (text.size() < 2) throw std::invalid_argument("bad vertex '" + text + "' (expected U<i> or V<j>)");
    Side side;
    switch (text[0]) {
        case 'U': case 'u': side = Side::U; break;
        case 'V': case 'v': side = Side::V; break;
        default: throw std::invalid_argument("bad vertex '" + text + "' (expected U<i> or V<j>)");
    }
    const std::string digits = text.substr(1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument("bad vertex index in '" + text + "'");
    const unsigned long idx = std::stoul(digits);
    if (idx > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("vertex index too large in '" + text + "'");
    return Vertex{side, static_cast<std::uint32_t>(idx)};
}

// ---------------------------------------------------------------------------

BipartiteGraph::BipartiteGraph(std::size_t left_size, std::size_t right_size, std::vector<Edge> edges)
    : left_size_(left_size), right_size_(right_size), edges_(std::move(edges)) {
    if (left_size_ == 0 || right_size_ == 0)
        throw std::invalid_argument("BipartiteGraph: partite sizes must be at least 1");
    if (left_size_ + right_size_ > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("BipartiteGraph: too many vertices");
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.u >= left_size_ || e.v >= right_size_)
            throw std::invalid_argument("BipartiteGraph: edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ") out of range");
        if (i > 0 && edges_[i - 1] == e)
            throw std::invalid_argument("BipartiteGraph: duplicate edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ")");
    }

    const std::size_t total = left_size_ + right_size_;
    std::vector<std::size_t> deg(total, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[left_size_ + e.v];
    }
    offsets_.assign(total + 1, 0);
    for (std::size_t i = 0; i < total; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    targets_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so both directions come out ascending.
    for (const Edge& e : edges_) {
        targets_[fill[e.u]++] = e.v;
        targets_[fill[left_size_ + e.v]++] = e.u;
    }
}

std::span<const std::uint32_t> BipartiteGraph::neighbors(Vertex x) const {
    if (!contains(x)) throw std::out_of_range("invalid vertex " + to_string(x));
    const std::size_t f = flat(x);
    return {targets_.data() + offsets_[f], offsets_[f + 1] - offsets_[f]};
}

std::optional<std::size_t> BipartiteGraph::edge_id(Vertex a, Vertex b) const {
    if (a.side == b.side || !contains(a) || !contains(b)) return std::nullopt;
    const Vertex u = a.side == Side::U ? a : b;
    const Vertex v = a.side == Side::U ? b : a;
    const auto row = neighbors(u);
    const auto it = std::lower_bound(row.begin(), row.end(), v.index);
    if (it == row.end() || *it != v.index) return std::nullopt;
    return offsets_[u.index] + static_cast<std::size_t>(it - row.begin());
}

EdgeColoring::EdgeColoring(std::size_t num_colors, std::vector<std::uint32_t> colors)
    : num_colors_(num_colors), colors_(std::move(colors)) {
    if (num_colors_ == 0) throw std::invalid_argument("EdgeColoring: num_colors must be at least 1");
    for (auto c : colors_)
        if (c < 1 || c > num_colors_)
            throw std::invalid_argument("EdgeColoring: color " + std::to_string(c) + " outside [1," +
                                        std::to_string(num_colors_) + "]");
}

bool is_valid_path(const BipartiteGraph& g, const Path& path) {
    if (path.vertices.empty()) return false;
    for (const Vertex& x : path.vertices)
        if (!g.contains(x)) return false;
    std::vector<Vertex> sorted = path.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 1; i < path.vertices.size(); ++i) {
        if (path.vertices[i].side == path.vertices[i - 1].side) return false;
        if (!g.adjacent(path.vertices[i - 1], path.vertices[i])) return false;
    }
    return true;
}

std::vector<std::size_t> path_edge_ids(const BipartiteGraph& g, const Path& path) {
    std::vector<std::size_t> ids;
    ids.reserve(path.length());
    for (std::size_t i = 1; i < path.vertices.size(); ++i) {
        const auto id = g.edge_id(path.vertices[i - 1], path.vertices[i]);
        if (!id)
            throw std::invalid_argument("path hop " + to_string(path.vertices[i - 1]) + "-" +
                                        to_string(path.vertices[i]) + " is not an edge");
        ids.push_back(*id);
    }
    return ids;
}

// ---------------------------------------------------------------------------

namespace {

void check_sampling_args(std::size_t m, std::size_t n, double p) {
    if (m == 0 || n == 0) throw std::invalid_argument("sample: partite sizes must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample: p must lie in [0,1]");
}

}  // namespace

BipartiteGraph sample_gnp(std::size_t m, std::size_t n, double p, Seed seed) {
    check_sampling_args(m, n, p);
    std::vector<Edge> edges;
    const std::size_t total = m * n;
    if (p >= 1.0) {
        edges.reserve(total);
        for (std::uint32_t u = 0; u < m; ++u)
            for (std::uint32_t v = 0; v < n; ++v) edges.push_back({u, v});
        return BipartiteGraph(m, n, std::move(edges));
    }
    if (p > 0.0) {
        Rng rng(seed);
        const double log_q = std::log1p(-p);
        edges.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.1) + 16);
        // Skip length ~ Geometric(p): floor(log(1-U) / log(1-p)).
        std::size_t idx = 0;
        while (true) {
            const double skip = std::floor(std::log1p(-rng.uniform01()) / log_q);
            if (skip >= static_cast<double>(total - idx)) break;
            idx += static_cast<std::size_t>(skip);
            edges.push_back({static_cast<std::uint32_t>(idx / n), static_cast<std::uint32_t>(idx % n)});
            if (++idx >= total) break;
        }
    }
    return BipartiteGraph(m, n, std::move(edges));
}

EdgeColoring random_coloring(const BipartiteGraph& g, std::size_t num_colors, Seed seed) {
    if (num_colors == 0) throw std::invalid_argument("random_coloring: num_colors must be at least 1");
    Rng rng(seed);
    std::vector<std::uint32_t> colors(g.edge_count());
    for (auto& c : colors) c = static_cast<std::uint32_t>(1 + rng.below(num_colors));
    return EdgeColoring(num_colors, std::move(colors));
}

CoupledDraws sample_coupled_draws(std::size_t m, std::size_t n, std::size_t num_colors,
                                  Seed graph_seed, Seed color_seed) {
    check_sampling_args(m, n, 0.0);
    if (num_colors == 0) throw std::invalid_argument("sample_coupled_draws: num_colors must be at least 1");
    CoupledDraws d{m, n, num_colors, std::vector<double>(m * n), std::vector<std::uint32_t>(m * n)};
    Rng graph_rng(graph_seed);
    Rng color_rng(color_seed);
    for (auto& u : d.uniforms) u = graph_rng.uniform01();
    for (auto& c : d.colors) c = static_cast<std::uint32_t>(1 + color_rng.below(num_colors));
    return d;
}

BipartiteGraph graph_at(const CoupledDraws& draws, double p) {
    check_sampling_args(draws.left_size, draws.right_size, p);
    std::vector<Edge> edges;
    for (std::uint32_t u = 0; u < draws.left_size; ++u)
        for (std::uint32_t v = 0; v < draws.right_size; ++v)
            if (draws.uniforms[u * draws.right_size + v] < p) edges.push_back({u, v});
    return BipartiteGraph(draws.left_size, draws.right_size, std::move(edges));
}

EdgeColoring coloring_from_draws(const CoupledDraws& draws, const BipartiteGraph& g) {
    if (g.left_size() != draws.left_size || g.right_size() != draws.right_size)
        throw std::invalid_argument("coloring_from_draws: graph shape does not match draws");
    std::vector<std::uint32_t> colors;
    colors.reserve(g.edge_count());
    for (const Edge& e : g.edges()) colors.push_back(draws.colors[e.u * draws.right_size + e.v]);
    return EdgeColoring(draws.num_colors, std::move(colors));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> bfs_distances(const BipartiteGraph& g, Vertex source) {
    if (!g.contains(source)) throw std::out_of_range("bfs_distances: invalid vertex " + to_string(source));
    std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
    std::deque<Vertex> queue{source};
    dist[g.flat(source)] = 0;
    while (!queue.empty()) {
        const Vertex x = queue.front();
        queue.pop_front();
        const std::size_t dx = dist[g.flat(x)];
        for (auto idx : g.neighbors(x)) {
            const Vertex y{opposite(x.side), idx};
            auto& dy = dist[g.flat(y)];
            if (dy == kUnreachable) {
                dy = dx + 1;
                queue.push_back(y);
            }
        }
    }
    return dist;
}

std::optional<std::size_t> diameter(const BipartiteGraph& g) {
    const std::size_t m = g.left_size();
    const std::size_t n = g.right_size();
    for (std::size_t f = 0; f < g.vertex_count(); ++f)
        if (g.degree(g.vertex_at(f)) == 0) return std::nullopt;

    // rows_u[i] = N(U_i) as bits over V; rows_v[j] = N(V_j) as bits over U.
    detail::BitRows rows_u(m, n), rows_v(n, m);
    for (const Edge& e : g.edges()) {
        rows_u.set(e.u, e.v);
        rows_v.set(e.v, e.u);
    }

    std::vector<std::uint64_t> seen_u(rows_v.words()), seen_v(rows_u.words());
    std::vector<std::uint64_t> next(std::max(rows_u.words(), rows_v.words()));
    std::vector<std::uint32_t> frontier, fresh;
    std::size_t best = 0;

    for (std::size_t f = 0; f < g.vertex_count(); ++f) {
        const Vertex s = g.vertex_at(f);
        std::fill(seen_u.begin(), seen_u.end(), 0);
        std::fill(seen_v.begin(), seen_v.end(), 0);
        Side side = s.side;
        detail::set_bit(side == Side::U ? seen_u.data() : seen_v.data(), s.index);
        frontier.assign(1, s.index);
        std::size_t reached = 1;
        std::size_t level = 0;
        while (true) {
            const detail::BitRows& rows = side == Side::U ? rows_u : rows_v;
            std::uint64_t* seen_next = side == Side::U ? seen_v.data() : seen_u.data();
            const std::size_t words = rows.words();
            std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(words), 0);
            for (auto x : frontier) detail::or_into(next.data(), rows.row(x), words);
            fresh.clear();
            for (std::size_t w = 0; w < words; ++w) {
                next[w] &= ~seen_next[w];
                seen_next[w] |= next[w];
            }
            detail::for_each_bit(next.data(), words,
                                 [&](std::size_t b) { fresh.push_back(static_cast<std::uint32_t>(b)); });
            if (fresh.empty()) break;
            ++level;
            reached += fresh.size();
            frontier.swap(fresh);
            side = opposite(side);
        }
        if (reached < g.vertex_count()) return std::nullopt;
        best = std::max(best, level);
    }
    return best;
}

std::size_t neighbors_in_set(const BipartiteGraph& g, Vertex u, std::span<const Vertex> s) {
    if (!g.contains(u)) throw std::out_of_range("neighbors_in_set: invalid vertex " + to_string(u));
    std::size_t count = 0;
    for (const Vertex& x : s) {
        if (x.side == u.side)
            throw std::invalid_argument("neighbors_in_set: " + to_string(x) + " lies in the partite of " +
                                        to_string(u));
        if (!g.contains(x)) throw std::out_of_range("neighbors_in_set: invalid vertex " + to_string(x));
        if (g.adjacent(u, x)) ++count;
    }
    return count;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::vector<std::uint64_t> parse_fields(const std::string& text, std::size_t expected, std::size_t line) {
    std::istringstream in(text);
    std::vector<std::uint64_t> out;
    std::string tok;
    while (in >> tok) {
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
            parse_error(line, "expected a non-negative integer, got '" + tok + "'");
        out.push_back(std::stoull(tok));
    }
    if (out.size() != expected)
        parse_error(line, "expected " + std::to_string(expected) + " fields, got " + std::to_string(out.size()));
    return out;
}

}  // namespace

void write_graph(std::ostream& out, const BipartiteGraph& g) {
    out << g.left_size() << ' ' << g.right_size() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

BipartiteGraph read_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::pair<std::size_t, std::size_t>> shape;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto f = parse_fields(line, 2, lineno);
        if (!shape) {
            shape = {f[0], f[1]};
            continue;
        }
        if (f[0] >= shape->first || f[1] >= shape->second) parse_error(lineno, "edge endpoint out of range");
        edges.push_back({static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[1])});
    }
    if (!shape) throw std::runtime_error("graph file is empty (missing 'm n' header)");
    return BipartiteGraph(shape->first, shape->second, std::move(edges));
}

void write_coloring(std::ostream& out, const BipartiteGraph& g, const EdgeColoring& coloring) {
    if (!coloring.fits(g)) throw std::invalid_argument("write_coloring: coloring does not match graph");
    const auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        out << edges[i].u << ' ' << edges[i].v << ' ' << coloring.color_of(i) << '\n';
}

EdgeColoring read_coloring(std::istream& in, const BipartiteGraph& g, std::optional<std::size_t> num_colors) {
    std::vector<std::uint32_t> colors(g.edge_count(), 0);
    std::string line;
    std::size_t lineno = 0;
    std::uint64_t max_color = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto f = parse_fields(line, 3, lineno);
        if (f[0] >= g.left_size() || f[1] >= g.right_size()) parse_error(lineno, "edge endpoint out of range");
        const auto id = g.edge_id({Side::U, static_cast<std::uint32_t>(f[0])},
                                  {Side::V, static_cast<std::uint32_t>(f[1])});
        if (!id) parse_error(lineno, "colored pair is not an edge of the graph");
        if (colors[*id] != 0) parse_error(lineno, "edge colored twice");
        if (f[2] == 0 || f[2] > std::numeric_limits<std::uint32_t>::max()) parse_error(lineno, "color out of range");
        colors[*id] = static_cast<std::uint32_t>(f[2]);
        max_color = std::max(max_color, f[2]);
    }
    for (std::size_t i = 0; i < colors.size(); ++i)
        if (colors[i] == 0) {
            const Edge e = g.edges()[i];
            throw std::runtime_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has no color");
        }
    return EdgeColoring(num_colors.value_or(std::max<std::size_t>(max_color, 1)), std::move(colors));
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

BipartiteGraph load_graph(const std::string& path) {
    auto in = open_in(path);
    try {
        return read_graph(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_graph(const std::string& path, const BipartiteGraph& g) {
    auto out = open_out(path);
    write_graph(out, g);
    if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

EdgeColoring load_coloring(const std::string& path, const BipartiteGraph& g, std::optional<std::size_t> num_colors) {
    auto in = open_in(path);
    try {
        return read_coloring(in, g, num_colors);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_coloring(const std::string& path, const BipartiteGraph& g, const EdgeColoring& coloring) {
    auto out = open_out(path);
    write_coloring(out, g, coloring);
    if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

BipartiteGraph complete_bipartite(std::size_t m, std::size_t n) {
    std::vector<Edge> edges;
    for (std::uint32_t u = 0; u < m; ++u)
        for (std::uint32_t v = 0; v < n; ++v) edges.push_back({u, v});
    return BipartiteGraph(m, n, std::move(edges));
}

BipartiteGraph even_cycle(std::size_t half) {
    if (half < 2) throw std::invalid_argument("even_cycle: need at least 2 vertices per side");
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < half; ++i) {
        edges.push_back({i, i});
        edges.push_back({static_cast<std::uint32_t>((i + 1) % half), i});
    }
    return BipartiteGraph(half, half, std::move(edges));
}

}  // namespace rainbow
