#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rainbow/random.hpp"

namespace rainbow {

enum class Side : std::uint8_t { U = 0, V = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::U ? Side::V : Side::U; }

/// A vertex is identified by its partite and its index within that partite.
/// Ordering is all of U (by index) before all of V.
struct Vertex {
    Side side = Side::U;
    std::uint32_t index = 0;

    auto operator<=>(const Vertex&) const = default;
};

std::string to_string(Vertex v);
/// Parses "U3" / "V0" (case-insensitive side letter).
Vertex parse_vertex(const std::string& text);

/// A cross edge: u indexes U, v indexes V.
struct Edge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Immutable bipartite graph with partites U (size m) and V (size n).
///
/// Edges are stored sorted by (u, v), so the edges of a U-vertex form a
/// contiguous run; edge ids are positions in that order.
class BipartiteGraph {
public:
    /// Throws std::invalid_argument on an empty partite, an out-of-range
    /// endpoint, or a duplicate edge.
    BipartiteGraph(std::size_t left_size, std::size_t right_size, std::vector<Edge> edges);

    std::size_t left_size() const noexcept { return left_size_; }
    std::size_t right_size() const noexcept { return right_size_; }
    std::size_t side_size(Side s) const noexcept { return s == Side::U ? left_size_ : right_size_; }
    std::size_t vertex_count() const noexcept { return left_size_ + right_size_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    bool contains(Vertex x) const noexcept { return x.index < side_size(x.side); }

    /// Indices (into the opposite partite), ascending.
    std::span<const std::uint32_t> neighbors(Vertex x) const;
    std::size_t degree(Vertex x) const { return neighbors(x).size(); }

    /// Edge id of the edge joining a and b, if present. Order of a, b is free.
    std::optional<std::size_t> edge_id(Vertex a, Vertex b) const;
    bool adjacent(Vertex a, Vertex b) const { return edge_id(a, b).has_value(); }

    /// Dense numbering: U-vertices 0..m-1, then V-vertices m..m+n-1.
    /// Consistent with Vertex ordering.
    std::size_t flat(Vertex x) const noexcept {
        return x.side == Side::U ? x.index : left_size_ + x.index;
    }
    Vertex vertex_at(std::size_t flat_id) const noexcept {
        return flat_id < left_size_ ? Vertex{Side::U, static_cast<std::uint32_t>(flat_id)}
                                    : Vertex{Side::V, static_cast<std::uint32_t>(flat_id - left_size_)};
    }

    friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
        return a.left_size_ == b.left_size_ && a.right_size_ == b.right_size_ && a.edges_ == b.edges_;
    }

private:
    std::size_t left_size_;
    std::size_t right_size_;
    std::vector<Edge> edges_;
    // CSR adjacency over flat ids.
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
};

/// Colors in [1, num_colors], indexed by edge id of the associated graph.
class EdgeColoring {
public:
    EdgeColoring(std::size_t num_colors, std::vector<std::uint32_t> colors);

    std::size_t num_colors() const noexcept { return num_colors_; }
    std::size_t size() const noexcept { return colors_.size(); }
    std::uint32_t color_of(std::size_t edge_id) const { return colors_.at(edge_id); }
    std::span<const std::uint32_t> colors() const noexcept { return colors_; }

    /// True when this coloring covers exactly the edges of g.
    bool fits(const BipartiteGraph& g) const noexcept { return colors_.size() == g.edge_count(); }

    friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

private:
    std::size_t num_colors_;
    std::vector<std::uint32_t> colors_;
};

struct Path {
    std::vector<Vertex> vertices;

    std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }

    auto operator<=>(const Path&) const = default;
};

/// Simple, side-alternating, and every hop an edge of g.
bool is_valid_path(const BipartiteGraph& g, const Path& path);

/// Edge ids along a path; throws std::invalid_argument if a hop is not an edge.
std::vector<std::size_t> path_edge_ids(const BipartiteGraph& g, const Path& path);

// ---------------------------------------------------------------------------
// Sampling

/// G(m, n, p). Uses geometric skipping over the m*n potential pairs in
/// row-major order, which is the canonical per-seed output.
BipartiteGraph sample_gnp(std::size_t m, std::size_t n, double p, Seed seed);

/// Uniform independent colors in [1, num_colors] for each edge, in edge-id order.
EdgeColoring random_coloring(const BipartiteGraph& g, std::size_t num_colors, Seed seed);

/// One uniform and one color per potential pair (row-major). Restricting to
/// {pairs with uniform < p} gives nested graphs over p with consistent colors.
struct CoupledDraws {
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    std::size_t num_colors = 0;
    std::vector<double> uniforms;
    std::vector<std::uint32_t> colors;
};

CoupledDraws sample_coupled_draws(std::size_t m, std::size_t n, std::size_t num_colors,
                                  Seed graph_seed, Seed color_seed);
BipartiteGraph graph_at(const CoupledDraws& draws, double p);
EdgeColoring coloring_from_draws(const CoupledDraws& draws, const BipartiteGraph& g);

// ---------------------------------------------------------------------------
// Distances

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop distances from source, indexed by flat id; kUnreachable when disconnected.
std::vector<std::size_t> bfs_distances(const BipartiteGraph& g, Vertex source);

/// Exact diameter; nullopt means infinite (disconnected graph).
std::optional<std::size_t> diameter(const BipartiteGraph& g);

/// |N(u) ∩ s|. Every vertex of s must lie in the partite opposite to u.
std::size_t neighbors_in_set(const BipartiteGraph& g, Vertex u, std::span<const Vertex> s);

// ---------------------------------------------------------------------------
// Text formats: graph = "m n" then "u v" per edge; coloring = "u v c" per edge.

void write_graph(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph read_graph(std::istream& in);

void write_coloring(std::ostream& out, const BipartiteGraph& g, const EdgeColoring& coloring);
/// num_colors defaults to the largest color present.
EdgeColoring read_coloring(std::istream& in, const BipartiteGraph& g,
                           std::optional<std::size_t> num_colors = std::nullopt);

BipartiteGraph load_graph(const std::string& path);
void save_graph(const std::string& path, const BipartiteGraph& g);
EdgeColoring load_coloring(const std::string& path, const BipartiteGraph& g,
                           std::optional<std::size_t> num_colors = std::nullopt);
void save_coloring(const std::string& path, const BipartiteGraph& g, const EdgeColoring& coloring);

// Small fixtures used by tests and the CLI.
BipartiteGraph complete_bipartite(std::size_t m, std::size_t n);
/// Even cycle of length 2*half as a bipartite graph: U_i - V_i - U_{i+1}.
BipartiteGraph even_cycle(std::size_t half);

}  // namespace rainbow
