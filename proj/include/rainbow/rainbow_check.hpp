#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rainbow/graph.hpp"

namespace rainbow {

/// k rainbow u-v paths, pairwise sharing no vertex other than u and v.
struct DisjointWitness {
    Vertex u;
    Vertex v;
    std::size_t k = 0;
    std::vector<Path> paths;
};

/// True iff the colors along the path are pairwise distinct.
/// Throws std::invalid_argument if a hop is not an edge or the coloring does
/// not cover the graph.
bool is_rainbow(const BipartiteGraph& g, const EdgeColoring& coloring, const Path& path);

/// All simple rainbow u-v paths with at most max_len edges, in lexicographic
/// order of their vertex sequences.
std::vector<Path> enumerate_rainbow_paths(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u,
                                          Vertex v, std::size_t max_len);

/// Whether some rainbow u-v path of length <= max_len exists (early exit).
bool rainbow_path_exists(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u, Vertex v,
                         std::size_t max_len);

struct DisjointSearchResult {
    bool exists = false;
    std::optional<DisjointWitness> witness;
};

/// Decides whether k pairwise internally vertex-disjoint rainbow u-v paths of
/// length <= max_len exist. Candidates are ordered by (length, vertex
/// sequence); a greedy pass (the first branch of the search) is tried before
/// backtracking, and branches are cut when the candidates still compatible
/// with the partial family cannot reach k distinct first or last hops.
DisjointSearchResult k_disjoint_rainbow_exists(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u,
                                               Vertex v, std::size_t k, std::size_t max_len);

/// Independent re-check of a witness: each path valid, rainbow, with the
/// right endpoints and length bound, pairwise internally disjoint, and at
/// least k of them.
bool verify_witness(const BipartiteGraph& g, const EdgeColoring& coloring, const DisjointWitness& w,
                    std::optional<std::size_t> max_len = std::nullopt);

struct ConnectivityVerdict {
    bool connected = false;
    std::size_t k = 0;
    std::size_t max_len = 0;  // effective bound
    /// Lexicographically smallest failing pair (a < b), when not connected.
    std::optional<std::pair<Vertex, Vertex>> failing_pair;
};

/// Every unordered vertex pair (same- and cross-partite) joined by k
/// internally disjoint rainbow paths of length <= max_len. nullopt max_len
/// means unbounded (= number of edges).
///
/// For k = 1 with at most kColorSetLimit colors the all-pairs check runs a
/// per-source reachability over (vertex, used color set) states; otherwise
/// each pair is decided individually.
ConnectivityVerdict is_rainbow_k_connected(const BipartiteGraph& g, const EdgeColoring& coloring, std::size_t k,
                                           std::optional<std::size_t> max_len);

/// The per-pair route of is_rainbow_k_connected, with no k = 1 shortcut.
ConnectivityVerdict is_rainbow_k_connected_pairwise(const BipartiteGraph& g, const EdgeColoring& coloring,
                                                    std::size_t k, std::optional<std::size_t> max_len);

inline constexpr std::size_t kColorSetLimit = 12;

struct ExactRcResult {
    std::optional<std::size_t> rc;  // nullopt: none <= max_colors (or disconnected)
    std::optional<EdgeColoring> witness;
    std::size_t colorings_tried = 0;
};

/// Smallest palette size C <= max_colors admitting a C-coloring under which
/// g is rainbow k-connected (paths unbounded). Colorings are enumerated in
/// canonical form: colors introduced in first-use order along edge ids, so
/// edge 0 always has color 1. Throws std::length_error when g has more than
/// edge_cap edges.
ExactRcResult brute_force_rc_k(const BipartiteGraph& g, std::size_t k, std::size_t max_colors,
                               std::size_t edge_cap = 12);

}  // namespace rainbow
