#include "rainbow/rainbow_check.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <stdexcept>

#include "bitrows.hpp"

namespace rainbow {

namespace {

void require_fits(const BipartiteGraph& g, const EdgeColoring& coloring) {
    if (!coloring.fits(g)) throw std::invalid_argument("coloring does not cover the graph's edges");
}

void require_pair(const BipartiteGraph& g, Vertex u, Vertex v) {
    if (!g.contains(u)) throw std::out_of_range("invalid vertex " + to_string(u));
    if (!g.contains(v)) throw std::out_of_range("invalid vertex " + to_string(v));
    if (u == v) throw std::invalid_argument("endpoints must differ");
}

/// Depth-first search over simple rainbow paths from u toward v.
/// on_path is indexed by flat id; used_color by color.
class RainbowDfs {
public:
    RainbowDfs(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u, Vertex v, std::size_t max_len)
        : g_(g),
          coloring_(coloring),
          target_(v),
          limit_(std::min(max_len, coloring.num_colors())),
          dist_to_target_(bfs_distances(g, v)),
          on_path_(g.vertex_count(), 0),
          used_color_(coloring.num_colors() + 1, 0) {
        path_.vertices.push_back(u);
        on_path_[g.flat(u)] = 1;
    }

    /// Calls emit for each rainbow path in lexicographic order; emit returns
    /// false to stop the search.
    void run(const std::function<bool(const Path&)>& emit) {
        emit_ = &emit;
        stopped_ = false;
        if (limit_ >= 1) extend(path_.vertices.front(), 0);
    }

private:
    void extend(Vertex x, std::size_t depth) {
        const Side next_side = opposite(x.side);
        for (auto idx : g_.neighbors(x)) {
            if (stopped_) return;
            const Vertex y{next_side, idx};
            const std::size_t fy = g_.flat(y);
            if (on_path_[fy]) continue;
            const std::uint32_t c = coloring_.color_of(*g_.edge_id(x, y));
            if (used_color_[c]) continue;
            if (y == target_) {
                path_.vertices.push_back(y);
                if (!(*emit_)(path_)) stopped_ = true;
                path_.vertices.pop_back();
                continue;
            }
            const std::size_t dy = dist_to_target_[fy];
            if (dy == kUnreachable || depth + 1 + dy > limit_) continue;
            on_path_[fy] = 1;
            used_color_[c] = 1;
            path_.vertices.push_back(y);
            extend(y, depth + 1);
            path_.vertices.pop_back();
            used_color_[c] = 0;
            on_path_[fy] = 0;
        }
    }

    const BipartiteGraph& g_;
    const EdgeColoring& coloring_;
    Vertex target_;
    std::size_t limit_;
    std::vector<std::size_t> dist_to_target_;
    std::vector<char> on_path_;
    std::vector<char> used_color_;
    Path path_;
    const std::function<bool(const Path&)>* emit_ = nullptr;
    bool stopped_ = false;
};

struct Candidate {
    const Path* path;
    std::vector<std::size_t> internal;  // flat ids
    std::size_t first_hop;              // flat id of second vertex, or npos for a direct edge
    std::size_t last_hop;
};

constexpr std::size_t kDirect = static_cast<std::size_t>(-1);

class DisjointSearch {
public:
    DisjointSearch(const BipartiteGraph& g, std::vector<Candidate> cands, std::size_t k)
        : cands_(std::move(cands)), k_(k), used_(g.vertex_count(), 0) {}

    std::optional<std::vector<std::size_t>> greedy() {
        std::vector<std::size_t> chosen;
        std::vector<char> used(used_.size(), 0);
        for (std::size_t i = 0; i < cands_.size() && chosen.size() < k_; ++i) {
            const auto& in = cands_[i].internal;
            if (std::any_of(in.begin(), in.end(), [&](std::size_t f) { return used[f] != 0; })) continue;
            for (auto f : in) used[f] = 1;
            chosen.push_back(i);
        }
        if (chosen.size() >= k_) return chosen;
        return std::nullopt;
    }

    std::optional<std::vector<std::size_t>> backtrack() {
        chosen_.clear();
        if (search(0)) return chosen_;
        return std::nullopt;
    }

private:
    bool compatible(std::size_t i) const {
        const auto& in = cands_[i].internal;
        return std::none_of(in.begin(), in.end(), [&](std::size_t f) { return used_[f] != 0; });
    }

    bool search(std::size_t start) {
        if (chosen_.size() >= k_) return true;
        std::vector<std::size_t> open;
        std::set<std::size_t> firsts, lasts;
        for (std::size_t i = start; i < cands_.size(); ++i) {
            if (!compatible(i)) continue;
            open.push_back(i);
            firsts.insert(cands_[i].first_hop);
            lasts.insert(cands_[i].last_hop);
        }
        // Any family uses distinct first hops and distinct last hops.
        if (chosen_.size() + std::min(firsts.size(), lasts.size()) < k_) return false;
        for (auto i : open) {
            if (!compatible(i)) continue;
            for (auto f : cands_[i].internal) used_[f] = 1;
            chosen_.push_back(i);
            if (search(i + 1)) return true;
            chosen_.pop_back();
            for (auto f : cands_[i].internal) used_[f] = 0;
        }
        return false;
    }

    std::vector<Candidate> cands_;
    std::size_t k_;
    std::vector<char> used_;
    std::vector<std::size_t> chosen_;
};

std::size_t effective_max_len(const BipartiteGraph& g, std::optional<std::size_t> max_len) {
    return max_len.value_or(g.edge_count());
}

/// All-pairs k = 1 check through (vertex, color set) reachability, one
/// source at a time. A rainbow walk shortcuts to a rainbow simple path, so
/// reachability of t under some color set of size <= L decides the pair.
std::optional<std::pair<Vertex, Vertex>> first_failing_pair_k1(const BipartiteGraph& g,
                                                               const EdgeColoring& coloring, std::size_t max_len) {
    const std::size_t m = g.left_size();
    const std::size_t n = g.right_size();
    const std::size_t colors = coloring.num_colors();
    const std::size_t limit = std::min(max_len, colors);

    // color_rows_u[u*C + c] = neighbors of U_u through color c+1, as bits over V.
    detail::BitRows color_rows_u(m * colors, n), color_rows_v(n * colors, m);
    const auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::size_t c = coloring.color_of(i) - 1;
        color_rows_u.set(edges[i].u * colors + c, edges[i].v);
        color_rows_v.set(edges[i].v * colors + c, edges[i].u);
    }
    const std::size_t max_words = std::max(color_rows_u.words(), color_rows_v.words());
    const std::size_t mask_count = std::size_t{1} << colors;
    std::vector<std::vector<std::uint64_t>> reach(mask_count);
    std::vector<char> touched(mask_count, 0);
    std::vector<std::vector<std::size_t>> layers(limit + 1);
    std::vector<std::uint64_t> cover_u(detail::words_for(m)), cover_v(detail::words_for(n));

    for (std::size_t f = 0; f + 1 < g.vertex_count(); ++f) {
        const Vertex s = g.vertex_at(f);
        for (auto& layer : layers)
            for (auto mask : layer) touched[mask] = 0;
        for (auto& layer : layers) layer.clear();
        std::fill(cover_u.begin(), cover_u.end(), 0);
        std::fill(cover_v.begin(), cover_v.end(), 0);

        reach[0].assign(max_words, 0);
        detail::set_bit(reach[0].data(), s.index);
        touched[0] = 1;
        layers[0].push_back(0);

        Side side = s.side;
        for (std::size_t j = 0; j < limit; ++j) {
            const detail::BitRows& rows = side == Side::U ? color_rows_u : color_rows_v;
            const std::size_t words = rows.words();
            for (std::size_t li = 0; li < layers[j].size(); ++li) {
                const std::size_t mask = layers[j][li];
                detail::for_each_bit(reach[mask].data(), detail::words_for(g.side_size(side)), [&](std::size_t x) {
                    for (std::size_t c = 0; c < colors; ++c) {
                        if (mask & (std::size_t{1} << c)) continue;
                        const std::size_t next = mask | (std::size_t{1} << c);
                        if (!touched[next]) {
                            touched[next] = 1;
                            reach[next].assign(max_words, 0);
                            layers[j + 1].push_back(next);
                        }
                        detail::or_into(reach[next].data(), rows.row(x * colors + c), words);
                    }
                });
            }
            side = opposite(side);
            std::uint64_t* cover = side == Side::U ? cover_u.data() : cover_v.data();
            for (auto mask : layers[j + 1]) detail::or_into(cover, reach[mask].data(), words);
        }

        // Targets after s in flat order: same side with larger index, then (if s in U) all of V.
        const std::uint64_t* same = s.side == Side::U ? cover_u.data() : cover_v.data();
        for (std::size_t t = s.index + 1; t < g.side_size(s.side); ++t)
            if (!detail::test_bit(same, t)) return std::pair{s, Vertex{s.side, static_cast<std::uint32_t>(t)}};
        if (s.side == Side::U)
            for (std::size_t t = 0; t < n; ++t)
                if (!detail::test_bit(cover_v.data(), t))
                    return std::pair{s, Vertex{Side::V, static_cast<std::uint32_t>(t)}};
    }
    return std::nullopt;
}

}  // namespace

bool is_rainbow(const BipartiteGraph& g, const EdgeColoring& coloring, const Path& path) {
    require_fits(g, coloring);
    const auto ids = path_edge_ids(g, path);
    std::vector<std::uint32_t> colors;
    colors.reserve(ids.size());
    for (auto id : ids) colors.push_back(coloring.color_of(id));
    std::sort(colors.begin(), colors.end());
    return std::adjacent_find(colors.begin(), colors.end()) == colors.end();
}

std::vector<Path> enumerate_rainbow_paths(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u, Vertex v,
                                          std::size_t max_len) {
    require_fits(g, coloring);
    require_pair(g, u, v);
    if (max_len == 0) throw std::invalid_argument("max_len must be at least 1");
    std::vector<Path> out;
    RainbowDfs dfs(g, coloring, u, v, max_len);
    dfs.run([&](const Path& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

bool rainbow_path_exists(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u, Vertex v,
                         std::size_t max_len) {
    require_fits(g, coloring);
    require_pair(g, u, v);
    if (max_len == 0) return false;
    bool found = false;
    RainbowDfs dfs(g, coloring, u, v, max_len);
    dfs.run([&](const Path&) {
        found = true;
        return false;
    });
    return found;
}

DisjointSearchResult k_disjoint_rainbow_exists(const BipartiteGraph& g, const EdgeColoring& coloring, Vertex u,
                                               Vertex v, std::size_t k, std::size_t max_len) {
    require_fits(g, coloring);
    require_pair(g, u, v);
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (max_len == 0) return {};

    std::vector<Path> paths = enumerate_rainbow_paths(g, coloring, u, v, max_len);
    if (paths.size() < k) return {};
    std::stable_sort(paths.begin(), paths.end(),
                     [](const Path& a, const Path& b) { return a.length() < b.length(); });

    std::vector<Candidate> cands;
    cands.reserve(paths.size());
    for (const Path& p : paths) {
        Candidate c{&p, {}, kDirect, kDirect};
        for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) c.internal.push_back(g.flat(p.vertices[i]));
        if (!c.internal.empty()) {
            c.first_hop = c.internal.front();
            c.last_hop = c.internal.back();
        }
        cands.push_back(std::move(c));
    }

    DisjointSearch search(g, cands, k);
    auto chosen = search.greedy();
    if (!chosen) chosen = search.backtrack();
    if (!chosen) return {};

    DisjointWitness w{u, v, k, {}};
    for (auto i : *chosen) w.paths.push_back(*cands[i].path);
    return {true, std::move(w)};
}

bool verify_witness(const BipartiteGraph& g, const EdgeColoring& coloring, const DisjointWitness& w,
                    std::optional<std::size_t> max_len) {
    if (w.paths.size() < w.k || w.k == 0) return false;
    std::set<Vertex> internal_seen;
    std::set<Path> distinct;
    for (const Path& p : w.paths) {
        if (!is_valid_path(g, p) || p.length() == 0) return false;
        if (p.front() != w.u || p.back() != w.v) return false;
        if (max_len && p.length() > *max_len) return false;
        if (!is_rainbow(g, coloring, p)) return false;
        if (!distinct.insert(p).second) return false;
        for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i)
            if (!internal_seen.insert(p.vertices[i]).second) return false;
    }
    return true;
}

ConnectivityVerdict is_rainbow_k_connected_pairwise(const BipartiteGraph& g, const EdgeColoring& coloring,
                                                    std::size_t k, std::optional<std::size_t> max_len) {
    require_fits(g, coloring);
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    ConnectivityVerdict verdict{true, k, effective_max_len(g, max_len), std::nullopt};
    for (std::size_t a = 0; a < g.vertex_count(); ++a) {
        for (std::size_t b = a + 1; b < g.vertex_count(); ++b) {
            const Vertex x = g.vertex_at(a);
            const Vertex y = g.vertex_at(b);
            const bool ok = k == 1 ? rainbow_path_exists(g, coloring, x, y, verdict.max_len)
                                   : k_disjoint_rainbow_exists(g, coloring, x, y, k, verdict.max_len).exists;
            if (!ok) {
                verdict.connected = false;
                verdict.failing_pair = std::pair{x, y};
                return verdict;
            }
        }
    }
    return verdict;
}

ConnectivityVerdict is_rainbow_k_connected(const BipartiteGraph& g, const EdgeColoring& coloring, std::size_t k,
                                           std::optional<std::size_t> max_len) {
    require_fits(g, coloring);
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (k == 1 && coloring.num_colors() <= kColorSetLimit) {
        ConnectivityVerdict verdict{true, k, effective_max_len(g, max_len), std::nullopt};
        verdict.failing_pair = first_failing_pair_k1(g, coloring, verdict.max_len);
        verdict.connected = !verdict.failing_pair.has_value();
        return verdict;
    }
    return is_rainbow_k_connected_pairwise(g, coloring, k, max_len);
}

ExactRcResult brute_force_rc_k(const BipartiteGraph& g, std::size_t k, std::size_t max_colors, std::size_t edge_cap) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (max_colors == 0) throw std::invalid_argument("max_colors must be at least 1");
    const std::size_t edges = g.edge_count();
    if (edges > edge_cap)
        throw std::length_error("brute_force_rc_k: " + std::to_string(edges) + " edges exceeds the cap of " +
                                std::to_string(edge_cap));
    ExactRcResult result;
    if (!diameter(g)) return result;

    std::vector<std::uint32_t> colors(edges, 0);
    for (std::size_t palette = 1; palette <= std::min(max_colors, edges); ++palette) {
        std::optional<EdgeColoring> found;
        // Restricted growth strings whose largest color is exactly `palette`.
        std::function<bool(std::size_t, std::uint32_t)> assign = [&](std::size_t i, std::uint32_t highest) -> bool {
            if (edges - i < palette - highest) return false;
            if (i == edges) {
                ++result.colorings_tried;
                EdgeColoring c(palette, colors);
                if (is_rainbow_k_connected(g, c, k, std::nullopt).connected) {
                    found = std::move(c);
                    return true;
                }
                return false;
            }
            const std::uint32_t top = std::min<std::uint32_t>(highest + 1, static_cast<std::uint32_t>(palette));
            for (std::uint32_t c = 1; c <= top; ++c) {
                colors[i] = c;
                if (assign(i + 1, std::max(highest, c))) return true;
            }
            return false;
        };
        if (assign(0, 0)) {
            result.rc = palette;
            result.witness = std::move(found);
            return result;
        }
    }
    return result;
}

}  // namespace rainbow
