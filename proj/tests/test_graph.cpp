#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "rainbow/graph.hpp"

using namespace rainbow;

namespace {

Vertex U(std::uint32_t i) { return {Side::U, i}; }
Vertex V(std::uint32_t i) { return {Side::V, i}; }

}  // namespace

TEST_CASE("vertex names round-trip") {
    CHECK(to_string(U(3)) == "U3");
    CHECK(parse_vertex("V12") == V(12));
    CHECK(parse_vertex("u0") == U(0));
    CHECK_THROWS_AS(parse_vertex("W1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("U"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("U1x"), std::invalid_argument);
    CHECK(U(5) < V(0));
}

TEST_CASE("construction validates edges") {
    CHECK_THROWS_AS(BipartiteGraph(0, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(BipartiteGraph(2, 2, {{2, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(BipartiteGraph(2, 2, {{0, 1}, {0, 1}}), std::invalid_argument);
    const BipartiteGraph g(2, 3, {{1, 2}, {0, 0}, {1, 0}});
    CHECK(g.edge_count() == 3);
    CHECK(g.edges()[0] == Edge{0, 0});
    CHECK(g.edges()[2] == Edge{1, 2});
    CHECK(g.edge_id(V(2), U(1)) == 2u);
    CHECK_FALSE(g.edge_id(U(0), V(1)).has_value());
    CHECK_FALSE(g.adjacent(U(0), U(1)));
    CHECK(g.degree(V(0)) == 2);
    CHECK_THROWS_AS(g.neighbors(V(3)), std::out_of_range);
}

TEST_CASE("adjacency agrees with the edge set on random graphs") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto g = gen::random_graph(rng, 8, 0.4);
        const auto adj = gen::adjacency(g);
        std::size_t degree_sum = 0;
        for (std::size_t f = 0; f < g.vertex_count(); ++f) {
            const Vertex x = g.vertex_at(f);
            REQUIRE(g.flat(x) == f);
            for (auto idx : g.neighbors(x)) {
                const Vertex y{opposite(x.side), idx};
                REQUIRE(adj[f][g.flat(y)]);
                REQUIRE(g.adjacent(x, y));
            }
            degree_sum += g.degree(x);
        }
        CHECK(degree_sum == 2 * g.edge_count());
    }
}

TEST_CASE("coloring validates range") {
    CHECK_THROWS_AS(EdgeColoring(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(EdgeColoring(2, {1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(EdgeColoring(2, {0}), std::invalid_argument);
    const EdgeColoring c(3, {1, 3, 2});
    CHECK(c.color_of(1) == 3);
    CHECK(c.fits(complete_bipartite(1, 3)));
    CHECK_FALSE(c.fits(complete_bipartite(2, 2)));
}

TEST_CASE("paths") {
    const auto g = even_cycle(3);
    CHECK(is_valid_path(g, Path{{U(0), V(0), U(1)}}));
    CHECK_FALSE(is_valid_path(g, Path{{U(0), V(1)}}));
    CHECK_FALSE(is_valid_path(g, Path{{U(0), V(0), U(0)}}));
    CHECK_FALSE(is_valid_path(g, Path{{U(0), U(1)}}));
    CHECK(path_edge_ids(g, Path{{U(0), V(0), U(1)}}).size() == 2);
    CHECK_THROWS_AS(path_edge_ids(g, Path{{U(0), V(1)}}), std::invalid_argument);
}

TEST_CASE("sample_gnp extremes") {
    CHECK(sample_gnp(3, 3, 1.0, 5).edge_count() == 9);
    CHECK(sample_gnp(3, 3, 1.0, 5) == complete_bipartite(3, 3));
    CHECK(sample_gnp(5, 7, 0.0, 5).edge_count() == 0);
    CHECK_THROWS_AS(sample_gnp(3, 3, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_gnp(3, 3, -0.1, 1), std::invalid_argument);
}

TEST_CASE("sample_gnp is deterministic per seed") {
    CHECK(sample_gnp(40, 30, 0.2, 77) == sample_gnp(40, 30, 0.2, 77));
    CHECK_FALSE(sample_gnp(40, 30, 0.2, 77) == sample_gnp(40, 30, 0.2, 78));
}

TEST_CASE("sample_gnp edge count is Binomial(mn, p)") {
    // m = n = 50, p = 0.3: mean 750, sd sqrt(2500 * 0.21); mean of 10^4 draws
    // has standard error sd / 100.
    const int samples = 10000;
    double sum = 0, sumsq = 0;
    for (int s = 0; s < samples; ++s) {
        const double e = static_cast<double>(sample_gnp(50, 50, 0.3, derive_seed(2024, {std::uint64_t(s)})).edge_count());
        sum += e;
        sumsq += e * e;
    }
    const double mean = sum / samples;
    const double var = sumsq / samples - mean * mean;
    const double sd = std::sqrt(2500 * 0.3 * 0.7);
    CHECK(std::abs(mean - 750.0) < 4 * sd / std::sqrt(double(samples)));
    CHECK(std::abs(std::sqrt(var) - sd) < 0.05 * sd);
}

TEST_CASE("sample_gnp marks each pair independently") {
    // Per-pair inclusion frequency on a small grid.
    const int samples = 20000;
    std::map<std::pair<int, int>, int> hits;
    for (int s = 0; s < samples; ++s) {
        const auto g = sample_gnp(3, 4, 0.25, derive_seed(5, {std::uint64_t(s)}));
        for (const auto& e : g.edges()) ++hits[{e.u, e.v}];
    }
    const double sd = std::sqrt(samples * 0.25 * 0.75);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 4; ++v) CHECK(std::abs(hits[{u, v}] - samples * 0.25) < 5 * sd);
}

TEST_CASE("random_coloring") {
    const auto g = complete_bipartite(4, 4);
    const auto mono = random_coloring(g, 1, 3);
    for (auto c : mono.colors()) CHECK(c == 1);
    CHECK(random_coloring(complete_bipartite(2, 2), 3, 9) == random_coloring(complete_bipartite(2, 2), 3, 9));
    CHECK_THROWS_AS(random_coloring(g, 0, 1), std::invalid_argument);

    // K_{10,10}, 4 colors: each color appears 25 times per graph on average.
    const auto k10 = complete_bipartite(10, 10);
    const int samples = 10000;
    std::vector<double> freq(5, 0.0);
    for (int s = 0; s < samples; ++s) {
        const auto c = random_coloring(k10, 4, derive_seed(8, {std::uint64_t(s)}));
        for (auto x : c.colors()) freq[x] += 1;
    }
    const double sd = std::sqrt(100 * 0.25 * 0.75) / std::sqrt(double(samples));
    for (int c = 1; c <= 4; ++c) CHECK(std::abs(freq[c] / samples - 25.0) < 3 * sd);
}

TEST_CASE("coupled draws nest across p") {
    const auto draws = sample_coupled_draws(20, 15, 3, 1, 2);
    const double ps[] = {0.0, 0.05, 0.1, 0.3, 0.7, 1.0};
    for (std::size_t i = 0; i + 1 < std::size(ps); ++i) {
        const auto lo = graph_at(draws, ps[i]);
        const auto hi = graph_at(draws, ps[i + 1]);
        const auto clo = coloring_from_draws(draws, lo);
        const auto chi = coloring_from_draws(draws, hi);
        for (std::size_t e = 0; e < lo.edge_count(); ++e) {
            const Edge edge = lo.edges()[e];
            const auto id = hi.edge_id(U(edge.u), V(edge.v));
            REQUIRE(id.has_value());
            CHECK(chi.color_of(*id) == clo.color_of(e));
        }
    }
    CHECK(graph_at(draws, 0.0).edge_count() == 0);
    CHECK(graph_at(draws, 1.0).edge_count() == 300);
    CHECK_THROWS_AS(coloring_from_draws(draws, complete_bipartite(3, 3)), std::invalid_argument);
}

TEST_CASE("bfs distances") {
    const auto k33 = complete_bipartite(3, 3);
    const auto d = bfs_distances(k33, U(0));
    CHECK(d[k33.flat(U(0))] == 0);
    CHECK(d[k33.flat(U(2))] == 2);
    for (std::uint32_t j = 0; j < 3; ++j) CHECK(d[k33.flat(V(j))] == 1);

    const BipartiteGraph empty(2, 2, {});
    const auto e = bfs_distances(empty, V(1));
    CHECK(e[empty.flat(V(1))] == 0);
    CHECK(e[empty.flat(U(0))] == kUnreachable);

    const auto c6 = even_cycle(3);
    for (std::size_t f = 0; f < 6; ++f) {
        auto dist = bfs_distances(c6, c6.vertex_at(f));
        std::sort(dist.begin(), dist.end());
        CHECK(dist == std::vector<std::size_t>{0, 1, 1, 2, 2, 3});
    }
}

TEST_CASE("diameter") {
    CHECK(diameter(complete_bipartite(2, 5)) == 2u);
    CHECK(diameter(complete_bipartite(1, 1)) == 1u);
    CHECK(diameter(even_cycle(3)) == 3u);
    CHECK(diameter(even_cycle(5)) == 5u);
    CHECK_FALSE(diameter(BipartiteGraph(2, 2, {{0, 0}, {1, 1}})).has_value());
    CHECK(diameter(BipartiteGraph(2, 2, {{0, 0}, {0, 1}, {1, 0}})) == 3u);
    // isolated vertex
    CHECK_FALSE(diameter(BipartiteGraph(2, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})).has_value());
}

TEST_CASE("diameter matches Floyd-Warshall and BFS parity holds") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
        const auto g = gen::random_graph(rng, 7, t % 2 ? 0.3 : 0.6);
        const auto dist = gen::all_distances(g);
        std::size_t worst = 0;
        for (const auto& row : dist)
            for (auto x : row) worst = std::max(worst, x);
        const auto dia = diameter(g);
        if (worst >= gen::kInf) {
            CHECK_FALSE(dia.has_value());
        } else {
            REQUIRE(dia.has_value());
            CHECK(*dia == worst);
            if (g.vertex_count() > 2) CHECK(*dia >= 2);
        }
        for (std::size_t s = 0; s < g.vertex_count(); ++s) {
            const auto b = bfs_distances(g, g.vertex_at(s));
            for (std::size_t x = 0; x < g.vertex_count(); ++x) {
                if (dist[s][x] >= gen::kInf) {
                    CHECK(b[x] == kUnreachable);
                } else {
                    CHECK(b[x] == dist[s][x]);
                    CHECK((b[x] % 2 == 0) == (g.vertex_at(s).side == g.vertex_at(x).side));
                }
            }
        }
    }
}

TEST_CASE("neighbors_in_set") {
    const auto k34 = complete_bipartite(3, 4);
    const std::vector<Vertex> all_v{V(0), V(1), V(2), V(3)};
    CHECK(neighbors_in_set(k34, U(1), all_v) == 4);
    CHECK(neighbors_in_set(k34, U(1), std::vector<Vertex>{}) == 0);
    const std::vector<Vertex> wrong{U(0)};
    CHECK_THROWS_AS(neighbors_in_set(k34, U(1), wrong), std::invalid_argument);
}

TEST_CASE("neighbors_in_set on G(100,100,0.2) has binomial mean") {
    std::vector<Vertex> s;
    for (std::uint32_t j = 0; j < 50; ++j) s.push_back(V(2 * j));
    const int samples = 2000;
    double sum = 0;
    for (int t = 0; t < samples; ++t)
        sum += double(neighbors_in_set(sample_gnp(100, 100, 0.2, derive_seed(17, {std::uint64_t(t)})), U(7), s));
    const double se = std::sqrt(50 * 0.2 * 0.8 / samples);
    CHECK(std::abs(sum / samples - 10.0) < 3 * se);
}

TEST_CASE("graph and coloring files round-trip") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto inst = gen::random_instance(rng, 6, 5);
        std::stringstream gs, cs;
        write_graph(gs, inst.graph);
        write_coloring(cs, inst.graph, inst.coloring);
        const auto g2 = read_graph(gs);
        CHECK(g2 == inst.graph);
        const auto c2 = read_coloring(cs, g2, inst.coloring.num_colors());
        CHECK(c2 == inst.coloring);
    }
}

TEST_CASE("malformed files name the line") {
    std::istringstream bad_header("3\n");
    CHECK_THROWS_WITH_AS(read_graph(bad_header), doctest::Contains("line 1"), std::runtime_error);
    std::istringstream bad_edge("2 2\n0 0\n0 5\n");
    CHECK_THROWS_WITH_AS(read_graph(bad_edge), doctest::Contains("line 3"), std::runtime_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_graph(empty), std::runtime_error);

    const auto g = complete_bipartite(1, 2);
    std::istringstream missing("0 0 1\n");
    CHECK_THROWS_AS(read_coloring(missing, g), std::runtime_error);
    std::istringstream stray("0 0 1\n0 1 2\n0 3 1\n");
    CHECK_THROWS_WITH_AS(read_coloring(stray, g), doctest::Contains("line 3"), std::runtime_error);
    std::istringstream inferred("0 0 1\n0 1 4\n");
    CHECK(read_coloring(inferred, g).num_colors() == 4);
}
