#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "rainbow/tree_grower.hpp"
#include "tree_checker.hpp"

using namespace rainbow;

namespace {

Vertex U(std::uint32_t i) { return {Side::U, i}; }
Vertex V(std::uint32_t i) { return {Side::V, i}; }

GrowthPlan plan_of(std::size_t s, std::size_t t, std::size_t depth, std::vector<Vertex> avoid,
                   Selection sel = Selection::SeededRandom) {
    GrowthPlan p;
    p.even_branch = s;
    p.odd_branch = t;
    p.depth = depth;
    p.avoid = std::move(avoid);
    p.selection = sel;
    return p;
}

void check_tree_invariants(const BipartiteGraph& g, const GrownTree& tree) {
    REQUIRE(tree.levels.size() == tree.plan.depth + 1);
    CHECK(tree.levels[0] == std::vector<Vertex>{tree.root});
    std::set<Vertex> seen;
    for (std::size_t i = 0; i < tree.levels.size(); ++i) {
        if (i > 0) CHECK(tree.levels[i].size() == tree.levels[i - 1].size() * tree.plan.branch_at(i - 1));
        for (const Vertex& x : tree.levels[i]) {
            CHECK(x.side == (i % 2 == 0 ? tree.root.side : opposite(tree.root.side)));
            CHECK(seen.insert(x).second);
            CHECK(std::find(tree.plan.avoid.begin(), tree.plan.avoid.end(), x) == tree.plan.avoid.end());
            if (i > 0) {
                const Vertex parent = tree.parent.at(x);
                CHECK(std::find(tree.levels[i - 1].begin(), tree.levels[i - 1].end(), parent) !=
                      tree.levels[i - 1].end());
                CHECK(check::has_edge(g, x, parent));
            }
        }
    }
    CHECK(tree.size() <= (tree.depth() + 1) * tree.leaves().size());
}

}  // namespace

TEST_CASE("K_{6,3} grows levels 1, 2, 4") {
    const auto g = complete_bipartite(6, 3);
    for (Seed s = 1; s <= 20; ++s) {
        const auto out = grow_tree(g, U(0), plan_of(2, 2, 2, {U(1)}), s);
        REQUIRE(std::holds_alternative<GrownTree>(out));
        const auto& tree = std::get<GrownTree>(out);
        CHECK(tree.levels[1].size() == 2);
        CHECK(tree.levels[2].size() == 4);
        check_tree_invariants(g, tree);

        const auto parts = vice_trees(tree);
        REQUIRE(parts.size() == 2);
        std::set<Vertex> covered;
        for (const auto& part : parts) {
            CHECK(part.leaves.size() == 2);
            for (const auto& leaf : part.leaves) CHECK(covered.insert(leaf).second);
        }
        CHECK(covered == std::set<Vertex>(tree.leaves().begin(), tree.leaves().end()));
    }
}

TEST_CASE("K_{2,2} fails at level 2") {
    const auto out = grow_tree(complete_bipartite(2, 2), U(0), plan_of(2, 2, 2, {U(1)}), 1);
    REQUIRE(std::holds_alternative<GrowthFailure>(out));
    const auto f = std::get<GrowthFailure>(out);
    CHECK(f.level == 2);
    CHECK(f.available == 0);
    CHECK(f.required == 2);
    CHECK(f.stuck_vertex.side == Side::V);
}

TEST_CASE("depth-1 trees") {
    const auto g = complete_bipartite(4, 7);
    for (std::size_t j = 1; j <= 7; ++j) {
        const auto out = grow_tree(g, U(2), plan_of(j, 1, 1, {}), j);
        REQUIRE(std::holds_alternative<GrownTree>(out));
        const auto& tree = std::get<GrownTree>(out);
        CHECK(tree.levels[1].size() == j);
        for (const auto& x : tree.levels[1]) CHECK(x.side == Side::V);
        const auto parts = vice_trees(tree);
        CHECK(parts.size() == j);
        for (const auto& part : parts) CHECK(part.leaves == std::vector<Vertex>{part.top});
    }
    CHECK(std::holds_alternative<GrowthFailure>(grow_tree(g, U(2), plan_of(8, 1, 1, {}), 1)));
}

TEST_CASE("grow_tree rejects invalid plans") {
    const auto g = complete_bipartite(3, 3);
    CHECK_THROWS_AS(grow_tree(g, U(0), plan_of(0, 1, 1, {}), 1), std::invalid_argument);
    CHECK_THROWS_AS(grow_tree(g, U(0), plan_of(1, 0, 1, {}), 1), std::invalid_argument);
    CHECK_THROWS_AS(grow_tree(g, U(0), plan_of(1, 1, 0, {}), 1), std::invalid_argument);
    CHECK_THROWS_AS(grow_tree(g, U(0), plan_of(1, 1, 1, {U(0)}), 1), std::invalid_argument);
    CHECK_THROWS_AS(grow_tree(g, U(5), plan_of(1, 1, 1, {}), 1), std::invalid_argument);
    CHECK_THROWS_AS(grow_tree(g, U(0), plan_of(1, 1, 1, {V(3)}), 1), std::invalid_argument);
}

TEST_CASE("lexicographic selection is deterministic and takes the smallest") {
    const auto g = complete_bipartite(6, 5);
    const auto a = std::get<GrownTree>(grow_tree(g, U(0), plan_of(2, 2, 2, {U(1)}, Selection::Lexicographic), 1));
    const auto b = std::get<GrownTree>(grow_tree(g, U(0), plan_of(2, 2, 2, {U(1)}, Selection::Lexicographic), 99));
    CHECK(a.levels == b.levels);
    CHECK(a.levels[1] == std::vector<Vertex>{V(0), V(1)});
    CHECK(a.levels[2] == std::vector<Vertex>{U(2), U(3), U(4), U(5)});
}

TEST_CASE("seeded selection is uniform without replacement") {
    const auto g = complete_bipartite(1, 5);
    std::map<std::uint32_t, int> hits;
    const int runs = 20000;
    for (int s = 0; s < runs; ++s) {
        const auto tree = std::get<GrownTree>(grow_tree(g, U(0), plan_of(2, 1, 1, {}), derive_seed(3, {std::uint64_t(s)})));
        CHECK(tree.levels[1][0] != tree.levels[1][1]);
        for (const auto& x : tree.levels[1]) ++hits[x.index];
    }
    const double expect = runs * 2.0 / 5;
    const double sd = std::sqrt(runs * 0.4 * 0.6);
    for (std::uint32_t j = 0; j < 5; ++j) CHECK(std::abs(hits[j] - expect) < 5 * sd);
}

TEST_CASE("extract_disjoint_paths") {
    const auto g = complete_bipartite(6, 3);
    const auto tree = std::get<GrownTree>(grow_tree(g, U(0), plan_of(2, 1, 1, {U(1)}), 4));
    const auto r = extract_disjoint_paths(g, tree, U(1));
    CHECK(r.extracted_paths.size() == 2);
    CHECK(r.leaf_neighbor_count == 2);
    for (const auto& p : r.extracted_paths) CHECK(p.length() == 2);
    CHECK(check::report_problem(g, r, 1).empty());
    CHECK(extract_disjoint_paths(g, tree, U(1), 1).extracted_paths.size() == 1);

    // No neighbor of the target among the leaves.
    const BipartiteGraph sparse(3, 2, {{0, 0}, {0, 1}, {2, 0}});
    const auto t2 = std::get<GrownTree>(grow_tree(sparse, U(0), plan_of(1, 1, 1, {U(1)}, Selection::Lexicographic), 1));
    const auto none = extract_disjoint_paths(sparse, t2, U(1));
    CHECK(none.extracted_paths.empty());
    CHECK(none.leaf_neighbor_count == 0);

    CHECK_THROWS_AS(extract_disjoint_paths(g, tree, tree.levels[1][0]), std::invalid_argument);
    CHECK_THROWS_AS(extract_disjoint_paths(g, tree, V(0) == tree.levels[1][0] ? V(2) : V(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_disjoint_paths(g, tree, U(0)), std::invalid_argument);
}

TEST_CASE("one path per vice-tree even with several neighbor leaves") {
    const auto g = complete_bipartite(8, 8);
    const auto tree = std::get<GrownTree>(grow_tree(g, U(0), plan_of(2, 3, 2, {V(7)}), 5));
    const auto r = extract_disjoint_paths(g, tree, V(7));
    CHECK(r.leaf_neighbor_count == 6);
    CHECK(r.extracted_paths.size() == 2);
    CHECK(check::report_problem(g, r, 2).empty());
}

TEST_CASE("lemma_plan dispatch") {
    const double p = 0.5;
    const RegimeParams odd(50, 60, 3);
    const RegimeParams even(50, 60, 2);
    struct Row {
        const RegimeParams* r;
        Vertex a, b;
        PairCase c;
        Vertex root;
        std::size_t depth, length;
    };
    const Row rows[] = {
        {&odd, U(0), U(1), PairCase::SameLeftOddD, U(0), 3, 4},
        {&odd, V(3), V(1), PairCase::SameRightOddD, V(3), 3, 4},
        {&odd, V(2), U(5), PairCase::CrossOddD, U(5), 2, 3},
        {&even, U(0), U(1), PairCase::SameLeftEvenD, U(0), 1, 2},
        {&even, V(4), V(0), PairCase::SameRightEvenD, V(4), 1, 2},
        {&even, U(1), V(2), PairCase::CrossEvenD, V(2), 2, 3},
    };
    for (const auto& row : rows) {
        const auto lp = lemma_plan(*row.r, p, row.a, row.b);
        CHECK(lp.pair_case == row.c);
        CHECK(lp.root == row.root);
        CHECK(lp.target == (row.root == row.a ? row.b : row.a));
        CHECK(lp.plan.depth == row.depth);
        CHECK(lp.expected_path_length == row.length);
        CHECK(lp.plan.avoid == std::vector<Vertex>{lp.target});
        CHECK_FALSE(lp.overridden);
    }
    const auto ov = lemma_plan(odd, p, U(0), U(1), BranchOverride{3, 4});
    CHECK(ov.overridden);
    CHECK(ov.plan.even_branch == 3);
    CHECK(ov.plan.odd_branch == 4);
    CHECK_THROWS_AS(lemma_plan(odd, p, U(0), U(0)), std::invalid_argument);
    CHECK_THROWS_AS(lemma_plan(odd, p, U(50), U(0)), std::invalid_argument);
    CHECK_THROWS_AS(lemma_plan(odd, 1.5, U(1), U(0)), std::invalid_argument);
    CHECK(lemma_plan(odd, 1e-6, U(0), U(1)).plan.even_branch == 1);
}

TEST_CASE("floored branchings match a 50-digit evaluation") {
    using Big = boost::multiprecision::cpp_dec_float_50;
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> size(2, 5000), deg(2, 9);
    std::uniform_real_distribution<double> prob(0.001, 1.0);
    const Vertex ends[][2] = {{U(0), U(1)}, {V(0), V(1)}, {U(0), V(1)}};
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = size(rng), n = size(rng), d = deg(rng);
        const double p = prob(rng);
        const RegimeParams regime(m, n, d);
        const Big pm = Big(p) * m, pn = Big(p) * n, lm = log(Big(m)), ln = log(Big(n));
        for (const auto& e : ends) {
            const auto lp = lemma_plan(regime, p, e[0], e[1]);
            Big s, tt;
            const bool same = e[0].side == e[1].side;
            if (d % 2 == 1 && same && e[0].side == Side::U) {
                s = pn / ln;
                tt = pm / lm;
            } else if (d % 2 == 1 && same) {
                const Big x = Big(2) / Big(d - 1);
                s = pm / pow(lm, x);
                tt = pn / pow(ln, x);
            } else if (d % 2 == 1) {
                s = pn / 10;
                tt = pm / 10;
            } else if (same && e[0].side == Side::U) {
                s = pn / 10;
                tt = pm / 10;
            } else if (same) {
                s = pm / 10;
                tt = pn / 10;
            } else {
                s = pm / lm;
                tt = pn / ln;
            }
            const auto fl = [](const Big& x) {
                const Big f = floor(x);
                return f < 1 ? std::size_t(1) : f.convert_to<std::size_t>();
            };
            CHECK(lp.plan.even_branch == fl(s));
            CHECK(lp.plan.odd_branch == fl(tt));
            CHECK(lp.even_branch_formula == doctest::Approx(s.convert_to<double>()).epsilon(1e-12));
        }
    }
}

TEST_CASE("lemma_paths path lengths follow the parity rule") {
    const auto g = complete_bipartite(40, 40);
    const RegimeParams d3(40, 40, 3), d2(40, 40, 2);
    const auto a = lemma_paths(g, U(0), U(1), d3, 1.0, 7, BranchOverride{2, 2});
    REQUIRE(a.succeeded());
    CHECK(a.path_count() > 0);
    for (const auto& p : std::get<DisjointPathsReport>(a.result).extracted_paths) CHECK(p.length() == 4);

    const auto b = lemma_paths(g, U(0), U(1), d2, 1.0, 7, BranchOverride{3, 1});
    REQUIRE(b.succeeded());
    CHECK(b.path_count() == 3);
    for (const auto& p : std::get<DisjointPathsReport>(b.result).extracted_paths) CHECK(p.length() == 2);

    const auto c = lemma_paths(g, U(0), V(1), d2, 1.0, 7, BranchOverride{2, 2});
    REQUIRE(c.succeeded());
    for (const auto& p : std::get<DisjointPathsReport>(c.result).extracted_paths) {
        CHECK(p.length() == 3);
        CHECK(p.front() == V(1));
    }
    CHECK_FALSE(a.regime.valid);
    CHECK(a.required_paths == doctest::Approx(std::pow(2.0, 30) * std::log(40.0)));
    CHECK_THROWS_AS(lemma_paths(complete_bipartite(5, 5), U(0), U(1), d3, 1.0, 7), std::invalid_argument);
}

TEST_CASE("random graphs: reports are always sound") {
    for (Seed s = 1; s <= 60; ++s) {
        const auto g = sample_gnp(60, 60, 0.15, s);
        const RegimeParams regime(60, 60, 2 + s % 3);
        for (const auto& [a, b] : {std::pair{U(0), U(1)}, {V(0), V(1)}, {U(0), V(0)}}) {
            const auto o = lemma_paths(g, a, b, regime, 0.15, s, BranchOverride{1 + s % 3, 1 + s % 2});
            if (!o.succeeded()) continue;
            const auto& r = std::get<DisjointPathsReport>(o.result);
            CHECK(check::report_problem(g, r, o.plan.plan.depth) == "");
        }
    }
}
