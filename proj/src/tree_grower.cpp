#include "rainbow/tree_grower.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rainbow {

std::vector<Vertex> GrownTree::root_path(Vertex x) const {
    std::vector<Vertex> path{x};
    while (x != root) {
        const auto it = parent.find(x);
        if (it == parent.end()) throw std::invalid_argument(to_string(x) + " is not in the tree");
        x = it->second;
        path.push_back(x);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::size_t GrownTree::size() const noexcept {
    std::size_t total = 0;
    for (const auto& level : levels) total += level.size();
    return total;
}

GrowOutcome grow_tree(const BipartiteGraph& g, Vertex root, const GrowthPlan& plan, Seed seed) {
    if (plan.even_branch == 0 || plan.odd_branch == 0) throw std::invalid_argument("branching must be at least 1");
    if (plan.depth == 0) throw std::invalid_argument("depth must be at least 1");
    if (!g.contains(root)) throw std::invalid_argument("root " + to_string(root) + " is not a vertex");
    std::vector<char> used(g.vertex_count(), 0);
    for (const Vertex& a : plan.avoid) {
        if (!g.contains(a)) throw std::invalid_argument("avoided vertex " + to_string(a) + " is not a vertex");
        if (a == root) throw std::invalid_argument("the root may not be avoided");
        used[g.flat(a)] = 1;
    }
    used[g.flat(root)] = 1;

    Rng rng(seed);
    GrownTree tree{root, plan, {{root}}, {}};
    std::vector<std::uint32_t> eligible;
    for (std::size_t level = 1; level <= plan.depth; ++level) {
        const std::size_t need = plan.branch_at(level - 1);
        std::vector<Vertex> next;
        next.reserve(tree.levels.back().size() * need);
        for (const Vertex& w : tree.levels.back()) {
            const Side child_side = opposite(w.side);
            eligible.clear();
            for (auto idx : g.neighbors(w))
                if (!used[g.flat(Vertex{child_side, idx})]) eligible.push_back(idx);
            if (eligible.size() < need) return GrowthFailure{level, w, eligible.size(), need};
            if (plan.selection == Selection::SeededRandom) {
                for (std::size_t j = 0; j < need; ++j) {
                    const auto r = j + static_cast<std::size_t>(rng.below(eligible.size() - j));
                    std::swap(eligible[j], eligible[r]);
                }
            }
            for (std::size_t j = 0; j < need; ++j) {
                const Vertex child{child_side, eligible[j]};
                used[g.flat(child)] = 1;
                tree.parent.emplace(child, w);
                next.push_back(child);
            }
        }
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

std::vector<ViceTree> vice_trees(const GrownTree& tree) {
    if (tree.depth() < 1) throw std::invalid_argument("vice_trees needs a tree of depth >= 1");
    std::vector<ViceTree> parts;
    std::map<Vertex, std::size_t> slot;
    for (const Vertex& top : tree.levels[1]) {
        slot.emplace(top, parts.size());
        parts.push_back({top, {}});
    }
    for (const Vertex& leaf : tree.leaves()) {
        Vertex x = leaf;
        while (tree.parent.at(x) != tree.root) x = tree.parent.at(x);
        parts[slot.at(x)].leaves.push_back(leaf);
    }
    return parts;
}

DisjointPathsReport extract_disjoint_paths(const BipartiteGraph& g, const GrownTree& tree, Vertex target,
                                           std::size_t limit) {
    if (!g.contains(target)) throw std::invalid_argument("target " + to_string(target) + " is not a vertex");
    if (target == tree.root || tree.parent.contains(target))
        throw std::invalid_argument("target " + to_string(target) + " is already in the tree");
    if (tree.leaves().empty() || tree.leaves().front().side == target.side)
        throw std::invalid_argument("target must lie in the partite opposite to the leaves");

    DisjointPathsReport report{tree.root, target, 0, {}, {}, tree.plan};
    for (const ViceTree& part : vice_trees(tree)) {
        std::size_t count = 0;
        std::optional<Vertex> pick;
        for (const Vertex& leaf : part.leaves) {
            if (!g.adjacent(leaf, target)) continue;
            ++count;
            if (!pick) pick = leaf;
        }
        report.leaf_neighbor_count += count;
        report.per_vice_tree_counts.emplace_back(part.top, count);
        if (pick && report.extracted_paths.size() < limit) {
            Path path{tree.root_path(*pick)};
            path.vertices.push_back(target);
            report.extracted_paths.push_back(std::move(path));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

std::string to_string(PairCase c) {
    switch (c) {
        case PairCase::SameLeftOddD: return "same-U/odd-d";
        case PairCase::SameRightOddD: return "same-V/odd-d";
        case PairCase::CrossOddD: return "cross/odd-d";
        case PairCase::SameLeftEvenD: return "same-U/even-d";
        case PairCase::SameRightEvenD: return "same-V/even-d";
        case PairCase::CrossEvenD: return "cross/even-d";
    }
    return "?";
}

namespace {

std::size_t floor_branch(double x) {
    if (!(x >= 1.0)) return 1;
    if (x >= 1e15) return static_cast<std::size_t>(1e15);
    return static_cast<std::size_t>(std::floor(x));
}

}  // namespace

LemmaPlan lemma_plan(const RegimeParams& regime, double p, Vertex u, Vertex v, std::optional<BranchOverride> override,
                     Selection selection) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    if (u == v) throw std::invalid_argument("endpoints must differ");
    for (const Vertex& x : {u, v})
        if (x.index >= (x.side == Side::U ? regime.m() : regime.n()))
            throw std::invalid_argument("vertex " + to_string(x) + " outside the regime's partites");
    if (override && (override->even_branch == 0 || override->odd_branch == 0))
        throw std::invalid_argument("override branching must be at least 1");

    const std::size_t d = regime.d();
    const double m = static_cast<double>(regime.m());
    const double n = static_cast<double>(regime.n());
    const double pm = p * m, pn = p * n;
    const double ln_m = std::log(m), ln_n = std::log(n);

    LemmaPlan out;
    std::size_t depth = 0;
    if (u.side == v.side) {
        out.root = u;
        out.target = v;
        const bool left = u.side == Side::U;
        if (regime.odd()) {
            if (left) {
                out.pair_case = PairCase::SameLeftOddD;
                out.even_branch_formula = pn / ln_n;
                out.odd_branch_formula = pm / ln_m;
            } else {
                const double e = 2.0 / static_cast<double>(d - 1);
                out.pair_case = PairCase::SameRightOddD;
                out.even_branch_formula = pm / std::pow(ln_m, e);
                out.odd_branch_formula = pn / std::pow(ln_n, e);
            }
            depth = d;
            out.expected_path_length = d + 1;
        } else {
            out.pair_case = left ? PairCase::SameLeftEvenD : PairCase::SameRightEvenD;
            out.even_branch_formula = (left ? pn : pm) / 10.0;
            out.odd_branch_formula = (left ? pm : pn) / 10.0;
            depth = d - 1;
            out.expected_path_length = d;
        }
    } else {
        const Vertex in_u = u.side == Side::U ? u : v;
        const Vertex in_v = u.side == Side::U ? v : u;
        if (regime.odd()) {
            out.pair_case = PairCase::CrossOddD;
            out.root = in_u;
            out.target = in_v;
            out.even_branch_formula = pn / 10.0;
            out.odd_branch_formula = pm / 10.0;
            depth = d - 1;
            out.expected_path_length = d;
        } else {
            out.pair_case = PairCase::CrossEvenD;
            out.root = in_v;
            out.target = in_u;
            out.even_branch_formula = pm / ln_m;
            out.odd_branch_formula = pn / ln_n;
            depth = d;
            out.expected_path_length = d + 1;
        }
    }

    out.plan.depth = depth;
    out.plan.avoid = {out.target};
    out.plan.selection = selection;
    if (override) {
        out.overridden = true;
        out.plan.even_branch = override->even_branch;
        out.plan.odd_branch = override->odd_branch;
    } else {
        out.plan.even_branch = floor_branch(out.even_branch_formula);
        out.plan.odd_branch = floor_branch(out.odd_branch_formula);
    }
    return out;
}

std::size_t LemmaOutcome::path_count() const noexcept {
    if (const auto* r = std::get_if<DisjointPathsReport>(&result)) return r->extracted_paths.size();
    return 0;
}

LemmaOutcome lemma_paths(const BipartiteGraph& g, Vertex u, Vertex v, const RegimeParams& regime, double p, Seed seed,
                         std::optional<BranchOverride> override, Selection selection, std::size_t limit) {
    if (g.left_size() != regime.m() || g.right_size() != regime.n())
        throw std::invalid_argument("regime sizes do not match the graph");
    LemmaOutcome out{lemma_plan(regime, p, u, v, override, selection),
                     regime_valid(regime.m(), regime.n(), p, regime.d(), regime.epsilon()),
                     std::exp(regime.log_C1()) * std::log(static_cast<double>(regime.n())),
                     GrowthFailure{}};
    auto grown = grow_tree(g, out.plan.root, out.plan.plan, seed);
    if (auto* failure = std::get_if<GrowthFailure>(&grown)) {
        out.result = *failure;
        return out;
    }
    out.result = extract_disjoint_paths(g, std::get<GrownTree>(grown), out.plan.target, limit);
    return out;
}

}  // namespace rainbow
