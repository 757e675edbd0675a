#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/thresholds.hpp"

namespace rainbow {

enum class Selection { SeededRandom, Lexicographic };

/// Shape of an (s, t)-ary tree: even-level vertices get even_branch children,
/// odd-level vertices get odd_branch children, root at level 0.
struct GrowthPlan {
    std::size_t even_branch = 1;
    std::size_t odd_branch = 1;
    std::size_t depth = 1;
    std::vector<Vertex> avoid;  // never used at any level
    Selection selection = Selection::SeededRandom;

    std::size_t branch_at(std::size_t level) const noexcept { return level % 2 == 0 ? even_branch : odd_branch; }
};

struct GrownTree {
    Vertex root;
    GrowthPlan plan;
    /// levels[0] = {root}; levels[i] in the order children were chosen.
    std::vector<std::vector<Vertex>> levels;
    std::map<Vertex, Vertex> parent;

    std::size_t depth() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
    const std::vector<Vertex>& leaves() const { return levels.back(); }
    /// Vertices from the root down to x.
    std::vector<Vertex> root_path(Vertex x) const;
    std::size_t size() const noexcept;
};

/// First vertex that could not receive its quota of fresh neighbors.
struct GrowthFailure {
    std::size_t level = 0;  // level being filled
    Vertex stuck_vertex;
    std::size_t available = 0;
    std::size_t required = 0;
};

using GrowOutcome = std::variant<GrownTree, GrowthFailure>;

/// Grows the tree level by level. Children of each vertex (taken in level
/// order) come from its neighbors that are not yet in the tree and not in
/// plan.avoid; the level is updated after every vertex. Throws
/// std::invalid_argument on an invalid plan (zero branching or depth, root
/// listed in avoid, or vertices outside g).
GrowOutcome grow_tree(const BipartiteGraph& g, Vertex root, const GrowthPlan& plan, Seed seed);

struct ViceTree {
    Vertex top;                 // the level-1 vertex
    std::vector<Vertex> leaves;  // in leaf-level order
};

/// Leaves grouped by their level-1 ancestor, in level-1 order.
std::vector<ViceTree> vice_trees(const GrownTree& tree);

struct DisjointPathsReport {
    Vertex root;
    Vertex target;
    std::size_t leaf_neighbor_count = 0;  // target's neighbors among the leaves
    std::vector<std::pair<Vertex, std::size_t>> per_vice_tree_counts;
    std::vector<Path> extracted_paths;  // root ... leaf, target
    GrowthPlan params_used;
};

/// Takes at most one target-adjacent leaf per vice-tree (the first in leaf
/// order), up to limit, and closes each root-to-leaf branch with the edge to
/// target. Throws std::invalid_argument when target is in the tree or lies
/// in the same partite as the leaves.
DisjointPathsReport extract_disjoint_paths(const BipartiteGraph& g, const GrownTree& tree, Vertex target,
                                           std::size_t limit = static_cast<std::size_t>(-1));

/// Which endpoint configuration a pair falls in, by parity of d.
enum class PairCase {
    SameLeftOddD,   // both in U, d odd: (pn/ln n, pm/ln m)-ary, depth d, rooted at u
    SameRightOddD,  // both in V, d odd: (pm/(ln m)^(2/(d-1)), pn/(ln n)^(2/(d-1)))-ary, depth d
    CrossOddD,      // d odd: (pn/10, pm/10)-ary, depth d-1, rooted at the U endpoint
    SameLeftEvenD,  // both in U, d even: (pn/10, pm/10)-ary, depth d-1
    SameRightEvenD, // both in V, d even: (pm/10, pn/10)-ary, depth d-1
    CrossEvenD,     // d even: (pm/ln m, pn/ln n)-ary, depth d, rooted at the V endpoint
};

std::string to_string(PairCase c);

struct BranchOverride {
    std::size_t even_branch = 1;
    std::size_t odd_branch = 1;
};

struct LemmaPlan {
    PairCase pair_case;
    Vertex root;
    Vertex target;
    double even_branch_formula = 0;  // unfloored
    double odd_branch_formula = 0;
    GrowthPlan plan;                 // floored (minimum 1) or overridden
    bool overridden = false;
    std::size_t expected_path_length = 0;
};

/// Dispatches the pair (u, v) to its case and evaluates the branching
/// formulas at edge probability p. Throws std::invalid_argument if u == v
/// or either vertex lies outside an m x n graph.
LemmaPlan lemma_plan(const RegimeParams& regime, double p, Vertex u, Vertex v,
                     std::optional<BranchOverride> override = std::nullopt,
                     Selection selection = Selection::SeededRandom);

struct LemmaOutcome {
    LemmaPlan plan;
    RegimeCheck regime;
    double required_paths = 0;  // 2^(10d) c0 ln n
    std::variant<DisjointPathsReport, GrowthFailure> result;

    bool succeeded() const noexcept { return std::holds_alternative<DisjointPathsReport>(result); }
    std::size_t path_count() const noexcept;
};

/// Grows the case-specific tree in g and extracts disjoint paths to the
/// other endpoint. Regime violations are reported, not raised.
LemmaOutcome lemma_paths(const BipartiteGraph& g, Vertex u, Vertex v, const RegimeParams& regime, double p, Seed seed,
                         std::optional<BranchOverride> override = std::nullopt,
                         Selection selection = Selection::SeededRandom,
                         std::size_t limit = static_cast<std::size_t>(-1));

}  // namespace rainbow
