#pragma once

// Independent re-check of a tree-grower report, written against the raw
// edge list rather than the library's adjacency structure.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "rainbow/graph.hpp"
#include "rainbow/tree_grower.hpp"

namespace check {

inline bool has_edge(const rainbow::BipartiteGraph& g, rainbow::Vertex a, rainbow::Vertex b) {
    if (a.side == b.side) return false;
    if (a.side == rainbow::Side::V) std::swap(a, b);
    const auto edges = g.edges();
    return std::find(edges.begin(), edges.end(), rainbow::Edge{a.index, b.index}) != edges.end();
}

/// Empty string when the report is sound, otherwise the first problem found.
inline std::string report_problem(const rainbow::BipartiteGraph& g, const rainbow::DisjointPathsReport& r,
                                  std::size_t depth) {
    std::set<rainbow::Vertex> interior;
    std::set<rainbow::Vertex> second;  // distinct level-1 vertices
    for (const auto& p : r.extracted_paths) {
        const auto& vs = p.vertices;
        if (vs.size() != depth + 2) return "path length " + std::to_string(vs.size() - 1);
        if (vs.front() != r.root || vs.back() != r.target) return "wrong endpoints";
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            if (!has_edge(g, vs[i], vs[i + 1])) return "missing edge";
        for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
            if (vs[i] == r.root || vs[i] == r.target) return "endpoint repeated inside a path";
            if (!interior.insert(vs[i]).second) return "interiors overlap";
        }
        if (vs.size() > 2) second.insert(vs[1]);
    }
    std::size_t nonzero = 0;
    for (const auto& [top, count] : r.per_vice_tree_counts) nonzero += count > 0;
    if (r.extracted_paths.size() > nonzero) return "more paths than vice-trees with a neighbor";
    std::size_t total = 0;
    for (const auto& [top, count] : r.per_vice_tree_counts) total += count;
    if (total != r.leaf_neighbor_count) return "per vice-tree counts do not sum to the leaf count";
    return "";
}

}  // namespace check
