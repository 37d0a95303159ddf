#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vtwalk/errors.hpp"

namespace vtwalk {

using VertexId = std::uint32_t;

// A vertex of a computation tree. The root always has id 0 and time 0;
// every other vertex takes `time` transition steps to compute from its parent.
struct CompVertex {
    VertexId id = 0;
    std::optional<VertexId> parent;
    std::uint32_t time = 0;
    bool marked = false;
};

struct TreeEdge {
    VertexId parent = 0;
    std::uint32_t time = 1;
    bool marked = false;
};

// Rooted tree of transition procedures. Immutable after construction; ids are
// dense and topologically ordered (parent id < child id).
struct ComputationTree {
    std::vector<CompVertex> vertices;
    std::vector<std::vector<VertexId>> children;

    std::size_t n = 0;            // non-root vertex count
    std::uint32_t depth = 0;      // D, max root-to-leaf edge count
    std::uint64_t total_work = 0; // T = sum of t_v^2
    std::uint32_t t_max = 0;

    bool is_leaf(VertexId v) const { return children.at(v).empty(); }
    std::size_t size() const { return vertices.size(); }
};

// Builds and validates a tree from an edge list; edge i creates vertex i+1.
ComputationTree build_tree(const std::vector<TreeEdge>& edges);

// Assembles a tree from explicit vertex records (used by the JSON loader);
// runs the same validation as build_tree.
ComputationTree assemble_tree(std::vector<CompVertex> vertices);

std::uint32_t degree(const ComputationTree& tree, VertexId v);

// Classical oracle: depth-first scan for any marked vertex.
bool brute_force_has_marked(const ComputationTree& tree);

// Baseline classical cost, sum of all transition times.
std::uint64_t classical_cost(const ComputationTree& tree);

// Canonical on-disk instance format:
// {"vertices":[{"id":0,"parent":null,"t":0,"marked":false}, ...]}
std::string tree_to_json(const ComputationTree& tree, int indent = 2);
ComputationTree tree_from_json(const std::string& text);

} // namespace vtwalk
