#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vtwalk/tree_model.hpp"

namespace vtwalk {

// Per-vertex weighting of the expanded tree. KnownTimes is the weighting used
// when transition times are trusted; ExponentialBlocks handles unknown times
// by padding each vertex into blocks of length 1, 2, 4, ...; LinearRamp and
// Unit are the alternative ramp/flat profiles used for comparison.
enum class WeightScheme { KnownTimes, ExponentialBlocks, LinearRamp, Unit };

const char* scheme_name(WeightScheme scheme);
std::optional<WeightScheme> scheme_from_name(const std::string& name);

struct ExpandedVertex {
    std::uint32_t id = 0;
    // Source vertex this step belongs to; the root maps to source 0, step 0.
    VertexId source = 0;
    std::uint32_t step = 0; // t in [1..t_v] for path vertices, 0 for the root
    std::optional<std::uint32_t> parent;
    double weight = 0.0;
    std::uint32_t level = 0; // distance from the root in the expanded tree
    bool marked = false;

    bool is_root() const { return step == 0; }
};

// The walk's state space: each source vertex v unrolled into t_v path
// vertices. |E| = 1 + sum of t_v.
struct ExpandedTree {
    std::vector<ExpandedVertex> vertices;
    std::vector<std::vector<std::uint32_t>> children;
    ComputationTree source; // the padded tree for ExponentialBlocks
    WeightScheme scheme = WeightScheme::KnownTimes;

    std::uint32_t depth = 0;  // D_E
    double weight_sum = 0.0;  // sum of w_x over x != root
    double root_weight = 0.0; // w_r

    // id of the final step vertex s(v, t_v) of a source vertex
    std::uint32_t last_step_of(VertexId source_vertex) const;

    std::size_t size() const { return vertices.size(); }
};

// Unrolls each source vertex into a weighted path. Root weight is 1/D of the
// tree actually expanded (the padded tree under ExponentialBlocks).
ExpandedTree expand(const ComputationTree& tree, WeightScheme scheme);

// Replaces every non-root vertex of time t_v by a path of vertices with times
// 1, 2, 4, ..., 2^a, for the minimal a with 1+2+...+2^a >= t_v. Only the last
// block vertex inherits the marked flag.
ComputationTree pad_unknown(const ComputationTree& tree);

// Sum of reciprocal weights along the root-to-leaf path, root term excluded.
double path_resistance(const ExpandedTree& expanded, std::uint32_t leaf);

// Sum of weights along the root-to-leaf path, root term excluded.
double total_path_weight(const ExpandedTree& expanded, std::uint32_t leaf);

// Debug serialization (ids, parents, weights, levels, marked flags).
std::string expanded_to_json(const ExpandedTree& expanded, int indent = 2);

} // namespace vtwalk
