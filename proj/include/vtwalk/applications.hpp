#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vtwalk/tree_model.hpp"

namespace vtwalk {

// Variable-time search: item i is computed in t_i steps, solutions are the
// items with x_i = 1.
struct VTSInstance {
    std::vector<std::uint32_t> times;
    std::vector<bool> solutions;

    std::uint64_t total_work() const; // T = sum t_i^2
    std::uint32_t t_max() const;
    std::size_t n() const { return times.size(); }
};

VTSInstance validate_vts(VTSInstance inst);

// Star tree: root with n children, child i takes t_i steps, marked iff x_i=1.
ComputationTree vts_star(const VTSInstance& inst);

// Coarsens every k consecutive computation steps into one: t_i' = ceil(t_i/k).
VTSInstance vts_group_steps(const VTSInstance& inst, std::uint32_t k);

// Predicted query bound: sqrt(T) with known times, otherwise
// sqrt(T * log2(min(n, t_max))) with the log floored at 1.
double vts_query_bound(const VTSInstance& inst, bool known_times);

// Partition/combine cost per divide & conquer level.
struct AuxCost {
    enum class Kind { Linear, Quadratic, SqrtCeil, Table };
    Kind kind = Kind::Linear;
    std::map<std::uint64_t, std::uint64_t> table; // used by Kind::Table

    std::uint64_t eval(std::uint64_t n) const;
    const char* name() const;
};

// Divide & conquer with `a` subproblems of size n/b per level and disjunctive
// combining.
struct DnCSpec {
    std::uint32_t a = 2;
    std::uint32_t b = 2;
    std::uint64_t n = 1; // must be a power of b
    AuxCost t_aux;
    std::vector<bool> leaf_marks; // size a^D, or empty for all-unmarked

    std::uint32_t levels() const; // D with n = b^D
};

// Complete a-ary cost tree under a zero-time root; level-i vertices carry
// time T_aux(n / b^i), so T = sum_i a^i * T_aux(n/b^i)^2.
ComputationTree dnc_tree(const DnCSpec& spec);

// Unrolls T_Q(n) = sqrt(a) T_Q(n/b) + T_aux(n) with T_Q(1) = T_aux(1).
double dnc_recurrence(const DnCSpec& spec);

// Guessing decision tree with G wrong guesses at gaps d_1..d_G.
struct BombSpec {
    std::vector<std::uint64_t> gaps;

    std::size_t G() const { return gaps.size(); }
    std::uint64_t total_queries() const;          // T = sum d_i
    std::vector<std::uint32_t> step_times() const; // t_i = ceil(sqrt(d_i))
};

// Line of G vertices, i-th with time ceil(sqrt(d_i)), last vertex marked.
ComputationTree bomb_line_tree(const BombSpec& spec);

struct BombBounds {
    double step_sum = 0.0;     // sum t_i
    double cauchy_rhs = 0.0;   // sqrt(sum t_i^2 * G)
    double walk_bound = 0.0;   // sqrt(sum t_i^2 * G * log2 t_max)
    double target_bound = 0.0; // sqrt(T * G * log2 T)
};

BombBounds bomb_bounds(const BombSpec& spec);

// A line a*x + b*y = c with integer coefficients, (a, b) != (0, 0).
struct Line {
    long long a = 0;
    long long b = 0;
    long long c = 0;

    friend bool operator==(const Line&, const Line&) = default;
    friend auto operator<=>(const Line&, const Line&) = default;
};

// Reduces by gcd and forces the first nonzero of (a, b) positive.
Line normalize_line(Line line);

struct LineSet {
    std::vector<Line> lines; // normalized, pairwise distinct
};

// Normalizes every line and rejects duplicates.
LineSet make_line_set(std::vector<Line> lines);

// File format: one "a b c" triple per line, '#' starts a comment.
LineSet parse_line_set(const std::string& text);
std::string format_line_set(const LineSet& set);

// Exact O(n^3) scan: true iff some triple of lines meets in a single point
// (zero 3x3 determinant and at least one non-parallel pair in the triple).
bool p3l_bruteforce(const LineSet& set);

// Cost-model tree of the cutting recursion: an r^2-ary tree of depth
// ceil(log_r n) under a zero-time root, level-i time ceil(n / r^i).
ComputationTree p3l_cost_tree(std::uint64_t n, std::uint32_t r);

struct P3LCostSummary {
    std::uint32_t levels = 0;   // D = ceil(log_r n)
    std::uint64_t total_work = 0;
    double sqrt_work = 0.0;     // sqrt(T)
    double ratio_to_n = 0.0;    // sqrt(T) / n
    double level_band = 0.0;    // sqrt(D + 1), the equal-level-contribution scale
};

P3LCostSummary p3l_cost_summary(std::uint64_t n, std::uint32_t r);

// JSON spec inputs, e.g. {"type":"vts","times":[3,5,8],"solutions":[0,1,0]},
// {"type":"dnc","a":2,"b":2,"n":8,"taux":"linear"}, {"type":"bomb","gaps":[4,9]}.
VTSInstance vts_from_json(const std::string& text);
DnCSpec dnc_from_json(const std::string& text);
BombSpec bomb_from_json(const std::string& text);

// Dispatches on the "type" field and builds the matching computation tree.
ComputationTree tree_from_spec_json(const std::string& text);

} // namespace vtwalk
