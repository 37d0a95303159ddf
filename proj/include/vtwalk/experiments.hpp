#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vtwalk/applications.hpp"
#include "vtwalk/detection.hpp"

namespace vtwalk {

enum class Family { Star, RandomTree, DnC, Bomb, P3LCost };

const char* family_name(Family family);
std::optional<Family> family_from_name(const std::string& name);

// Star with fixed per-item time and `marked` solution items.
ComputationTree gen_star(const std::vector<std::uint32_t>& times,
                         const std::vector<std::size_t>& marked_items);

// Uniform-attachment random tree: vertex i attaches to a uniform existing
// vertex, times are geometric(1/2) truncated at t_max, then `mark_count`
// leaves are marked. Fully determined by the seed (raw mt19937_64 draws:
// parent = next() % i, then one bit per unit of time, then a partial
// Fisher-Yates over the leaf list).
ComputationTree gen_random_tree(std::size_t n, std::uint32_t t_max,
                                std::size_t mark_count, std::uint64_t seed);

struct SweepConfig {
    Family family = Family::Star;
    std::vector<std::uint64_t> grid; // per-family size parameter
    WeightScheme scheme = WeightScheme::KnownTimes;
    std::uint64_t seed = 0;
    int reps = 15;

    // family knobs
    std::size_t star_items = 16;
    std::size_t marked = 1;
    std::uint32_t t_max = 4;       // random_tree time cap
    std::uint32_t dnc_a = 2;
    std::uint32_t dnc_b = 2;
    AuxCost dnc_aux;
    std::uint64_t bomb_gap_max = 64;
    std::uint32_t p3l_r = 2;

    std::size_t dense_cap = 4096;
    bool timing = false; // wall_time column stays empty unless set
};

struct ResultRow {
    std::string instance_id;
    std::size_t n = 0;
    std::uint32_t depth = 0;
    std::uint64_t total_work = 0;
    std::uint32_t t_max = 0;
    WeightScheme scheme = WeightScheme::KnownTimes;
    bool marked = false;
    std::optional<double> accept_prob;
    std::uint64_t queries = 0;
    double predicted_bound = 0.0;
    std::optional<double> wall_time_ms;
    std::string error;
};

std::vector<ResultRow> run_sweep(const SweepConfig& config);

// CSV with a fixed header, one row per instance, and trailing '#' summary
// comments (log-log slope of queries vs T*D; max queries/bound ratio).
std::string sweep_to_csv(const std::vector<ResultRow>& rows);
std::string run_sweep_csv(const SweepConfig& config);

// Resistance/weight table per scheme: scheme, t, R, W, R/log2 t, R/ln t, W/t^2.
std::string weights_table_csv(const std::vector<std::uint64_t>& t_values);

// Closed-form R and W of a single path of length t under one scheme.
struct PathRW {
    double resistance = 0.0;
    double weight = 0.0;
};
PathRW path_rw(WeightScheme scheme, std::uint64_t t);

struct VerifyOptions {
    bool inject_fault = false; // negative control: corrupt a weight
    std::size_t dense_cap = 4096;
};

// Named invariant suites; prints one line per check with measured vs bound.
// Returns the number of failed checks.
int run_verify(const std::string& suite, std::ostream& out, const VerifyOptions& options = {});

// Least-squares slope of log2(y) vs log2(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace vtwalk
