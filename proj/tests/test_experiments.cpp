#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vtwalk/experiments.hpp"
#include "vtwalk/expansion.hpp"

using namespace vtwalk;

TEST_CASE("generators are deterministic in the seed") {
    ComputationTree a = gen_random_tree(12, 4, 2, 7);
    ComputationTree b = gen_random_tree(12, 4, 2, 7);
    CHECK(tree_to_json(a) == tree_to_json(b));
    ComputationTree c = gen_random_tree(12, 4, 2, 8);
    CHECK(tree_to_json(a) != tree_to_json(c));
}

TEST_CASE("random trees respect their parameters") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ComputationTree tree = gen_random_tree(20, 5, 3, seed);
        CHECK(tree.n == 20);
        CHECK(tree.t_max <= 5);
        std::size_t marks = 0;
        for (const CompVertex& v : tree.vertices) {
            if (v.marked) {
                ++marks;
                CHECK(tree.is_leaf(v.id));
            }
        }
        CHECK(marks <= 3);
        CHECK(marks >= 1); // twenty vertices always leave a leaf to mark
    }
}

TEST_CASE("star generator marks the requested items") {
    ComputationTree star = gen_star({1, 2, 3}, {2});
    CHECK(star.vertices[2].marked);
    CHECK_FALSE(star.vertices[1].marked);
    CHECK_THROWS_AS(gen_star({1, 2}, {5}), Error);
}

TEST_CASE("sweep output is deterministic and schema stable") {
    SweepConfig config;
    config.family = Family::Star;
    config.grid = {2, 4};
    config.star_items = 4;
    config.seed = 5;
    std::string one = run_sweep_csv(config);
    std::string two = run_sweep_csv(config);
    CHECK(one == two);
    CHECK(one.find("instance_id,n,D,T,t_max,scheme,marked,accept_prob,queries,"
                   "predicted_bound,wall_time_ms,error") != std::string::npos);
    CHECK(one.find("# loglog_slope_queries_vs_TD") != std::string::npos);
    CHECK(one.find("star_t2") != std::string::npos);
}

TEST_CASE("empty grid yields a header-only CSV") {
    SweepConfig config;
    config.grid = {};
    std::string csv = run_sweep_csv(config);
    CHECK(csv.find("instance_id,") != std::string::npos);
    CHECK(csv.find("star_") == std::string::npos);
}

TEST_CASE("closed-form path R/W agrees with the expansion") {
    for (std::uint64_t t = 1; t <= 40; ++t) {
        ComputationTree path = build_tree({{0, static_cast<std::uint32_t>(t), false}});
        for (WeightScheme scheme : {WeightScheme::KnownTimes, WeightScheme::ExponentialBlocks,
                                    WeightScheme::LinearRamp, WeightScheme::Unit}) {
            ExpandedTree e = expand(path, scheme);
            std::uint32_t leaf = static_cast<std::uint32_t>(e.size() - 1);
            PathRW rw = path_rw(scheme, t);
            CHECK(rw.resistance ==
                  doctest::Approx(path_resistance(e, leaf)).epsilon(1e-12));
            CHECK(rw.weight == doctest::Approx(total_path_weight(e, leaf)).epsilon(1e-12));
        }
    }
}

TEST_CASE("asymptotic weighing ratios at the worst-case length") {
    const std::uint64_t t = std::uint64_t(1) << 16;
    PathRW blocks = path_rw(WeightScheme::ExponentialBlocks, t);
    CHECK(blocks.resistance / std::log2(double(t)) >= 0.9);
    CHECK(blocks.resistance / std::log2(double(t)) <= 1.2);
    CHECK(blocks.weight / (double(t) * t) >= 1.30);
    CHECK(blocks.weight / (double(t) * t) <= 1.34);

    PathRW ramp = path_rw(WeightScheme::LinearRamp, 65535);
    CHECK(ramp.resistance / std::log(65535.0) >= 1.0);
    CHECK(ramp.resistance / std::log(65535.0) <= 1.1);
    CHECK(ramp.weight / (65535.0 * 65535.0 / 2.0) >= 1.0);
    CHECK(ramp.weight / (65535.0 * 65535.0 / 2.0) <= 1.01);

    PathRW unit = path_rw(WeightScheme::Unit, 5);
    CHECK(unit.resistance == 5.0);
    CHECK(unit.weight == 5.0);
}

TEST_CASE("weights table lists every scheme") {
    std::string csv = weights_table_csv({5});
    CHECK(csv.find("known,5,") != std::string::npos);
    CHECK(csv.find("expblocks,5,") != std::string::npos);
    CHECK(csv.find("linear,5,") != std::string::npos);
    CHECK(csv.find("unit,5,5,5,") != std::string::npos);
}

TEST_CASE("loglog slope recovers exact power laws") {
    std::vector<double> x{64, 256, 1024, 4096};
    std::vector<double> sqrt_y;
    for (double v : x)
        sqrt_y.push_back(std::sqrt(v));
    CHECK(loglog_slope(x, sqrt_y) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("verify suites pass on a clean build") {
    std::ostringstream sink;
    CHECK(run_verify("eigenvector", sink) == 0);
    CHECK(run_verify("esgl", sink) == 0);
    CHECK(sink.str().find("PASS") != std::string::npos);
    CHECK_THROWS_AS(run_verify("bogus", sink), Error);
}

TEST_CASE("fault injection trips the residual checks") {
    std::ostringstream sink;
    VerifyOptions options;
    options.inject_fault = true;
    CHECK(run_verify("eigenvector", sink, options) > 0);
    CHECK(sink.str().find("FAIL") != std::string::npos);
}
