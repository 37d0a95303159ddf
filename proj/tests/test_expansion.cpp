#include <doctest.h>

#include <cmath>

#include "vtwalk/experiments.hpp"
#include "vtwalk/expansion.hpp"

using namespace vtwalk;

namespace {

ComputationTree single_vertex_tree(std::uint32_t t, bool marked = false) {
    return build_tree({{0, t, marked}});
}

} // namespace

TEST_CASE("expand unrolls the running star under KnownTimes") {
    ComputationTree tree = build_tree({{0, 1, false}, {0, 2, true}});
    ExpandedTree e = expand(tree, WeightScheme::KnownTimes);
    REQUIRE(e.size() == 4);
    CHECK(e.root_weight == doctest::Approx(1.0)); // D = 1
    CHECK(e.vertices[1].weight == doctest::Approx(1.0));
    CHECK(e.vertices[2].weight == doctest::Approx(2.0));
    CHECK(e.vertices[3].weight == doctest::Approx(2.0));
    CHECK(e.vertices[3].marked);
    CHECK_FALSE(e.vertices[2].marked);
    CHECK(e.vertices[3].level == 2);
    CHECK(e.depth == 2);
    CHECK(e.last_step_of(2) == 3);
}

TEST_CASE("expand on a unit edge adds nothing") {
    ExpandedTree e = expand(single_vertex_tree(1), WeightScheme::Unit);
    CHECK(e.size() == 2);
    CHECK(e.vertices[1].parent == 0u);
}

TEST_CASE("LinearRamp weights count the step index") {
    ExpandedTree e = expand(single_vertex_tree(4), WeightScheme::LinearRamp);
    REQUIRE(e.size() == 5);
    for (std::uint32_t j = 1; j <= 4; ++j)
        CHECK(e.vertices[j].weight == doctest::Approx(double(j)));
}

TEST_CASE("expand rejects a root-only tree") {
    CHECK_THROWS_AS(expand(build_tree({}), WeightScheme::KnownTimes), Error);
}

TEST_CASE("expanded size is 1 + sum of times under every scheme") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ComputationTree tree = gen_random_tree(4 + seed, 5, seed % 2, 900 + seed);
        std::uint64_t sum = classical_cost(tree);
        for (WeightScheme scheme : {WeightScheme::KnownTimes, WeightScheme::LinearRamp,
                                    WeightScheme::Unit}) {
            ExpandedTree e = expand(tree, scheme);
            CHECK(e.size() == 1 + sum);
            double total = 0.0;
            for (const ExpandedVertex& x : e.vertices)
                if (!x.is_root())
                    total += x.weight;
            CHECK(e.weight_sum == doctest::Approx(total));
        }
        // the padded route keeps the identity relative to its own source
        ExpandedTree padded = expand(tree, WeightScheme::ExponentialBlocks);
        CHECK(padded.size() == 1 + classical_cost(padded.source));
    }
}

TEST_CASE("pad_unknown block structure") {
    SUBCASE("time 1 stays a single unit block") {
        ComputationTree p = pad_unknown(single_vertex_tree(1, true));
        REQUIRE(p.n == 1);
        CHECK(p.vertices[1].time == 1);
        CHECK(p.vertices[1].marked);
    }
    SUBCASE("time 5 becomes blocks 1,2,4") {
        ComputationTree p = pad_unknown(single_vertex_tree(5, true));
        REQUIRE(p.n == 3);
        CHECK(p.vertices[1].time == 1);
        CHECK(p.vertices[2].time == 2);
        CHECK(p.vertices[3].time == 4);
        CHECK(classical_cost(p) == 7);
        CHECK(p.total_work == 21);
        CHECK(p.total_work <= 1.34 * 25);
        CHECK_FALSE(p.vertices[1].marked);
        CHECK_FALSE(p.vertices[2].marked);
        CHECK(p.vertices[3].marked);
    }
    SUBCASE("time 3 is covered exactly by 1+2") {
        ComputationTree p = pad_unknown(single_vertex_tree(3));
        REQUIRE(p.n == 2);
        CHECK(classical_cost(p) == 3);
        CHECK(p.total_work == 5);
    }
}

TEST_CASE("pad_unknown bounds hold for every time value") {
    for (std::uint32_t t = 1; t <= 200; ++t) {
        ComputationTree p = pad_unknown(single_vertex_tree(t, true));
        CHECK(classical_cost(p) >= t);
        CHECK(double(p.total_work) <= 1.34 * double(t) * double(t));
        // marked flag sits on the final block only
        for (std::size_t i = 1; i < p.size(); ++i)
            CHECK(p.vertices[i].marked == (i + 1 == p.size()));
    }
}

TEST_CASE("path resistance and weight on single paths") {
    SUBCASE("unit weights give R = W = t") {
        ExpandedTree e = expand(single_vertex_tree(5), WeightScheme::Unit);
        CHECK(path_resistance(e, 5) == doctest::Approx(5.0));
        CHECK(total_path_weight(e, 5) == doctest::Approx(5.0));
    }
    SUBCASE("linear ramp resistance is the harmonic sum") {
        ExpandedTree e = expand(single_vertex_tree(4), WeightScheme::LinearRamp);
        CHECK(path_resistance(e, 4) == doctest::Approx(25.0 / 12.0).epsilon(1e-12));
    }
    SUBCASE("known times cancel to unit resistance") {
        ExpandedTree e = expand(single_vertex_tree(7), WeightScheme::KnownTimes);
        CHECK(path_resistance(e, 7) == doctest::Approx(1.0));
        CHECK(total_path_weight(e, 7) == doctest::Approx(49.0));
    }
    SUBCASE("exponential blocks 1,2,4 weigh 21") {
        ExpandedTree e = expand(single_vertex_tree(5), WeightScheme::ExponentialBlocks);
        std::uint32_t leaf = static_cast<std::uint32_t>(e.size() - 1);
        CHECK(total_path_weight(e, leaf) == doctest::Approx(21.0));
        CHECK(path_resistance(e, leaf) == doctest::Approx(3.0)); // one per block
    }
    SUBCASE("unknown vertex is rejected") {
        ExpandedTree e = expand(single_vertex_tree(2), WeightScheme::Unit);
        CHECK_THROWS_AS(path_resistance(e, 99), Error);
    }
}

TEST_CASE("known-times resistance to a leaf equals its source depth") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ComputationTree tree = gen_random_tree(5 + seed, 6, 1, 40 + seed);
        ExpandedTree e = expand(tree, WeightScheme::KnownTimes);
        for (const ExpandedVertex& x : e.vertices) {
            if (!x.marked)
                continue;
            std::uint32_t d = 0;
            for (VertexId v = x.source; v != 0; v = *tree.vertices[v].parent)
                ++d;
            CHECK(path_resistance(e, x.id) == doctest::Approx(double(d)).epsilon(1e-12));
        }
    }
}
