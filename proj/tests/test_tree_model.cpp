#include <doctest.h>

#include <algorithm>

#include "vtwalk/experiments.hpp"
#include "vtwalk/tree_model.hpp"

using namespace vtwalk;

namespace {

// Independent oracles: recompute depth and total work by recursive traversal.
std::uint32_t depth_oracle(const ComputationTree& tree, VertexId v = 0) {
    std::uint32_t best = 0;
    for (VertexId c : tree.children[v])
        best = std::max(best, 1 + depth_oracle(tree, c));
    return best;
}

std::uint64_t work_oracle(const ComputationTree& tree) {
    std::uint64_t sum = 0;
    for (const CompVertex& v : tree.vertices)
        sum += std::uint64_t(v.time) * v.time;
    return sum;
}

} // namespace

TEST_CASE("build_tree on the degenerate root-only instance") {
    ComputationTree tree = build_tree({});
    CHECK(tree.n == 0);
    CHECK(tree.depth == 0);
    CHECK(tree.total_work == 0);
    CHECK(tree.t_max == 0);
    CHECK(tree.is_leaf(0));
}

TEST_CASE("build_tree derives depth and work on the running star") {
    ComputationTree tree = build_tree({{0, 1, false}, {0, 2, true}});
    CHECK(tree.n == 2);
    CHECK(tree.depth == 1);
    CHECK(tree.total_work == 5); // 1^2 + 2^2
    CHECK(tree.t_max == 2);
    CHECK(tree.vertices[2].marked);
}

TEST_CASE("build_tree on a path") {
    ComputationTree tree = build_tree({{0, 1, false}, {1, 3, true}});
    CHECK(tree.depth == 2);
    CHECK(tree.total_work == 10); // 1 + 9
}

TEST_CASE("build_tree rejects exactly the malformed inputs") {
    CHECK_THROWS_AS(build_tree({{5, 1, false}}), Error);
    try {
        build_tree({{5, 1, false}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CycleOrOrphan);
    }

    try {
        build_tree({{0, 1, true}, {1, 1, false}}); // marked vertex gains a child
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MarkedInternal);
    }

    try {
        build_tree({{0, 0, false}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroTime);
    }
}

TEST_CASE("degree counts children") {
    ComputationTree star =
        build_tree({{0, 1, false}, {0, 1, false}, {0, 1, false}, {0, 1, false}, {0, 1, false}});
    CHECK(degree(star, 0) == 5);
    CHECK(degree(star, 1) == 0);

    ComputationTree path = build_tree({{0, 1, false}, {1, 1, false}, {2, 1, false}});
    CHECK(degree(path, 2) == 1);
    CHECK_THROWS_AS(degree(path, 9), Error);
}

TEST_CASE("brute_force_has_marked scans everything") {
    CHECK_FALSE(brute_force_has_marked(build_tree({})));
    CHECK(brute_force_has_marked(build_tree({{0, 1, false}, {0, 2, true}})));
    ComputationTree big = gen_random_tree(50, 4, 0, 1234);
    CHECK_FALSE(brute_force_has_marked(big));
}

TEST_CASE("classical_cost sums transition times") {
    CHECK(classical_cost(build_tree({})) == 0);
    CHECK(classical_cost(build_tree({{0, 1, false}, {0, 2, false}})) == 3);
    // full binary tree of depth 2, all times 3: six non-root vertices
    ComputationTree full = build_tree(
        {{0, 3, false}, {0, 3, false}, {1, 3, false}, {1, 3, false}, {2, 3, false}, {2, 3, false}});
    CHECK(classical_cost(full) == 18);
}

TEST_CASE("derived fields match independent traversals on random trees") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        ComputationTree tree = gen_random_tree(3 + seed * 2, 5, seed % 3, seed);
        CHECK(tree.depth == depth_oracle(tree));
        CHECK(tree.total_work == work_oracle(tree));
        CHECK(tree.total_work >= tree.depth);
    }
}

TEST_CASE("JSON round-trip is the identity") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        ComputationTree tree = gen_random_tree(6 + seed, 4, 1 + seed % 2, 77 + seed);
        ComputationTree back = tree_from_json(tree_to_json(tree));
        REQUIRE(back.size() == tree.size());
        for (std::size_t i = 0; i < tree.size(); ++i) {
            CHECK(back.vertices[i].id == tree.vertices[i].id);
            CHECK(back.vertices[i].parent == tree.vertices[i].parent);
            CHECK(back.vertices[i].time == tree.vertices[i].time);
            CHECK(back.vertices[i].marked == tree.vertices[i].marked);
        }
        CHECK(back.depth == tree.depth);
        CHECK(back.total_work == tree.total_work);
    }
}

TEST_CASE("JSON loader validates") {
    CHECK_THROWS_AS(tree_from_json("not json"), Error);
    CHECK_THROWS_AS(tree_from_json("{\"vertices\":[{\"id\":0}]}"), Error);
    // a marked root is only legal when the root is a leaf
    ComputationTree solo = tree_from_json(
        R"({"vertices":[{"id":0,"parent":null,"t":0,"marked":true}]})");
    CHECK(brute_force_has_marked(solo));
    CHECK_THROWS_AS(tree_from_json(R"({"vertices":[
        {"id":0,"parent":null,"t":0,"marked":true},
        {"id":1,"parent":0,"t":1,"marked":false}]})"),
                    Error);
}
