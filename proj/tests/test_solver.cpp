#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace csearch;
using testsupport::random_tree;
using testsupport::staged_tree;
using testsupport::star3;
using testsupport::two_task_instance;
using testsupport::unit_path;

namespace {

void check_same_entries(const StrategyFrontier& a, const StrategyFrontier& b,
                        bool compare_moves) {
    REQUIRE(a.entries().size() == b.entries().size());
    for (size_t i = 0; i < a.entries().size(); ++i) {
        CHECK(a.entries()[i].searchers == b.entries()[i].searchers);
        CHECK(a.entries()[i].guard == b.entries()[i].guard);
        if (compare_moves) CHECK(a.entries()[i].moves == b.entries()[i].moves);
    }
}

}  // namespace

TEST_CASE("frontier of a single unit edge") {
    WeightedRootedTree t = unit_path(2);
    ConnectedSearchSolver solver(t);
    const StrategyFrontier& f = solver.frontier(0, kNoVertex);
    REQUIRE(f.entries().size() == 1);
    CHECK(f.entries()[0].searchers == 1);
    CHECK(f.entries()[0].guard == 0);
    CHECK(f.entries()[0].moves == std::vector<EdgeId>{0});
    REQUIRE(f.complete() != nullptr);
    CHECK(f.complete()->searchers == 1);
    CHECK(f.min_guard(0) == kInfWeight);
    CHECK(f.min_guard(1) == 0);
}

TEST_CASE("frontier of a bare leaf subtree") {
    WeightedRootedTree t = unit_path(2);
    ConnectedSearchSolver solver(t);
    const StrategyFrontier& f = solver.frontier(1, 0);
    REQUIRE(f.entries().size() == 1);
    CHECK(f.entries()[0].searchers == 0);
    CHECK(f.entries()[0].guard == 0);
    CHECK(f.entries()[0].moves.empty());
}

TEST_CASE("minimal partial construction on the three-leaf star") {
    WeightedRootedTree t = star3();
    ConnectedSearchSolver solver(t);
    SECTION("budget 1 cannot afford the first clear") {
        MinimalPartialOutcome r = solver.minimal_partial_strategy(1, 0, kNoVertex, {1, 2, 3});
        CHECK(r.status == MinimalPartialOutcome::Status::Failure);
        CHECK(r.moves.empty());
        CHECK(r.peak == 1);
        CHECK(r.guard == 1);
        CHECK(r.next_budget == 2);
    }
    SECTION("budget 2 completes") {
        MinimalPartialOutcome r = solver.minimal_partial_strategy(2, 0, kNoVertex, {1, 2, 3});
        CHECK(r.status == MinimalPartialOutcome::Status::Complete);
        CHECK(r.moves.size() == 3);
        CHECK(r.peak == 2);
        CHECK(r.guard == 0);
    }
    SECTION("order must cover the children exactly") {
        CHECK_THROWS_AS(solver.minimal_partial_strategy(2, 0, kNoVertex, {1, 2}), Error);
        CHECK_THROWS_AS(solver.minimal_partial_strategy(2, 0, kNoVertex, {1, 2, 2}), Error);
    }
}

TEST_CASE("rooted solves match known search numbers") {
    SolveResult path = solve_rooted(unit_path(5));
    CHECK(path.searchers == 1);
    CHECK(verify(path.tree, path.strategy, path.searchers).ok);

    SolveResult star_leaf = solve_rooted(star3().rerooted(1));
    CHECK(star_leaf.searchers == 2);

    SolveResult staged = solve_rooted(staged_tree());
    CHECK(staged.searchers == 12);
    CHECK(verify(staged.tree, staged.strategy, 12).ok);
    CHECK_FALSE(verify(staged.tree, staged.strategy, 11).ok);

    ReductionTree rt = tds_to_tree(two_task_instance());
    SolveResult red = solve_rooted(rt.tree);
    CHECK(red.searchers == rt.budget);
    CHECK(verify(red.tree, red.strategy, rt.budget).ok);
}

TEST_CASE("rooted solve matches the exhaustive oracle on small trees") {
    for (int e = 1; e <= 5; ++e)
        enumerate_small_trees(e, 0, {1}, [&](const WeightedRootedTree& t) {
            REQUIRE(solve_rooted(t).searchers == oracle_cs(t, t.root(), CostModel::Primitive));
        });
    for (int e = 1; e <= 4; ++e)
        enumerate_small_trees(e, 0, {1, 2}, [&](const WeightedRootedTree& t) {
            REQUIRE(solve_rooted(t).searchers == oracle_cs(t, t.root(), CostModel::Primitive));
        });
}

TEST_CASE("subtree frontier reproduces the filtered oracle profile") {
    WeightedRootedTree t = staged_tree();
    ConnectedSearchSolver solver(t);
    const StrategyFrontier& f = solver.frontier(3, 0);
    std::vector<EdgeId> branch = t.subtree_edges(3, 0);
    for (Weight k = 0; k <= 14; ++k)
        REQUIRE(f.min_guard(k) == oracle_min_guard(t, 3, k, CostModel::Composed, &branch));
}

TEST_CASE("unrooted solve picks the cheapest start") {
    SECTION("star: every start ties, smallest id wins") {
        SolveResult r = solve_unrooted(star3());
        CHECK(r.searchers == 2);
        CHECK(r.root == 0);
    }
    SECTION("hardness gadget of a single unit edge") {
        WeightedRootedTree base = unit_path(2);
        WeightedRootedTree g = unrooted_hardness_gadget(base).tree;
        SolveResult r = solve_unrooted(g);
        CHECK(r.searchers == 3);
        CHECK(r.origins[static_cast<size_t>(r.root)].kind != VertexOrigin::Kind::EdgeSplit);
        CHECK(verify(r.tree, r.strategy, 3).ok);
        // independent argmin over the starts of the input tree itself
        Weight best = kInfWeight;
        VertexId best_v = kNoVertex;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            const Weight c = oracle_cs(g, v, CostModel::Primitive);
            if (c < best) {
                best = c;
                best_v = v;
            }
        }
        CHECK(best == 3);
        CHECK(r.root == best_v);
    }
}

TEST_CASE("budget jumping matches the naive budget crawl") {
    std::vector<WeightedRootedTree> trees;
    trees.push_back(star3());
    trees.push_back(unit_path(6));
    trees.push_back(staged_tree());
    std::mt19937_64 g(8201);
    for (int it = 0; it < 10; ++it) trees.push_back(random_tree(g, 7, 1, 1, 3));
    for (const WeightedRootedTree& t : trees) {
        ConnectedSearchSolver jumping(t);
        ConnectedSearchSolver naive(t, SolverOptions{.naive_budget = true});
        check_same_entries(jumping.frontier(t.root(), kNoVertex),
                           naive.frontier(t.root(), kNoVertex), true);
    }
}

TEST_CASE("sibling-permutation dedup does not change the frontier") {
    std::vector<WeightedRootedTree> trees;
    trees.push_back(star3());
    trees.push_back(staged_tree());
    std::mt19937_64 g(8202);
    for (int it = 0; it < 10; ++it) trees.push_back(random_tree(g, 7, 2, 1, 3));
    for (const WeightedRootedTree& t : trees) {
        ConnectedSearchSolver plain(t);
        ConnectedSearchSolver dedup(t, SolverOptions{.dedup_sibling_permutations = true});
        check_same_entries(plain.frontier(t.root(), kNoVertex),
                           dedup.frontier(t.root(), kNoVertex), false);
    }
}

TEST_CASE("degree cap refuses factorial instances unless lifted") {
    std::vector<Weight> w(10, 1);
    std::vector<EdgeRec> e;
    for (int i = 1; i <= 9; ++i) e.push_back({0, i, 1});
    WeightedRootedTree star9(std::move(w), std::move(e), 0);
    CHECK_THROWS_AS(solve_rooted(star9), CapError);
    SolverOptions open{.max_degree_cap = 0, .dedup_sibling_permutations = true};
    CHECK(solve_rooted(star9, open).searchers == 2);
}

TEST_CASE("solver refuses weighted edges") {
    WeightedRootedTree t({1, 1}, {{0, 1, 2}}, 0);
    CHECK_THROWS_AS(ConnectedSearchSolver{t}, Error);
    // but the public entry point canonicalizes first
    CHECK(solve_rooted(t).searchers == 2);
}
