#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "shieldot/driver.hpp"
#include "shieldot/verify.hpp"

using namespace shieldot;

namespace {

struct Layer0 {
    ProblemInstance p;
    HierarchicalPartition tx;
    HierarchicalPartition ty;
    CostEvaluator cost;
    CandidateSets cands;

    explicit Layer0(ProblemInstance prob)
        : p(std::move(prob)),
          tx(build_tree(p.mu.points, Metric::Euclidean, tree_options_for(p.mu, 0))),
          ty(build_tree(p.nu.points, Metric::Euclidean, tree_options_for(p.nu, tx.depth()))),
          cost(p.evaluator()),
          cands(make_candidates(tx, 0, CandidateScheme::axes())) {}

    LayerProblem layer() const {
        LayerProblem lp;
        lp.mu = &p.mu.masses;
        lp.nu = &p.nu.masses;
        lp.ctx = ShieldContext{&tx, &ty, 0, &cost, &cands, ShieldMethod::Grid};
        return lp;
    }
};

}  // namespace

TEST_CASE("solve_sparse on the full product stops after two solves") {
    Layer0 s(oracle::grid_problem(4, 1, CostSpec::sq_euclidean(), 1000));
    LevelReport rep;
    const auto res = solve_sparse(s.layer(), Neighbourhood::full(16, 16), SolveOptions{}, &rep);
    CHECK(rep.iterations == 2);
    CHECK(res.objective == dense_solve(s.p).objective);
}

TEST_CASE("solve_sparse with one point") {
    ProblemInstance p;
    p.mu = DiscreteMeasure{PointCloud(2, {0.0, 0.0}), {10}, 10, std::nullopt};
    p.nu = DiscreteMeasure{PointCloud(2, {1.0, 2.0}), {10}, 10, std::nullopt};
    const auto r = solve_multiscale(p);
    CHECK(r.report.final_objective == 10 * quantize_cost(5.0, kDefaultCostScale));
    CHECK(r.pi.nnz() == 1);
}

TEST_CASE("solve_sparse from a coarse start matches the dense oracle") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Layer0 s(oracle::grid_problem(16, seed, CostSpec::sq_euclidean()));
        // N1: the support of the layer-1 optimum refined to layer 0.
        const auto& tx = s.tx;
        const auto& ty = s.ty;
        const auto mx = coarsen_measure(s.p.mu, tx);
        const auto my = coarsen_measure(s.p.nu, ty);
        const CostEvaluator c1(s.p.cost, tx.reps(1), ty.reps(1), s.p.cost_scale, false);
        const auto coarse = solve_local(SparseTransportLP::build(mx.layers[1], my.layers[1], Neighbourhood::full(tx.size(1), ty.size(1)),
                                                                 [&](Index x, Index y) { return c1(x, y); }));
        const auto n1 = refine_neighbourhood(tx, ty, 1, coarse.pi);
        LevelReport rep;
        const auto res = solve_sparse(s.layer(), n1, SolveOptions{}, &rep);
        CHECK(res.objective == dense_solve(s.p).objective);
        for (std::size_t i = 1; i < rep.objectives.size(); ++i) CHECK(rep.objectives[i] <= rep.objectives[i - 1]);
        CHECK(rep.objectives.back() == res.objective);
    }
}

TEST_CASE("refinement contains the children product") {
    auto p = oracle::grid_problem(8, 3, CostSpec::sq_euclidean());
    const auto tx = build_tree(p.mu.points, Metric::Euclidean, tree_options_for(p.mu, 0));
    const auto ty = build_tree(p.nu.points, Metric::Euclidean, tree_options_for(p.nu, tx.depth()));
    const auto pi = SparseCoupling::from_triplets(tx.size(2), ty.size(2), {{0, 1, 4}, {2, 3, 1}});
    const auto n = refine_neighbourhood(tx, ty, 2, pi);
    for (const auto& t : pi.triplets()) {
        for (Index cx : tx.children(2, t.x)) {
            for (Index cy : ty.children(2, t.y)) CHECK(n.contains(cx, cy));
        }
    }
}

TEST_CASE("identical uniform measures give the identity") {
    const auto m = make_grid_measure({6, 6}, std::vector<Mass>(36, 5), 180);
    ProblemInstance p{m, m, CostSpec::sq_euclidean(), kDefaultCostScale};
    SolveOptions o;
    o.certify = true;
    const auto r = solve_multiscale(p, o);
    CHECK(r.report.final_objective == 0);
    for (std::size_t x = 0; x < 36; ++x) {
        REQUIRE(r.pi.row(x).size() == 1);
        CHECK(r.pi.row(x)[0].y == static_cast<Index>(x));
    }
    CHECK(r.report.certified);
}

TEST_CASE("depth one degenerates to a dense solve") {
    auto p = oracle::grid_problem(6, 2, CostSpec::sq_euclidean());
    SolveOptions o;
    o.depth = 1;
    const auto r = solve_multiscale(p, o);
    CHECK(r.report.depth == 1);
    CHECK(r.report.levels.size() == 2);
    CHECK(r.report.levels[1].n_sizes[0] == 36 * 36);
    CHECK(r.report.final_objective == dense_solve(p).objective);
}

TEST_CASE("two level 8x8 problems match the oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto p = oracle::grid_problem(8, seed, CostSpec::sq_euclidean());
        SolveOptions o;
        o.depth = 2;
        CHECK(solve_multiscale(p, o).report.final_objective == dense_solve(p).objective);
    }
}

TEST_CASE("multiscale options and warm policies") {
    auto p = oracle::grid_problem(16, 5, CostSpec::sq_euclidean());
    const auto expect = dense_solve(p).objective;
    for (WarmPolicy w : {WarmPolicy::Basis, WarmPolicy::Duals, WarmPolicy::None}) {
        for (ShieldMethod m : {ShieldMethod::Grid, ShieldMethod::Tree}) {
            SolveOptions o;
            o.warm = w;
            o.method = m;
            o.certify = true;
            const auto r = solve_multiscale(p, o);
            CHECK(r.report.final_objective == expect);
            CHECK(r.report.certified);
        }
    }
    SolveOptions knn;
    knn.method = ShieldMethod::Tree;
    knn.candidates = CandidateScheme::knn(6);
    CHECK(solve_multiscale(p, knn).report.final_objective == expect);
    SolveOptions bad;
    bad.method = ShieldMethod::Grid;
    bad.candidates = CandidateScheme::knn(6);
    CHECK_THROWS_AS(solve_multiscale(p, bad), Error);
}

TEST_CASE("observer sees every shielding neighbourhood") {
    auto p = oracle::grid_problem(10, 7, CostSpec::noisy(5.0, 5.0, 2));
    int seen = 0;
    SolveOptions o;
    o.on_shield = [&](const ShieldObservation& obs) {
        ++seen;
        CHECK(check_shielding(obs.cost, obs.pi, obs.n).ok);
    };
    const auto r = solve_multiscale(p, o);
    int iters = 0;
    for (std::size_t i = 1; i < r.report.levels.size(); ++i) iters += r.report.levels[i].iterations;
    CHECK(seen == iters);
    CHECK(r.report.final_objective == dense_solve(p).objective);
}

TEST_CASE("watchdog") {
    auto p = oracle::grid_problem(8, 1, CostSpec::sq_euclidean());
    SolveOptions o;
    o.max_iter = 1;
    CHECK_THROWS_AS(solve_multiscale(p, o), Error);
}

TEST_CASE("defaults") {
    auto grid = oracle::grid_problem(8, 1, CostSpec::sq_euclidean());
    CHECK(default_method(grid) == ShieldMethod::Grid);
    CHECK(default_candidates(grid).kind == CandidateKind::GridAxes);
    grid.cost = CostSpec::p_euclidean(3.0);
    CHECK(default_method(grid) == ShieldMethod::Tree);
    const auto sphere = oracle::sphere_problem(64, 1);
    CHECK(default_method(sphere) == ShieldMethod::Tree);
    CHECK(default_candidates(sphere).k == 8);
}
