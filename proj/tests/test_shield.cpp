#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "shieldot/driver.hpp"
#include "shieldot/hierarchy.hpp"
#include "shieldot/shield.hpp"
#include "shieldot/verify.hpp"

using namespace shieldot;

namespace {

struct GridSetup {
    DiscreteMeasure m;
    HierarchicalPartition tree;
    CostEvaluator cost;
    CandidateSets cands;

    explicit GridSetup(int side, CostSpec spec = CostSpec::sq_euclidean())
        : m(make_grid_measure({side, side}, std::vector<Mass>(static_cast<std::size_t>(side * side), 1), side * side)),
          tree(build_tree(m.points, Metric::Euclidean, TreeOptions{0, 1, m.grid_shape})),
          cost(spec, m.points, m.points, 1'000'000),
          cands(make_candidates(tree, 0, CandidateScheme::axes())) {}

    ShieldContext ctx(ShieldMethod method) const { return {&tree, &tree, 0, &cost, &cands, method}; }
};

SparseCoupling identity(std::size_t n) {
    std::vector<SparseCoupling::Triplet> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back({static_cast<Index>(i), static_cast<Index>(i), 1});
    return SparseCoupling::from_triplets(n, n, t);
}

/// y not shielded from xa by any candidate (xs, t(xs)).
std::vector<Index> brute_miss(const CostEvaluator& cost, Index xa, std::span<const Index> cands, const std::vector<Index>& t) {
    std::vector<Index> out;
    for (std::size_t y = 0; y < cost.y().size(); ++y) {
        bool shielded = false;
        for (Index xs : cands) {
            shielded = shielded || shields(cost.spec(), cost.x()[static_cast<std::size_t>(xa)], cost.x()[static_cast<std::size_t>(xs)],
                                           cost.y()[static_cast<std::size_t>(t[static_cast<std::size_t>(xs)])], cost.y()[y],
                                           cost.slack(xa, xs));
        }
        if (!shielded) out.push_back(static_cast<Index>(y));
    }
    return out;
}

Index at(int side, int i, int j) { return static_cast<Index>(i * side + j); }

}  // namespace

TEST_CASE("candidate schemes") {
    CHECK(CandidateScheme::parse("axes").kind == CandidateKind::GridAxes);
    CHECK(CandidateScheme::parse("knn:6").k == 6);
    CHECK(CandidateScheme::parse("knn:6").name() == "knn:6");
    CHECK_THROWS_AS(CandidateScheme::parse("knn:"), Error);
    CHECK_THROWS_AS(CandidateScheme::parse("knn:0"), Error);
    CHECK_THROWS_AS(CandidateScheme::parse("ring"), Error);

    GridSetup g(5);
    CHECK(g.cands.of(at(5, 2, 2)).size() == 4);
    CHECK(g.cands.of(at(5, 0, 0)).size() == 2);
    const auto knn = make_candidates(g.tree, 0, CandidateScheme::knn(4));
    std::set<Index> got(knn.of(at(5, 2, 2)).begin(), knn.of(at(5, 2, 2)).end());
    CHECK(got == std::set<Index>{at(5, 1, 2), at(5, 3, 2), at(5, 2, 1), at(5, 2, 3)});
}

TEST_CASE("identity on a 5x5 grid") {
    GridSetup g(5);
    const auto pi = identity(25);
    const auto t = extract_map(pi);
    const Index xa = at(5, 2, 2);
    std::vector<Index> expect;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) expect.push_back(at(5, i, j));
    }
    CHECK(brute_miss(g.cost, xa, g.cands.of(xa), t) == expect);
    std::vector<ShieldCandidate> cands;
    for (Index xs : g.cands.of(xa)) cands.push_back({xs, t[static_cast<std::size_t>(xs)]});
    CHECK(search_tree(xa, cands, g.ctx(ShieldMethod::Tree)) == expect);
    CHECK(grid_miss(xa, t, g.ctx(ShieldMethod::Grid)) == expect);

    const Index corner = at(5, 0, 0);
    const std::vector<Index> corner_expect{at(5, 0, 0), at(5, 0, 1), at(5, 1, 0), at(5, 1, 1)};
    CHECK(brute_miss(g.cost, corner, g.cands.of(corner), t) == corner_expect);
    CHECK(grid_miss(corner, t, g.ctx(ShieldMethod::Grid)) == corner_expect);
}

TEST_CASE("inverted rectangle is empty") {
    GridSetup g(5);
    // t maps the neighbours of (2,2) across each other along axis 0.
    std::vector<Index> t(25);
    for (Index i = 0; i < 25; ++i) t[static_cast<std::size_t>(i)] = i;
    t[static_cast<std::size_t>(at(5, 1, 2))] = at(5, 4, 2);
    t[static_cast<std::size_t>(at(5, 3, 2))] = at(5, 0, 2);
    CHECK(grid_miss(at(5, 2, 2), t, g.ctx(ShieldMethod::Grid)).empty());
}

TEST_CASE("search_tree edge cases") {
    GridSetup g(4);
    CHECK(search_tree(0, {}, g.ctx(ShieldMethod::Tree)).size() == 16);
    ShieldStats stats;
    const std::vector<ShieldCandidate> one{{at(4, 0, 1), at(4, 0, 1)}};
    const auto miss = search_tree(0, one, g.ctx(ShieldMethod::Tree), &stats);
    CHECK(miss == brute_miss(g.cost, 0, std::vector<Index>{at(4, 0, 1)}, [] {
              std::vector<Index> t(16);
              for (Index i = 0; i < 16; ++i) t[static_cast<std::size_t>(i)] = i;
              return t;
          }()));
    CHECK(stats.psi_hat_calls > 0);
}

TEST_CASE("single point shield") {
    const DiscreteMeasure m{PointCloud(2, {0.0, 0.0}), {1}, 1, std::nullopt};
    const auto tree = build_tree(m.points, Metric::Euclidean);
    const CostEvaluator cost(CostSpec::sq_euclidean(), m.points, m.points, 1000);
    const auto cands = make_candidates(tree, 0, CandidateScheme::knn(4));
    const ShieldContext ctx{&tree, &tree, 0, &cost, &cands, ShieldMethod::Tree};
    const auto n = shield(identity(1), ctx);
    CHECK(n.size() == 1);
    CHECK(n.contains(0, 0));
}

TEST_CASE("grid and tree miss sets agree on random couplings") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto p = oracle::grid_problem(12, seed, CostSpec::sq_euclidean());
        const auto d = dense_solve(p);
        const auto tree_x = build_tree(p.mu.points, Metric::Euclidean, TreeOptions{0, 1, p.mu.grid_shape});
        const auto tree_y = build_tree(p.nu.points, Metric::Euclidean, TreeOptions{0, 1, p.nu.grid_shape});
        const CostEvaluator cost = p.evaluator();
        const auto cands = make_candidates(tree_x, 0, CandidateScheme::axes());
        const ShieldContext tctx{&tree_x, &tree_y, 0, &cost, &cands, ShieldMethod::Tree};
        const ShieldContext gctx{&tree_x, &tree_y, 0, &cost, &cands, ShieldMethod::Grid};
        const auto t = extract_map(d.pi);
        for (Index xa = 0; xa < 144; ++xa) {
            std::vector<ShieldCandidate> c;
            for (Index xs : cands.of(xa)) c.push_back({xs, t[static_cast<std::size_t>(xs)]});
            CHECK(search_tree(xa, c, tctx) == grid_miss(xa, t, gctx));
        }
    }
}

TEST_CASE("shield output is a valid shielding neighbourhood for every family") {
    std::vector<CostSpec> specs = {CostSpec::sq_euclidean(), CostSpec::p_euclidean(1.5), CostSpec::p_euclidean(3.0),
                                   CostSpec::noisy(5.0, 5.0, 3)};
    for (const auto& spec : specs) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto p = oracle::grid_problem(12, seed, spec);
            const auto d = dense_solve(p);
            const auto tree_x = build_tree(p.mu.points, Metric::Euclidean, TreeOptions{0, 1, p.mu.grid_shape});
            const auto tree_y = build_tree(p.nu.points, Metric::Euclidean, TreeOptions{0, 1, p.nu.grid_shape});
            const CostEvaluator cost = p.evaluator();
            const auto cands = make_candidates(tree_x, 0, CandidateScheme::axes());
            for (ShieldMethod method : {ShieldMethod::Tree, ShieldMethod::Grid}) {
                if (method == ShieldMethod::Grid && spec.family == CostFamily::PEuclidean) continue;
                const ShieldContext ctx{&tree_x, &tree_y, 0, &cost, &cands, method};
                const auto n = shield(d.pi, ctx);
                CHECK(n.contains_support(d.pi));
                CHECK(check_shielding(cost, d.pi, n).ok);
            }
        }
    }
    auto p = oracle::sphere_problem(144, 2);
    const auto d = dense_solve(p);
    const auto tree_x = build_tree(p.mu.points, Metric::Sphere);
    const auto tree_y = build_tree(p.nu.points, Metric::Sphere, TreeOptions{tree_x.depth(), 1, std::nullopt});
    const CostEvaluator cost = p.evaluator();
    const auto cands = make_candidates(tree_x, 0, CandidateScheme::knn(8));
    const ShieldContext ctx{&tree_x, &tree_y, 0, &cost, &cands, ShieldMethod::Tree};
    CHECK(check_shielding(cost, d.pi, shield(d.pi, ctx)).ok);
}

TEST_CASE("grid method rejects unsuitable costs") {
    GridSetup g(4, CostSpec::p_euclidean(3.0));
    std::vector<Index> t(16);
    CHECK_THROWS_AS(grid_miss(0, t, g.ctx(ShieldMethod::Grid)), Error);
}
