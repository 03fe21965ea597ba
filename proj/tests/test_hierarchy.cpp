#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"
#include "shieldot/generate.hpp"
#include "shieldot/hierarchy.hpp"
#include "shieldot/random.hpp"

using namespace shieldot;

namespace {

void check_structure(const HierarchicalPartition& tree, const PointCloud& pts) {
    const int k = tree.depth();
    CHECK(tree.size(k) == 1);
    CHECK(tree.size(0) == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Cell c = tree.cell(0, static_cast<Index>(i));
        CHECK(c.rad == 0.0);
        CHECK(std::equal(c.rep.begin(), c.rep.end(), pts[i].begin()));
    }
    for (int layer = 1; layer <= k; ++layer) {
        std::vector<int> seen(tree.size(layer - 1), 0);
        for (std::size_t c = 0; c < tree.size(layer); ++c) {
            const auto kids = tree.children(layer, static_cast<Index>(c));
            CHECK(!kids.empty());
            std::size_t leaf_count = 0;
            for (Index child : kids) {
                ++seen[static_cast<std::size_t>(child)];
                CHECK(tree.parent(layer - 1, child) == static_cast<Index>(c));
                leaf_count += tree.leaves(layer - 1, child).size();
            }
            CHECK(leaf_count == tree.leaves(layer, static_cast<Index>(c)).size());
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    }
}

void check_covering(const HierarchicalPartition& tree, const PointCloud& pts, bool sphere) {
    for (int layer = 0; layer <= tree.depth(); ++layer) {
        for (std::size_t c = 0; c < tree.size(layer); ++c) {
            const Cell cell = tree.cell(layer, static_cast<Index>(c));
            for (Index leaf : tree.leaves(layer, static_cast<Index>(c))) {
                const auto p = pts[static_cast<std::size_t>(leaf)];
                const double d = sphere ? geodesic_distance(cell.rep, p) : euclidean_distance(cell.rep, p);
                CHECK(d <= cell.rad * (1 + 1e-12) + 1e-12);
            }
        }
    }
}

}  // namespace

TEST_CASE("single point tree") {
    const PointCloud pts(2, {0.5, -1.0});
    const auto tree = build_tree(pts, Metric::Euclidean);
    CHECK(tree.depth() >= 1);
    CHECK(tree.size(tree.depth()) == 1);
    check_structure(tree, pts);
    check_covering(tree, pts, false);
}

TEST_CASE("unit square corners") {
    const PointCloud pts(2, {0, 0, 1, 0, 0, 1, 1, 1});
    const auto tree = build_tree(pts, Metric::Euclidean, TreeOptions{1, 1, std::nullopt});
    CHECK(tree.depth() == 1);
    CHECK(tree.radii(1)[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-8));
    CHECK(tree.children(1, 0).size() == 4);
    const auto deeper = build_tree(pts, Metric::Euclidean, TreeOptions{2, 1, std::nullopt});
    CHECK(deeper.size(1) == 4);
    for (double r : deeper.radii(1)) CHECK(r == doctest::Approx(std::sqrt(2.0) / 4));
    check_structure(deeper, pts);
}

TEST_CASE("random cloud covering and structure") {
    SplitMix64 rng(11);
    PointCloud pts(2);
    for (int i = 0; i < 1000; ++i) pts.push_back(std::vector<double>{rng.uniform(), rng.uniform()});
    const auto tree = build_tree(pts, Metric::Euclidean);
    check_structure(tree, pts);
    check_covering(tree, pts, false);
}

TEST_CASE("sphere tree covering") {
    SphereGenOptions o;
    o.count = 500;
    o.seed = 3;
    const auto m = gen_sphere_measure(o);
    const auto tree = build_tree(m.points, Metric::Sphere);
    check_structure(tree, m.points);
    check_covering(tree, m.points, true);
    for (int layer = 1; layer <= tree.depth(); ++layer) {
        for (std::size_t c = 0; c < tree.size(layer); ++c) {
            const auto rep = tree.cell(layer, static_cast<Index>(c)).rep;
            CHECK(std::sqrt(rep[0] * rep[0] + rep[1] * rep[1] + rep[2] * rep[2]) == doctest::Approx(1.0));
        }
    }
    const PointCloud bad(3, {1, 1, 0});
    CHECK_THROWS_AS(build_tree(bad, Metric::Sphere), Error);
}

TEST_CASE("grid lattice trees") {
    const auto m = make_grid_measure({6, 5}, std::vector<Mass>(30, 1), 30);
    const auto tree = build_tree(m.points, Metric::Euclidean, TreeOptions{0, 1, m.grid_shape});
    CHECK(tree.has_lattice());
    check_structure(tree, m.points);
    check_covering(tree, m.points, false);
    for (int layer = 0; layer <= tree.depth(); ++layer) {
        for (std::size_t c = 0; c < tree.size(layer); ++c) {
            const auto coords = tree.lattice(layer, static_cast<Index>(c));
            CHECK(tree.find_lattice(layer, coords) == static_cast<Index>(c));
        }
    }
    const std::vector<std::int64_t> outside{100, 100};
    CHECK(tree.find_lattice(0, outside) == -1);
}

TEST_CASE("default depth") {
    CHECK(default_depth(1024, 2, Metric::Euclidean, std::vector<int>{32, 32}) == 5);
    CHECK(default_depth(4, 2, Metric::Euclidean, std::vector<int>{2, 2}) == 1);
    CHECK(default_depth(1, 2, Metric::Euclidean, std::nullopt) == 1);
    CHECK(default_depth(1024, 3, Metric::Sphere, std::nullopt) == 5);
}

TEST_CASE("tree is deterministic") {
    SplitMix64 rng(12);
    PointCloud pts(3);
    for (int i = 0; i < 200; ++i) pts.push_back(std::vector<double>{rng.normal(), rng.normal(), rng.normal()});
    CHECK(build_tree(pts, Metric::Euclidean).dump() == build_tree(pts, Metric::Euclidean).dump());
}

TEST_CASE("coarsen_measure") {
    const auto uniform = make_grid_measure({2, 4}, std::vector<Mass>(8, 1), 8);
    const auto t = build_tree(uniform.points, Metric::Euclidean, TreeOptions{0, 1, uniform.grid_shape});
    const auto ms = coarsen_measure(uniform, t);
    CHECK(ms.layers.back() == std::vector<Mass>{8});

    std::vector<Mass> one(8, 0);
    one[5] = 8;
    DiscreteMeasure spike = make_grid_measure({2, 4}, one, 8);
    const auto ms2 = coarsen_measure(spike, t);
    for (int layer = 1; layer <= t.depth(); ++layer) {
        const auto& l = ms2.layers[static_cast<std::size_t>(layer)];
        CHECK(l[static_cast<std::size_t>([&] {
                  Index c = 5;
                  for (int k = 0; k < layer; ++k) c = t.parent(k, c);
                  return c;
              }())] == 8);
        CHECK(std::accumulate(l.begin(), l.end(), Mass{0}) == 8);
    }

    GridGenOptions o;
    o.shape = {9, 7};
    o.seed = 2;
    const auto g = gen_grid_measure(o);
    const auto tg = build_tree(g.points, Metric::Euclidean, TreeOptions{0, 1, g.grid_shape});
    const auto mg = coarsen_measure(g, tg);
    for (int layer = 1; layer <= tg.depth(); ++layer) {
        const auto& l = mg.layers[static_cast<std::size_t>(layer)];
        CHECK(std::accumulate(l.begin(), l.end(), Mass{0}) == g.mass_scale);
        for (std::size_t c = 0; c < l.size(); ++c) {
            Mass s = 0;
            for (Index child : tg.children(layer, static_cast<Index>(c))) s += mg.layers[static_cast<std::size_t>(layer - 1)][static_cast<std::size_t>(child)];
            CHECK(s == l[c]);
        }
    }
}

TEST_CASE("hierarchical cost at representatives") {
    const std::vector<double> a{0, 0}, b{3, 4};
    CHECK(hierarchical_cost(CostSpec::sq_euclidean(), Cell{a, 0.0, 0}, Cell{b, 0.0, 0}) == doctest::Approx(25.0));
    const std::vector<double> n{0, 0, 1};
    CHECK(hierarchical_cost(CostSpec::sphere(), Cell{n, 0.2, 2}, Cell{n, 0.1, 2}) == 0.0);
}
