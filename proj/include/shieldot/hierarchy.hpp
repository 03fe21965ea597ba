#pragma once

// Hierarchical 2^n-tree partitions over a point cloud. Layer 0 holds one
// cell per input point (cell i is point i); layer K is the single root cell.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"

namespace shieldot {

enum class Metric { Euclidean, Sphere };

struct TreeOptions {
    /// Number of layers above the singleton layer; 0 selects default_depth.
    int depth = 0;
    /// Cells with at most this many points stop splitting (ignored on grids).
    std::size_t leaf_bucket = 1;
    /// When set, points are a row-major integer grid of this shape and every
    /// layer carries integer lattice coordinates.
    std::optional<std::vector<int>> grid_shape;
};

/// max(1, ceil(log2(extent))), with extent the largest grid side, or
/// count^(1/d) for clouds (d = 2 on the sphere).
int default_depth(std::size_t count, int dim, Metric metric, const std::optional<std::vector<int>>& grid_shape);

class HierarchicalPartition {
public:
    int depth() const noexcept { return static_cast<int>(layers_.size()) - 1; }
    int dim() const noexcept { return dim_; }
    Metric metric() const noexcept { return metric_; }

    std::size_t size(int layer) const { return layers_[static_cast<std::size_t>(layer)].rad.size(); }
    const PointCloud& reps(int layer) const { return layers_[static_cast<std::size_t>(layer)].reps; }
    const std::vector<double>& radii(int layer) const { return layers_[static_cast<std::size_t>(layer)].rad; }
    Cell cell(int layer, Index i) const;

    /// Children at layer - 1 (layer >= 1).
    std::span<const Index> children(int layer, Index i) const;
    /// Parent at layer + 1 (layer < depth()).
    Index parent(int layer, Index i) const { return layers_[static_cast<std::size_t>(layer)].parent[static_cast<std::size_t>(i)]; }
    /// Original point indices below the cell.
    std::span<const Index> leaves(int layer, Index i) const;
    const std::vector<Index>& leaf_order() const noexcept { return perm_; }

    bool has_lattice() const noexcept { return lattice_; }
    std::span<const std::int64_t> lattice(int layer, Index i) const;
    /// Distance between neighbouring lattice representatives.
    double spacing(int layer) const { return layers_[static_cast<std::size_t>(layer)].spacing; }
    /// Lattice extent per axis at the layer.
    const std::vector<std::int64_t>& lattice_extent(int layer) const { return layers_[static_cast<std::size_t>(layer)].extent; }
    /// Cell at the given lattice coordinates, or -1.
    Index find_lattice(int layer, std::span<const std::int64_t> coords) const;

    /// One line per cell: layer, id, rep, rad, leaf count.
    std::string dump() const;

private:
    friend HierarchicalPartition build_tree(const PointCloud&, Metric, const TreeOptions&);

    struct Layer {
        PointCloud reps;
        std::vector<double> rad;
        std::vector<std::size_t> leaf_begin;  // into perm_, size + 1 (layers >= 1)
        std::vector<std::size_t> child_offsets;
        std::vector<Index> children;
        std::vector<Index> parent;
        std::vector<std::int64_t> lattice;
        std::vector<std::int64_t> extent;
        double spacing = 0.0;
        std::vector<Index> dense_lookup;
        std::unordered_map<std::int64_t, Index> sparse_lookup;
    };

    int dim_ = 0;
    Metric metric_ = Metric::Euclidean;
    bool lattice_ = false;
    std::vector<Index> perm_;
    std::vector<std::size_t> pos_;  // position of point i in perm_
    std::vector<Layer> layers_;
};

/// Throws Error(InvalidInput) for empty input, non-finite coordinates or
/// non-unit points under the sphere metric.
HierarchicalPartition build_tree(const PointCloud& points, Metric metric, const TreeOptions& options = {});

struct MultiScaleMeasure {
    std::vector<std::vector<Mass>> layers;
};

MultiScaleMeasure coarsen_measure(const DiscreteMeasure& measure, const HierarchicalPartition& partition);

/// c(rep(x), rep(y)).
double hierarchical_cost(const CostSpec& spec, const Cell& x, const Cell& y);

}  // namespace shieldot
