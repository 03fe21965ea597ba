#include "shieldot/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace shieldot {

namespace {

constexpr std::int64_t kDenseLookupLimit = std::int64_t{1} << 24;

int ceil_log2(double s) {
    if (s <= 1.0) return 0;
    int m = 0;
    double v = 1.0;
    while (v < s * (1.0 - 1e-12)) {
        v *= 2.0;
        ++m;
    }
    return m;
}

struct WorkCell {
    std::size_t begin;
    std::size_t end;
    std::vector<double> lo;
    double side;
    std::vector<std::int64_t> idx;
};

}  // namespace

int default_depth(std::size_t count, int dim, Metric metric, const std::optional<std::vector<int>>& grid_shape) {
    double s;
    if (grid_shape) {
        s = static_cast<double>(*std::max_element(grid_shape->begin(), grid_shape->end()));
    } else {
        const int n_eff = metric == Metric::Sphere ? 2 : std::max(1, dim);
        s = std::pow(static_cast<double>(std::max<std::size_t>(count, 1)), 1.0 / n_eff);
    }
    return std::max(1, ceil_log2(s));
}

Cell HierarchicalPartition::cell(int layer, Index i) const {
    const Layer& l = layers_[static_cast<std::size_t>(layer)];
    return Cell{l.reps[static_cast<std::size_t>(i)], l.rad[static_cast<std::size_t>(i)], layer};
}

std::span<const Index> HierarchicalPartition::children(int layer, Index i) const {
    const Layer& l = layers_[static_cast<std::size_t>(layer)];
    const auto b = l.child_offsets[static_cast<std::size_t>(i)];
    const auto e = l.child_offsets[static_cast<std::size_t>(i) + 1];
    return {l.children.data() + b, e - b};
}

std::span<const Index> HierarchicalPartition::leaves(int layer, Index i) const {
    if (layer == 0) return {perm_.data() + pos_[static_cast<std::size_t>(i)], 1};
    const Layer& l = layers_[static_cast<std::size_t>(layer)];
    const auto b = l.leaf_begin[static_cast<std::size_t>(i)];
    const auto e = l.leaf_begin[static_cast<std::size_t>(i) + 1];
    return {perm_.data() + b, e - b};
}

std::span<const std::int64_t> HierarchicalPartition::lattice(int layer, Index i) const {
    const Layer& l = layers_[static_cast<std::size_t>(layer)];
    return {l.lattice.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

Index HierarchicalPartition::find_lattice(int layer, std::span<const std::int64_t> coords) const {
    const Layer& l = layers_[static_cast<std::size_t>(layer)];
    std::int64_t key = 0;
    for (int d = 0; d < dim_; ++d) {
        if (coords[d] < 0 || coords[d] >= l.extent[d]) return -1;
        key = key * l.extent[d] + coords[d];
    }
    if (!l.dense_lookup.empty()) return l.dense_lookup[static_cast<std::size_t>(key)];
    auto it = l.sparse_lookup.find(key);
    return it == l.sparse_lookup.end() ? -1 : it->second;
}

std::string HierarchicalPartition::dump() const {
    std::ostringstream out;
    out.precision(10);
    for (int layer = depth(); layer >= 0; --layer) {
        for (std::size_t i = 0; i < size(layer); ++i) {
            const Cell c = cell(layer, static_cast<Index>(i));
            out << "L" << layer << " #" << i << " rep=(";
            for (std::size_t d = 0; d < c.rep.size(); ++d) out << (d ? "," : "") << c.rep[d];
            out << ") rad=" << c.rad << " leaves=" << leaves(layer, static_cast<Index>(i)).size() << "\n";
        }
    }
    return out.str();
}

HierarchicalPartition build_tree(const PointCloud& points, Metric metric, const TreeOptions& options) {
    const std::size_t n_pts = points.size();
    const int dim = points.dim();
    if (n_pts == 0) throw Error(ErrorKind::InvalidInput, "cannot build a tree over an empty point set");
    if (dim > 62) throw Error(ErrorKind::InvalidInput, "dimension too large for a 2^n-tree");
    for (double c : points.coords()) {
        if (!std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coordinate");
    }
    if (metric == Metric::Sphere) {
        if (dim != 3) throw Error(ErrorKind::InvalidInput, "sphere metric needs 3D points");
        for (std::size_t i = 0; i < n_pts; ++i) {
            const auto p = points[i];
            const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            if (std::abs(norm - 1.0) > 1e-9) throw Error(ErrorKind::InvalidInput, "sphere metric needs unit-norm points");
        }
    }
    const bool lattice = options.grid_shape.has_value();
    if (lattice) {
        std::size_t count = 1;
        for (int s : *options.grid_shape) count *= static_cast<std::size_t>(s);
        if (static_cast<int>(options.grid_shape->size()) != dim || count != n_pts) {
            throw Error(ErrorKind::InvalidInput, "grid shape does not match the point set");
        }
    }
    const int depth = options.depth > 0 ? options.depth : default_depth(n_pts, dim, metric, options.grid_shape);
    if (lattice && static_cast<long long>(depth - 1) * dim > 62) {
        throw Error(ErrorKind::InvalidInput, "tree depth too large for lattice coordinates");
    }

    HierarchicalPartition tree;
    tree.dim_ = dim;
    tree.metric_ = metric;
    tree.lattice_ = lattice;
    tree.perm_.resize(n_pts);
    std::iota(tree.perm_.begin(), tree.perm_.end(), Index{0});
    tree.layers_.resize(static_cast<std::size_t>(depth) + 1);

    std::vector<double> lo(static_cast<std::size_t>(dim), 0.0);
    double extent = 0.0;
    for (int d = 0; d < dim; ++d) {
        double mn = points[0][d], mx = points[0][d];
        for (std::size_t i = 1; i < n_pts; ++i) {
            mn = std::min(mn, points[i][d]);
            mx = std::max(mx, points[i][d]);
        }
        lo[d] = mn;
        extent = std::max(extent, mx - mn);
    }
    const double root_side = extent * (1.0 + 1e-9);

    std::vector<WorkCell> current;
    current.push_back({0, n_pts, lo, root_side, std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)});
    std::vector<std::vector<WorkCell>> work(static_cast<std::size_t>(depth) + 1);

    std::vector<std::uint64_t> codes(n_pts);
    std::vector<Index> scratch;
    for (int j = depth; j >= 2; --j) {
        auto& layer = tree.layers_[static_cast<std::size_t>(j)];
        std::vector<WorkCell> next;
        layer.child_offsets.assign(1, 0);
        for (std::size_t c = 0; c < current.size(); ++c) {
            const WorkCell& wc = current[c];
            const std::size_t count = wc.end - wc.begin;
            if (!lattice && count <= options.leaf_bucket) {
                next.push_back(wc);
                layer.children.push_back(static_cast<Index>(next.size() - 1));
            } else {
                const double half = wc.side / 2.0;
                for (std::size_t p = wc.begin; p < wc.end; ++p) {
                    const auto pt = points[static_cast<std::size_t>(tree.perm_[p])];
                    std::uint64_t code = 0;
                    for (int d = 0; d < dim; ++d) {
                        code = (code << 1) | (pt[d] > wc.lo[d] + half ? 1u : 0u);
                    }
                    codes[static_cast<std::size_t>(tree.perm_[p])] = code;
                }
                std::stable_sort(tree.perm_.begin() + static_cast<std::ptrdiff_t>(wc.begin),
                                 tree.perm_.begin() + static_cast<std::ptrdiff_t>(wc.end), [&](Index a, Index b) {
                                     return codes[static_cast<std::size_t>(a)] < codes[static_cast<std::size_t>(b)];
                                 });
                std::size_t p = wc.begin;
                while (p < wc.end) {
                    const std::uint64_t code = codes[static_cast<std::size_t>(tree.perm_[p])];
                    std::size_t q = p;
                    while (q < wc.end && codes[static_cast<std::size_t>(tree.perm_[q])] == code) ++q;
                    WorkCell child{p, q, wc.lo, half, wc.idx};
                    for (int d = 0; d < dim; ++d) {
                        const unsigned bit = static_cast<unsigned>((code >> (dim - 1 - d)) & 1u);
                        child.lo[d] += bit * half;
                        child.idx[d] = 2 * child.idx[d] + bit;
                    }
                    next.push_back(std::move(child));
                    layer.children.push_back(static_cast<Index>(next.size() - 1));
                    p = q;
                }
            }
            layer.child_offsets.push_back(layer.children.size());
        }
        work[static_cast<std::size_t>(j)] = std::move(current);
        current = std::move(next);
    }
    work[1] = std::move(current);

    // Layer 1 children are the points themselves.
    {
        auto& layer = tree.layers_[1];
        layer.child_offsets.assign(1, 0);
        for (const WorkCell& wc : work[1]) {
            for (std::size_t p = wc.begin; p < wc.end; ++p) layer.children.push_back(tree.perm_[p]);
            layer.child_offsets.push_back(layer.children.size());
        }
    }
    tree.pos_.resize(n_pts);
    for (std::size_t p = 0; p < n_pts; ++p) tree.pos_[static_cast<std::size_t>(tree.perm_[p])] = p;

    // Parents.
    for (int j = 0; j < depth; ++j) {
        auto& layer = tree.layers_[static_cast<std::size_t>(j)];
        const auto& up = tree.layers_[static_cast<std::size_t>(j) + 1];
        const std::size_t count = j == 0 ? n_pts : work[static_cast<std::size_t>(j)].size();
        layer.parent.assign(count, -1);
        for (std::size_t c = 0; c + 1 < up.child_offsets.size(); ++c) {
            for (std::size_t k = up.child_offsets[c]; k < up.child_offsets[c + 1]; ++k) {
                layer.parent[static_cast<std::size_t>(up.children[k])] = static_cast<Index>(c);
            }
        }
    }
    tree.layers_[static_cast<std::size_t>(depth)].parent.assign(1, -1);

    // Representatives, radii and leaf ranges.
    {
        auto& layer0 = tree.layers_[0];
        layer0.reps = points;
        layer0.rad.assign(n_pts, 0.0);
        layer0.child_offsets.assign(n_pts + 1, 0);
    }
    const double diag_factor = std::sqrt(static_cast<double>(dim)) / 2.0;
    for (int j = 1; j <= depth; ++j) {
        auto& layer = tree.layers_[static_cast<std::size_t>(j)];
        const auto& cells = work[static_cast<std::size_t>(j)];
        std::vector<double> coords;
        coords.reserve(cells.size() * static_cast<std::size_t>(dim));
        layer.rad.resize(cells.size());
        layer.leaf_begin.resize(cells.size() + 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const WorkCell& wc = cells[c];
            std::vector<double> rep(static_cast<std::size_t>(dim));
            for (int d = 0; d < dim; ++d) rep[d] = wc.lo[d] + wc.side / 2.0;
            if (metric == Metric::Sphere) {
                const double norm = std::sqrt(rep[0] * rep[0] + rep[1] * rep[1] + rep[2] * rep[2]);
                if (norm == 0.0) {
                    rep = {0.0, 0.0, 1.0};
                } else {
                    for (double& v : rep) v /= norm;
                }
                layer.rad[c] = 0.0;
            } else {
                layer.rad[c] = wc.side * diag_factor;
            }
            coords.insert(coords.end(), rep.begin(), rep.end());
            layer.leaf_begin[c] = wc.begin;
        }
        layer.leaf_begin[cells.size()] = n_pts;
        layer.reps = PointCloud(dim, std::move(coords));
    }

    if (metric == Metric::Sphere) {
        // Radii cover every descendant representative, not only the leaves.
        for (int j = 0; j < depth; ++j) {
            const auto& layer = tree.layers_[static_cast<std::size_t>(j)];
            for (std::size_t c = 0; c < layer.rad.size(); ++c) {
                const auto rep = layer.reps[c];
                Index anc = layer.parent[c];
                for (int a = j + 1; a <= depth; ++a) {
                    auto& up = tree.layers_[static_cast<std::size_t>(a)];
                    const double d = geodesic_distance(up.reps[static_cast<std::size_t>(anc)], rep);
                    up.rad[static_cast<std::size_t>(anc)] = std::max(up.rad[static_cast<std::size_t>(anc)], d);
                    anc = up.parent[static_cast<std::size_t>(anc)];
                }
            }
        }
    }

    if (lattice) {
        for (int j = 0; j <= depth; ++j) {
            auto& layer = tree.layers_[static_cast<std::size_t>(j)];
            const std::size_t count = layer.rad.size();
            layer.lattice.resize(count * static_cast<std::size_t>(dim));
            if (j == 0) {
                layer.extent.assign(options.grid_shape->begin(), options.grid_shape->end());
                layer.spacing = 1.0;
                for (std::size_t i = 0; i < count; ++i) {
                    for (int d = 0; d < dim; ++d) layer.lattice[i * dim + d] = std::llround(points[i][d]);
                }
            } else {
                layer.extent.assign(static_cast<std::size_t>(dim), std::int64_t{1} << (depth - j));
                layer.spacing = root_side / static_cast<double>(std::int64_t{1} << (depth - j));
                const auto& cells = work[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < count; ++i) {
                    for (int d = 0; d < dim; ++d) layer.lattice[i * dim + d] = cells[i].idx[d];
                }
            }
            std::int64_t total = 1;
            bool dense = true;
            for (std::int64_t e : layer.extent) {
                if (total > kDenseLookupLimit / std::max<std::int64_t>(e, 1)) dense = false;
                total = dense ? total * e : total;
            }
            if (dense) layer.dense_lookup.assign(static_cast<std::size_t>(total), -1);
            for (std::size_t i = 0; i < count; ++i) {
                std::int64_t key = 0;
                for (int d = 0; d < dim; ++d) key = key * layer.extent[d] + layer.lattice[i * dim + d];
                if (dense) {
                    layer.dense_lookup[static_cast<std::size_t>(key)] = static_cast<Index>(i);
                } else {
                    layer.sparse_lookup.emplace(key, static_cast<Index>(i));
                }
            }
        }
    }
    return tree;
}

MultiScaleMeasure coarsen_measure(const DiscreteMeasure& measure, const HierarchicalPartition& partition) {
    if (measure.size() != partition.size(0)) throw Error(ErrorKind::InvalidInput, "measure and partition sizes differ");
    MultiScaleMeasure ms;
    ms.layers.resize(static_cast<std::size_t>(partition.depth()) + 1);
    ms.layers[0] = measure.masses;
    for (int j = 1; j <= partition.depth(); ++j) {
        auto& cur = ms.layers[static_cast<std::size_t>(j)];
        const auto& below = ms.layers[static_cast<std::size_t>(j) - 1];
        cur.assign(partition.size(j), 0);
        for (std::size_t c = 0; c < cur.size(); ++c) {
            for (Index child : partition.children(j, static_cast<Index>(c))) cur[c] += below[static_cast<std::size_t>(child)];
        }
    }
    return ms;
}

double hierarchical_cost(const CostSpec& spec, const Cell& x, const Cell& y) { return cost(spec, x.rep, y.rep); }

}  // namespace shieldot
