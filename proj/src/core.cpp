#include "shieldot/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shieldot {

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ <= 0) throw Error(ErrorKind::InvalidInput, "point dimension must be positive");
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0) {
        throw Error(ErrorKind::InvalidInput, "coordinate count is not a multiple of the dimension");
    }
}

void PointCloud::push_back(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim_) throw Error(ErrorKind::InvalidInput, "point dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
}

void DiscreteMeasure::validate(bool allow_zero) const {
    if (points.size() != masses.size()) throw Error(ErrorKind::InvalidInput, "point and mass counts differ");
    if (masses.empty()) throw Error(ErrorKind::InvalidInput, "measure has no points");
    if (mass_scale <= 0) throw Error(ErrorKind::InvalidInput, "mass_scale must be positive");
    Mass total = 0;
    for (Mass m : masses) {
        if (m < 0) throw Error(ErrorKind::InvalidInput, "negative mass");
        if (m == 0 && !allow_zero) throw Error(ErrorKind::InvalidInput, "zero mass point (strip it or add a floor)");
        total += m;
    }
    if (total != mass_scale) {
        throw Error(ErrorKind::InvalidInput,
                    "masses sum to " + std::to_string(total) + ", expected " + std::to_string(mass_scale));
    }
    for (double c : points.coords()) {
        if (!std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coordinate");
    }
    if (grid_shape) {
        std::size_t count = 1;
        for (int s : *grid_shape) {
            if (s <= 0) throw Error(ErrorKind::InvalidInput, "grid extent must be positive");
            count *= static_cast<std::size_t>(s);
        }
        if (count != masses.size() || static_cast<int>(grid_shape->size()) != dim()) {
            throw Error(ErrorKind::InvalidInput, "grid shape does not match the point set");
        }
    }
}

DiscreteMeasure make_grid_measure(const std::vector<int>& shape, std::vector<Mass> masses, Mass mass_scale) {
    const int dim = static_cast<int>(shape.size());
    std::size_t count = 1;
    for (int s : shape) count *= static_cast<std::size_t>(s);
    if (masses.size() != count) throw Error(ErrorKind::InvalidInput, "grid mass count does not match shape");
    std::vector<double> coords(count * static_cast<std::size_t>(dim));
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t i = 0; i < count; ++i) {
        for (int d = 0; d < dim; ++d) coords[i * dim + d] = idx[d];
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
        }
    }
    DiscreteMeasure m{PointCloud(dim, std::move(coords)), std::move(masses), mass_scale, shape};
    return m;
}

SparseCoupling SparseCoupling::from_triplets(std::size_t nx, std::size_t ny, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    SparseCoupling pi(nx, ny);
    std::vector<std::size_t> counts(nx, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const Triplet& t = triplets[i];
        if (t.x < 0 || static_cast<std::size_t>(t.x) >= nx || t.y < 0 || static_cast<std::size_t>(t.y) >= ny) {
            throw Error(ErrorKind::InvalidInput, "coupling index out of range");
        }
        Mass sum = 0;
        std::size_t j = i;
        for (; j < triplets.size() && triplets[j].x == t.x && triplets[j].y == t.y; ++j) sum += triplets[j].mass;
        if (sum < 0) throw Error(ErrorKind::InvalidInput, "negative coupling mass");
        if (sum > 0) {
            pi.entries_.push_back({t.y, sum});
            ++counts[static_cast<std::size_t>(t.x)];
        }
        i = j;
    }
    for (std::size_t x = 0; x < nx; ++x) pi.offsets_[x + 1] = pi.offsets_[x] + counts[x];
    return pi;
}

std::vector<SparseCoupling::Triplet> SparseCoupling::triplets() const {
    std::vector<Triplet> out;
    out.reserve(entries_.size());
    for (std::size_t x = 0; x < nx_; ++x) {
        for (const auto& e : row(x)) out.push_back({static_cast<Index>(x), e.y, e.mass});
    }
    return out;
}

std::vector<Mass> SparseCoupling::row_sums() const {
    std::vector<Mass> sums(nx_, 0);
    for (std::size_t x = 0; x < nx_; ++x) {
        for (const auto& e : row(x)) sums[x] += e.mass;
    }
    return sums;
}

std::vector<Mass> SparseCoupling::column_sums() const {
    std::vector<Mass> sums(ny_, 0);
    for (const auto& e : entries_) sums[static_cast<std::size_t>(e.y)] += e.mass;
    return sums;
}

bool SparseCoupling::is_canonical() const {
    if (offsets_.size() != nx_ + 1 || offsets_.back() != entries_.size()) return false;
    for (std::size_t x = 0; x < nx_; ++x) {
        auto r = row(x);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].mass <= 0 || r[k].y < 0 || static_cast<std::size_t>(r[k].y) >= ny_) return false;
            if (k > 0 && r[k - 1].y >= r[k].y) return false;
        }
    }
    return true;
}

Neighbourhood Neighbourhood::from_rows(std::size_t ny, std::vector<std::vector<Index>> rows) {
    Neighbourhood n(rows.size(), ny);
    std::size_t total = 0;
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        total += r.size();
    }
    n.cols_.reserve(total);
    for (std::size_t x = 0; x < rows.size(); ++x) {
        for (Index y : rows[x]) {
            if (y < 0 || static_cast<std::size_t>(y) >= ny) throw Error(ErrorKind::InvalidInput, "neighbourhood index out of range");
        }
        n.cols_.insert(n.cols_.end(), rows[x].begin(), rows[x].end());
        n.offsets_[x + 1] = n.cols_.size();
    }
    return n;
}

Neighbourhood Neighbourhood::full(std::size_t nx, std::size_t ny) {
    Neighbourhood n(nx, ny);
    n.cols_.resize(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
        std::iota(n.cols_.begin() + static_cast<std::ptrdiff_t>(x * ny),
                  n.cols_.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny), Index{0});
        n.offsets_[x + 1] = (x + 1) * ny;
    }
    return n;
}

Neighbourhood Neighbourhood::support_of(const SparseCoupling& pi) {
    Neighbourhood n(pi.nx(), pi.ny());
    n.cols_.reserve(pi.nnz());
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        for (const auto& e : pi.row(x)) n.cols_.push_back(e.y);
        n.offsets_[x + 1] = n.cols_.size();
    }
    return n;
}

std::size_t Neighbourhood::find(Index x, Index y) const {
    auto r = row(static_cast<std::size_t>(x));
    auto it = std::lower_bound(r.begin(), r.end(), y);
    if (it == r.end() || *it != y) return npos;
    return offsets_[static_cast<std::size_t>(x)] + static_cast<std::size_t>(it - r.begin());
}

bool Neighbourhood::contains(Index x, Index y) const { return find(x, y) != npos; }

bool Neighbourhood::contains_support(const SparseCoupling& pi) const {
    if (pi.nx() != nx_ || pi.ny() != ny_) return false;
    for (std::size_t x = 0; x < nx_; ++x) {
        for (const auto& e : pi.row(x)) {
            if (!contains(static_cast<Index>(x), e.y)) return false;
        }
    }
    return true;
}

CostUnits quantize_cost(double c_raw, CostUnits cost_scale) {
    if (!std::isfinite(c_raw)) throw Error(ErrorKind::InvalidInput, "infinite cost unsupported");
    if (cost_scale < 1) throw Error(ErrorKind::InvalidInput, "cost_scale must be at least 1");
    // std::llround rounds half away from zero.
    return static_cast<CostUnits>(std::llround(c_raw * static_cast<double>(cost_scale)));
}

std::vector<Index> extract_map(const SparseCoupling& pi) {
    std::vector<Index> t(pi.nx());
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        auto r = pi.row(x);
        if (r.empty()) throw Error(ErrorKind::InvalidInput, "x carries no mass: row " + std::to_string(x));
        const CouplingEntry* best = &r[0];
        for (const auto& e : r) {
            if (e.mass > best->mass) best = &e;
        }
        t[x] = best->y;
    }
    return t;
}

std::string to_string(Objective value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    unsigned __int128 v = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1 : static_cast<unsigned __int128>(value);
    std::string digits;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

}  // namespace shieldot
