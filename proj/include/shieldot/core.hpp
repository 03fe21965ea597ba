#pragma once

// Problem data model: measures, couplings, neighbourhoods and integer
// quantization of mass and cost.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shieldot {

using Index = std::int32_t;
using Mass = std::int64_t;
using CostUnits = std::int64_t;
using Objective = __int128;

inline constexpr Mass kDefaultMassScale = 1'000'000'000;
inline constexpr CostUnits kDefaultCostScale = 1'000'000'000;

enum class ErrorKind { InvalidInput, Io, Infeasible, Verification };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Flat storage for a list of n-dimensional points.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(int dim) : dim_(dim) {}
    PointCloud(int dim, std::vector<double> coords);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const noexcept { return size() == 0; }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    void push_back(std::span<const double> p);
    const std::vector<double>& coords() const noexcept { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    int dim_ = 0;
    std::vector<double> coords_;
};

/// Point cloud with integer-quantized masses summing to mass_scale.
struct DiscreteMeasure {
    PointCloud points;
    std::vector<Mass> masses;
    Mass mass_scale = kDefaultMassScale;
    /// Set when the points are the integer positions of a full Cartesian grid
    /// enumerated in row-major order.
    std::optional<std::vector<int>> grid_shape;

    int dim() const noexcept { return points.dim(); }
    std::size_t size() const noexcept { return masses.size(); }

    /// Throws Error(InvalidInput) if the invariants do not hold. Full support
    /// (every mass >= 1) is required unless allow_zero is set.
    void validate(bool allow_zero = false) const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;
};

/// Builds a grid measure: points are integer positions 0..s_i-1, row-major
/// with the last axis fastest.
DiscreteMeasure make_grid_measure(const std::vector<int>& shape, std::vector<Mass> masses, Mass mass_scale);

struct CouplingEntry {
    Index y;
    Mass mass;
    friend bool operator==(const CouplingEntry&, const CouplingEntry&) = default;
};

/// Row-indexed sparse coupling in canonical form: strictly positive masses,
/// strictly increasing y within a row.
class SparseCoupling {
public:
    struct Triplet {
        Index x;
        Index y;
        Mass mass;
    };

    SparseCoupling() = default;
    SparseCoupling(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), offsets_(nx + 1, 0) {}

    /// Canonicalizes arbitrary triplets: duplicates are summed, zero entries dropped.
    static SparseCoupling from_triplets(std::size_t nx, std::size_t ny, std::vector<Triplet> triplets);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    std::span<const CouplingEntry> row(std::size_t x) const {
        return {entries_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
    }
    std::vector<Triplet> triplets() const;

    std::vector<Mass> row_sums() const;
    std::vector<Mass> column_sums() const;
    bool is_canonical() const;

    friend bool operator==(const SparseCoupling&, const SparseCoupling&) = default;

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<CouplingEntry> entries_;
};

/// Row-indexed sparse set of admissible (x, y) pairs; rows sorted and unique.
class Neighbourhood {
public:
    Neighbourhood() = default;
    Neighbourhood(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), offsets_(nx + 1, 0) {}

    /// Rows are sorted and deduplicated.
    static Neighbourhood from_rows(std::size_t ny, std::vector<std::vector<Index>> rows);
    static Neighbourhood full(std::size_t nx, std::size_t ny);
    static Neighbourhood support_of(const SparseCoupling& pi);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return cols_.size(); }
    std::span<const Index> row(std::size_t x) const {
        return {cols_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
    }
    std::size_t row_offset(std::size_t x) const { return offsets_[x]; }
    bool contains(Index x, Index y) const;
    /// Position of (x, y) in the flat column array, or npos.
    std::size_t find(Index x, Index y) const;
    bool contains_support(const SparseCoupling& pi) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const Neighbourhood&, const Neighbourhood&) = default;

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Index> cols_;
};

/// Node prices in cost units; alpha per x, beta per y.
struct DualPotentials {
    std::vector<CostUnits> alpha;
    std::vector<CostUnits> beta;
};

/// round(c_raw * cost_scale), ties away from zero.
CostUnits quantize_cost(double c_raw, CostUnits cost_scale);

/// Exact sum of quantized cost times mass over the support of pi.
template <class CostFn>
Objective objective(const SparseCoupling& pi, CostFn&& cost) {
    Objective total = 0;
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        for (const auto& e : pi.row(x)) {
            total += static_cast<Objective>(cost(static_cast<Index>(x), e.y)) * static_cast<Objective>(e.mass);
        }
    }
    return total;
}

/// For every x the y of the heaviest entry, smallest y on ties.
std::vector<Index> extract_map(const SparseCoupling& pi);

std::string to_string(Objective value);

}  // namespace shieldot
