#pragma once

// Cost families, difference functions psi, cell-wise lower bounds psi_hat
// and the shielding predicate.

#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "shieldot/core.hpp"

namespace shieldot {

enum class CostFamily { SqEuclidean, PEuclidean, SphereSqGeodesic, Noisy };

/// Noisy is always squared Euclidean plus eta * c_n + lambda * c_L, where
/// c_n is a seeded hash of the index pair and c_L the sine field below.
struct CostSpec {
    CostFamily family = CostFamily::SqEuclidean;
    double p = 2.0;
    double eta = 0.0;
    double lambda = 0.0;
    std::uint64_t noise_seed = 0;
    double k_mag = 20.0;

    static CostSpec sq_euclidean() { return {}; }
    static CostSpec p_euclidean(double p);
    static CostSpec sphere();
    static CostSpec noisy(double eta, double lambda, std::uint64_t seed);

    bool is_sphere() const noexcept { return family == CostFamily::SphereSqGeodesic; }
    /// Throws Error(InvalidInput) on bad parameters.
    void validate() const;
    std::string name() const;
};

/// A view of a cell of a hierarchical partition as seen by psi_hat.
struct Cell {
    std::span<const double> rep;
    double rad = 0.0;
    int layer = 0;
};

inline constexpr double kNoShield = -std::numeric_limits<double>::infinity();

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double geodesic_distance(std::span<const double> a, std::span<const double> b);

/// (k_mag/2pi) sin((2pi/k_mag) <k(y), x>) with k(y) = (cos(y1+y2), sin(y1+y2)).
double lipschitz_field(std::span<const double> x, std::span<const double> y, double k_mag = 20.0);

/// Uniform value in [0,1] derived from (seed, i, j).
double noise_value(std::uint64_t seed, Index i, Index j);

/// Geometric part of the cost: the base family without noise terms.
double geometric_cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y);

/// Continuous cost without the index-dependent noise term.
double cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y);

double psi(const CostSpec& spec, std::span<const double> x1, std::span<const double> x2, std::span<const double> y);

/// psi on the geometric part only.
double geometric_psi(const CostSpec& spec, std::span<const double> x1, std::span<const double> x2,
                     std::span<const double> y);

/// c(xA,yB) - c(xs,yB) - c(xA,ys) + c(xs,ys) > slack on the geometric part.
bool shields(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs,
             std::span<const double> ys, std::span<const double> yb, double slack);

/// 2 eta + 2 lambda |xA - xs| for Noisy, 0 otherwise.
double shield_slack(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs);

/// Lower bound of the geometric psi_(xA,xs)(y) over all y in the cell.
double psi_hat(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs, const Cell& cell);

/// Full quantized cost between two indexed point clouds. with_noise enables
/// the eta * c_n term, which only exists between original points.
class CostEvaluator {
public:
    CostEvaluator(const CostSpec& spec, const PointCloud& x, const PointCloud& y, CostUnits cost_scale,
                  bool with_noise = true);

    const CostSpec& spec() const noexcept { return spec_; }
    const PointCloud& x() const noexcept { return *x_; }
    const PointCloud& y() const noexcept { return *y_; }
    CostUnits cost_scale() const noexcept { return cost_scale_; }
    double noise_weight() const noexcept { return with_noise_ ? spec_.eta : 0.0; }

    double raw(Index i, Index j) const;
    CostUnits operator()(Index i, Index j) const { return quantize_cost(raw(i, j), cost_scale_); }

    /// Noise slack between two x indices.
    double slack(Index xa, Index xs) const;

private:
    CostSpec spec_;
    const PointCloud* x_;
    const PointCloud* y_;
    CostUnits cost_scale_;
    bool with_noise_;
};

}  // namespace shieldot
