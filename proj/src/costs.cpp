#include "shieldot/costs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "shieldot/random.hpp"

namespace shieldot {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_dims(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "point dimension mismatch");
}

/// Unsigned angle between a and b; 0 if either vanishes.
double angle(std::span<const double> a, std::span<const double> b) {
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::acos(clamp_unit(dot(a, b) / (na * nb)));
}

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 to_vec3(std::span<const double> p) { return {p[0], p[1], p[2]}; }

double psi_hat_peucl(double p, std::span<const double> xa, std::span<const double> xs, const Cell& cell) {
    const std::size_t n = xa.size();
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = xa[i] - xs[i];
        b[i] = xs[i] - cell.rep[i];
    }
    const double dist_as = std::sqrt(dot(a, a));
    if (dist_as == 0.0) return 0.0;
    const double dist_sr = std::sqrt(dot(b, b));
    const double theta = cell.rad < dist_sr ? std::asin(clamp_unit(cell.rad / dist_sr)) : kPi;
    const double phi = std::min(kPi, angle(a, b) + theta);
    const double cphi = std::cos(phi);
    const double r = cphi >= 0.0 ? std::max(0.0, dist_sr - cell.rad) : dist_sr + cell.rad;
    return p * std::pow(r, p - 1.0) * dist_as * cphi;
}

double psi_hat_sphere(std::span<const double> xa_in, std::span<const double> xs_in, const Cell& cell) {
    const Vec3 xa = to_vec3(xa_in);
    const Vec3 xs = to_vec3(xs_in);
    if (xa == xs) return 0.0;
    const Vec3 axis = cross(xa, xs);
    if (std::sqrt(dot3(axis, axis)) < 1e-12) return kNoShield;

    // Frame with xA as pole and xs in the phi = 0 meridian.
    const double cos_s = dot3(xa, xs);
    Vec3 e1 = {xs[0] - cos_s * xa[0], xs[1] - cos_s * xa[1], xs[2] - cos_s * xa[2]};
    const double ne1 = std::sqrt(dot3(e1, e1));
    for (double& v : e1) v /= ne1;
    const Vec3 e2 = cross(xa, e1);
    const Vec3 rep = to_vec3(cell.rep);

    const double theta_s = std::acos(clamp_unit(cos_s));
    const double cos_b = clamp_unit(dot3(rep, xa));
    const double theta_b = std::acos(cos_b);
    const double phi_b = std::atan2(dot3(rep, e2), dot3(rep, e1));

    const double rad = cell.rad;
    const double c2r = std::cos(rad) * std::cos(rad);
    const double c2b = cos_b * cos_b;
    double dphi = kPi;
    if (rad < kPi / 2 && c2r > c2b) dphi = std::acos(clamp_unit(std::sqrt((c2r - c2b) / (1.0 - c2b))));
    const double phi_max = std::min(kPi, std::abs(phi_b) + dphi);
    const double theta_min = std::max(0.0, theta_b - rad);

    const double dd_min =
        theta_min - std::acos(clamp_unit(std::sin(theta_s) * std::sin(theta_min) * std::cos(phi_max) +
                                         std::cos(theta_s) * std::cos(theta_min)));
    const double d_sr = geodesic_distance(xs_in, cell.rep);
    const double d_star = dd_min > 0.0 ? std::max(0.0, d_sr - rad) : std::min(kPi, d_sr + rad);
    return 2.0 * d_star * dd_min;
}

}  // namespace

CostSpec CostSpec::p_euclidean(double p) {
    CostSpec s;
    s.family = CostFamily::PEuclidean;
    s.p = p;
    return s;
}

CostSpec CostSpec::sphere() {
    CostSpec s;
    s.family = CostFamily::SphereSqGeodesic;
    return s;
}

CostSpec CostSpec::noisy(double eta, double lambda, std::uint64_t seed) {
    CostSpec s;
    s.family = CostFamily::Noisy;
    s.eta = eta;
    s.lambda = lambda;
    s.noise_seed = seed;
    return s;
}

void CostSpec::validate() const {
    if (family == CostFamily::PEuclidean && !(p > 1.0 && std::isfinite(p))) {
        throw Error(ErrorKind::InvalidInput, "p-power cost requires p > 1");
    }
    if (family == CostFamily::Noisy) {
        if (!(eta >= 0.0) || !(lambda >= 0.0) || !std::isfinite(eta) || !std::isfinite(lambda)) {
            throw Error(ErrorKind::InvalidInput, "noise weights must be finite and nonnegative");
        }
        if (!(k_mag > 0.0)) throw Error(ErrorKind::InvalidInput, "k_mag must be positive");
    }
}

std::string CostSpec::name() const {
    switch (family) {
        case CostFamily::SqEuclidean: return "sqeucl";
        case CostFamily::PEuclidean: return "peucl";
        case CostFamily::SphereSqGeodesic: return "sphere";
        case CostFamily::Noisy: return "noisy";
    }
    return "unknown";
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(sq_distance(a, b));
}

double geodesic_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 3 && b.size() == 3) {
        // atan2 keeps precision for nearly parallel vectors where acos loses half the digits.
        const double cx = a[1] * b[2] - a[2] * b[1];
        const double cy = a[2] * b[0] - a[0] * b[2];
        const double cz = a[0] * b[1] - a[1] * b[0];
        return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(a, b));
    }
    return std::acos(clamp_unit(dot(a, b)));
}

double lipschitz_field(std::span<const double> x, std::span<const double> y, double k_mag) {
    if (x.size() != 2 || y.size() != 2) throw Error(ErrorKind::InvalidInput, "lipschitz field needs 2D points");
    const double phi = y[0] + y[1];
    const double kx = std::cos(phi) * x[0] + std::sin(phi) * x[1];
    const double w = 2.0 * kPi / k_mag;
    return std::sin(w * kx) / w;
}

double noise_value(std::uint64_t seed, Index i, Index j) {
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                              static_cast<std::uint32_t>(j);
    const std::uint64_t h = splitmix64_mix(seed ^ splitmix64_mix(key + SplitMix64::kGamma));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double geometric_cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y) {
    check_dims(x, y);
    switch (spec.family) {
        case CostFamily::SqEuclidean:
        case CostFamily::Noisy: return sq_distance(x, y);
        case CostFamily::PEuclidean: return std::pow(std::sqrt(sq_distance(x, y)), spec.p);
        case CostFamily::SphereSqGeodesic: {
            const double d = geodesic_distance(x, y);
            return d * d;
        }
    }
    return 0.0;
}

double cost(const CostSpec& spec, std::span<const double> x, std::span<const double> y) {
    double c = geometric_cost(spec, x, y);
    if (spec.family == CostFamily::Noisy && spec.lambda != 0.0) c += spec.lambda * lipschitz_field(x, y, spec.k_mag);
    return c;
}

double psi(const CostSpec& spec, std::span<const double> x1, std::span<const double> x2, std::span<const double> y) {
    return cost(spec, x1, y) - cost(spec, x2, y);
}

double geometric_psi(const CostSpec& spec, std::span<const double> x1, std::span<const double> x2,
                     std::span<const double> y) {
    return geometric_cost(spec, x1, y) - geometric_cost(spec, x2, y);
}

bool shields(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs,
             std::span<const double> ys, std::span<const double> yb, double slack) {
    const double delta = geometric_psi(spec, xa, xs, yb) - geometric_psi(spec, xa, xs, ys);
    return delta > slack;
}

double shield_slack(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs) {
    if (spec.family != CostFamily::Noisy) return 0.0;
    return 2.0 * spec.eta + 2.0 * spec.lambda * euclidean_distance(xa, xs);
}

double psi_hat(const CostSpec& spec, std::span<const double> xa, std::span<const double> xs, const Cell& cell) {
    check_dims(xa, cell.rep);
    if (cell.layer == 0) return geometric_psi(spec, xa, xs, cell.rep);
    switch (spec.family) {
        case CostFamily::SqEuclidean:
        case CostFamily::Noisy:
            return geometric_psi(spec, xa, xs, cell.rep) - 2.0 * euclidean_distance(xa, xs) * cell.rad;
        case CostFamily::PEuclidean: return psi_hat_peucl(spec.p, xa, xs, cell);
        case CostFamily::SphereSqGeodesic: return psi_hat_sphere(xa, xs, cell);
    }
    return kNoShield;
}

CostEvaluator::CostEvaluator(const CostSpec& spec, const PointCloud& x, const PointCloud& y, CostUnits cost_scale,
                             bool with_noise)
    : spec_(spec), x_(&x), y_(&y), cost_scale_(cost_scale), with_noise_(with_noise) {
    if (x.dim() != y.dim()) throw Error(ErrorKind::InvalidInput, "point dimension mismatch");
    if (spec.family == CostFamily::Noisy && spec.lambda != 0.0 && x.dim() != 2) {
        throw Error(ErrorKind::InvalidInput, "lipschitz field needs 2D points");
    }
    if (spec.family == CostFamily::SphereSqGeodesic && x.dim() != 3) {
        throw Error(ErrorKind::InvalidInput, "sphere cost needs 3D unit vectors");
    }
}

double CostEvaluator::raw(Index i, Index j) const {
    double c = cost(spec_, (*x_)[static_cast<std::size_t>(i)], (*y_)[static_cast<std::size_t>(j)]);
    if (spec_.family == CostFamily::Noisy && with_noise_ && spec_.eta != 0.0) {
        c += spec_.eta * noise_value(spec_.noise_seed, i, j);
    }
    return c;
}

double CostEvaluator::slack(Index xa, Index xs) const {
    if (spec_.family != CostFamily::Noisy) return 0.0;
    return 2.0 * noise_weight() +
           2.0 * spec_.lambda * euclidean_distance((*x_)[static_cast<std::size_t>(xa)], (*x_)[static_cast<std::size_t>(xs)]);
}

}  // namespace shieldot
