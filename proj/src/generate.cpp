#include "shieldot/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shieldot/random.hpp"

namespace shieldot {

std::vector<Mass> discretize_density(const std::vector<double>& density, Mass mass_scale) {
    const auto n = static_cast<Mass>(density.size());
    if (n == 0) throw Error(ErrorKind::InvalidInput, "empty density");
    if (mass_scale < n) throw Error(ErrorKind::InvalidInput, "mass_scale is below the number of cells");
    const Mass rest = mass_scale - n;
    double total = 0.0;
    for (double d : density) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorKind::InvalidInput, "density must be finite and nonnegative");
        total += d;
    }
    std::vector<Mass> out(density.size(), 1);
    std::vector<double> frac(density.size(), 0.0);
    Mass given = 0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double quota = total > 0.0 ? static_cast<double>(rest) * (density[i] / total)
                                         : static_cast<double>(rest) / static_cast<double>(n);
        const auto whole = static_cast<Mass>(std::floor(quota));
        out[i] += whole;
        given += whole;
        frac[i] = quota - static_cast<double>(whole);
    }
    // Float error can push the floors past rest; take the excess back from
    // the largest cells.
    while (given > rest) {
        const auto it = std::max_element(out.begin(), out.end());
        --*it;
        --given;
    }
    std::vector<std::size_t> order(density.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; given < rest; k = (k + 1) % order.size()) {
        ++out[order[k]];
        ++given;
    }
    return out;
}

DiscreteMeasure gen_grid_measure(const GridGenOptions& options) {
    const auto& shape = options.shape;
    const int dim = static_cast<int>(shape.size());
    if (dim < 2 || dim > 3) throw Error(ErrorKind::InvalidInput, "grid generation supports 2 or 3 axes");
    for (int s : shape) {
        if (s < 2) throw Error(ErrorKind::InvalidInput, "grid extent must be at least 2");
    }
    std::size_t count = 1;
    for (int s : shape) count *= static_cast<std::size_t>(s);
    SplitMix64 rng(options.seed);

    struct Bump {
        std::vector<double> center;
        std::vector<double> precision;  // dim x dim, row-major
        double amplitude;
    };
    std::vector<Bump> bumps;
    for (int g = 0; g < options.gaussians; ++g) {
        Bump b;
        for (int d = 0; d < dim; ++d) b.center.push_back(rng.uniform(0.0, shape[d] - 1.0));
        std::vector<double> eig(static_cast<std::size_t>(dim));
        for (double& e : eig) e = rng.uniform(1.8, 100.0);
        // Random orthonormal frame by Gram-Schmidt on Gaussian vectors.
        std::vector<std::vector<double>> q;
        while (static_cast<int>(q.size()) < dim) {
            std::vector<double> v(static_cast<std::size_t>(dim));
            for (double& c : v) c = rng.normal();
            for (const auto& u : q) {
                const double dot = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
                for (int d = 0; d < dim; ++d) v[d] -= dot * u[d];
            }
            const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            if (norm < 1e-8) continue;
            for (double& c : v) c /= norm;
            q.push_back(std::move(v));
        }
        b.precision.assign(static_cast<std::size_t>(dim * dim), 0.0);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int k = 0; k < dim; ++k) s += q[k][i] * q[k][j] / eig[k];
                b.precision[i * dim + j] = s;
            }
        }
        b.amplitude = rng.uniform(0.5, 1.5);
        bumps.push_back(std::move(b));
    }

    MaskKind mask = options.mask;
    if (mask == MaskKind::Random) mask = rng.below(2) == 0 ? MaskKind::HalfPlane : MaskKind::Disc;
    std::vector<double> mask_center(static_cast<std::size_t>(dim)), mask_normal(static_cast<std::size_t>(dim));
    double mask_radius = 0.0;
    if (mask != MaskKind::None) {
        for (int d = 0; d < dim; ++d) {
            mask_center[d] = rng.uniform(0.0, shape[d] - 1.0);
            mask_normal[d] = rng.normal();
        }
        const double ext = *std::max_element(shape.begin(), shape.end());
        mask_radius = rng.uniform(0.25, 0.6) * ext;
    }

    std::vector<double> density(count, 0.0);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> diff(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < count; ++i) {
        double f = 0.0;
        for (const auto& b : bumps) {
            for (int d = 0; d < dim; ++d) diff[d] = idx[d] - b.center[d];
            double quad = 0.0;
            for (int r = 0; r < dim; ++r) {
                for (int c = 0; c < dim; ++c) quad += diff[r] * b.precision[r * dim + c] * diff[c];
            }
            f += b.amplitude * std::exp(-0.5 * quad);
        }
        if (mask == MaskKind::HalfPlane) {
            double side = 0.0;
            for (int d = 0; d < dim; ++d) side += (idx[d] - mask_center[d]) * mask_normal[d];
            if (side < 0.0) f = 0.0;
        } else if (mask == MaskKind::Disc) {
            double r2 = 0.0;
            for (int d = 0; d < dim; ++d) r2 += (idx[d] - mask_center[d]) * (idx[d] - mask_center[d]);
            if (r2 > mask_radius * mask_radius) f = 0.0;
        }
        density[i] = f;
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
        }
    }
    return make_grid_measure(shape, discretize_density(density, options.mass_scale), options.mass_scale);
}

DiscreteMeasure gen_sphere_measure(const SphereGenOptions& options) {
    if (options.count < 1) throw Error(ErrorKind::InvalidInput, "sphere measure needs at least one point");
    SplitMix64 rng(options.seed);
    auto unit = [&] {
        for (;;) {
            double v[3] = {rng.normal(), rng.normal(), rng.normal()};
            const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (norm < 1e-8) continue;
            return std::vector<double>{v[0] / norm, v[1] / norm, v[2] / norm};
        }
    };
    PointCloud points(3);
    for (std::size_t i = 0; i < options.count; ++i) points.push_back(unit());

    struct Bump {
        std::vector<double> center;
        double sigma;
        double amplitude;
    };
    std::vector<Bump> bumps;
    for (int b = 0; b < options.bumps; ++b) {
        auto c = unit();
        const double sigma = rng.uniform(0.01, 0.2);
        bumps.push_back({std::move(c), sigma, rng.uniform(0.5, 1.5)});
    }
    std::vector<double> density(options.count, 0.0);
    for (std::size_t i = 0; i < options.count; ++i) {
        const auto p = points[i];
        for (const auto& b : bumps) {
            const double dot = std::clamp(p[0] * b.center[0] + p[1] * b.center[1] + p[2] * b.center[2], -1.0, 1.0);
            const double d = std::acos(dot);
            density[i] += b.amplitude * std::exp(-d * d / (2.0 * b.sigma));
        }
    }
    return DiscreteMeasure{std::move(points), discretize_density(density, options.mass_scale), options.mass_scale,
                           std::nullopt};
}

}  // namespace shieldot
