#pragma once

// Seeded test measures: anisotropic Gaussian bumps on grids, pseudo-Gaussian
// bumps on the unit sphere.

#include <cstdint>
#include <vector>

#include "shieldot/core.hpp"

namespace shieldot {

enum class MaskKind { None, Random, HalfPlane, Disc };

struct GridGenOptions {
    std::vector<int> shape;
    std::uint64_t seed = 0;
    int gaussians = 3;
    MaskKind mask = MaskKind::None;
    Mass mass_scale = kDefaultMassScale;
};

/// Throws Error(InvalidInput) for fewer than 2 or more than 3 axes, extents
/// below 2, or mass_scale below the cell count.
DiscreteMeasure gen_grid_measure(const GridGenOptions& options);

struct SphereGenOptions {
    std::size_t count = 256;
    std::uint64_t seed = 0;
    int bumps = 3;
    Mass mass_scale = kDefaultMassScale;
};

DiscreteMeasure gen_sphere_measure(const SphereGenOptions& options);

/// One floor unit per cell, the remaining mass split in proportion to the
/// density by largest remainder (ties to the lower index). Uniform when the
/// density vanishes.
std::vector<Mass> discretize_density(const std::vector<double>& density, Mass mass_scale);

}  // namespace shieldot
