#pragma once

// Text formats: .pts point measures, .dgrid grid measures, .cpl couplings.
// Readers throw Error(Io) on missing or malformed files.

#include <filesystem>
#include <string>

#include "shieldot/core.hpp"

namespace shieldot {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

DiscreteMeasure read_pts(const std::filesystem::path& path);
void write_pts(const std::filesystem::path& path, const DiscreteMeasure& m);

DiscreteMeasure read_dgrid(const std::filesystem::path& path);
/// m must carry a grid_shape.
void write_dgrid(const std::filesystem::path& path, const DiscreteMeasure& m);

/// Dispatches on the header keyword.
DiscreteMeasure read_measure(const std::filesystem::path& path);
/// .dgrid for grid measures, .pts otherwise.
void write_measure(const std::filesystem::path& path, const DiscreteMeasure& m);

struct CouplingFile {
    SparseCoupling pi;
    Mass mass_scale = 0;
};

CouplingFile read_cpl(const std::filesystem::path& path);
void write_cpl(const std::filesystem::path& path, const SparseCoupling& pi, Mass mass_scale);

/// Writes text to path, throwing Error(Io) on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace shieldot
