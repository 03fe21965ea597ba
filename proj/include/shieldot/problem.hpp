#pragma once

#include <cstdint>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"

namespace shieldot {

struct ProblemInstance {
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    CostSpec cost;
    CostUnits cost_scale = kDefaultCostScale;

    /// Throws Error(InvalidInput) unless both measures are valid, share
    /// dimension and mass_scale, and suit the cost family.
    void validate() const;

    /// Quantized cost between original points, noise included.
    CostEvaluator evaluator() const { return CostEvaluator(cost, mu.points, nu.points, cost_scale, true); }
};

/// FNV-1a over the binary content of the instance.
std::uint64_t problem_hash(const ProblemInstance& problem);

}  // namespace shieldot
