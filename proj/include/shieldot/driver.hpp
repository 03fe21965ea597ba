#pragma once

// Outer algorithms: the sparse fixed-point iteration on one layer and the
// coarse-to-fine multi-scale solve.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"
#include "shieldot/hierarchy.hpp"
#include "shieldot/netsolver.hpp"
#include "shieldot/problem.hpp"
#include "shieldot/shield.hpp"

namespace shieldot {

enum class WarmPolicy { Basis, Duals, None };

/// Seen after every shield call.
struct ShieldObservation {
    int layer;
    int iteration;
    const CostEvaluator& cost;
    const std::vector<Mass>& mu;
    const std::vector<Mass>& nu;
    const SparseCoupling& pi;
    const Neighbourhood& n;
};

struct SolveOptions {
    std::optional<ShieldMethod> method;
    std::optional<CandidateScheme> candidates;
    /// 0 selects the larger default depth of the two point sets.
    int depth = 0;
    WarmPolicy warm = WarmPolicy::Basis;
    bool certify = false;
    int max_iter = 1000;
    SolverOptions solver;
    std::function<void(const ShieldObservation&)> on_shield;
};

struct LevelReport {
    int layer = 0;
    int iterations = 0;
    std::vector<Objective> objectives;
    /// |N_k| of the neighbourhood each solve ran on.
    std::vector<std::size_t> n_sizes;
    std::uint64_t psi_hat_calls = 0;
    std::uint64_t missed_total = 0;
    std::uint64_t pivots = 0;
    std::uint64_t degenerate_pivots = 0;
    double t_solve_ms = 0.0;
    double t_shield_ms = 0.0;

    std::size_t max_n() const;
    std::size_t sum_n() const;
};

struct SolveReport {
    std::uint64_t problem_hash = 0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    int dim = 0;
    CostSpec cost;
    Mass mass_scale = 0;
    CostUnits cost_scale = 0;
    int depth = 0;
    ShieldMethod method = ShieldMethod::Tree;
    CandidateScheme candidates;
    WarmPolicy warm = WarmPolicy::Basis;
    std::vector<LevelReport> levels;
    Objective final_objective = 0;
    bool certified = false;
    /// First violated dual constraint when certification fails.
    std::optional<std::pair<Index, Index>> witness;
    double t_total_ms = 0.0;

    const LevelReport& finest() const { return levels.back(); }
    std::uint64_t total_pivots() const;
};

/// One layer of the multi-scale problem.
struct LayerProblem {
    int layer = 0;
    const std::vector<Mass>* mu = nullptr;
    const std::vector<Mass>* nu = nullptr;
    ShieldContext ctx;
};

struct SparseResult {
    SparseCoupling pi;
    Neighbourhood n;
    DualPotentials duals;
    Objective objective = 0;
};

/// Alternates local solves and shielding until the objective repeats.
/// Throws Error(Infeasible) for an infeasible N1 and Error(Verification)
/// when the objective increases or max_iter is reached.
SparseResult solve_sparse(const LayerProblem& problem, Neighbourhood n1, const SolveOptions& options,
                          LevelReport* report = nullptr);

/// children(x) x children(y) over spt pi at the given (coarse) layer.
Neighbourhood refine_neighbourhood(const HierarchicalPartition& tree_x, const HierarchicalPartition& tree_y, int layer,
                                   const SparseCoupling& pi);

struct MultiScaleResult {
    SparseCoupling pi;
    DualPotentials duals;
    SolveReport report;
};

Metric metric_for(const CostSpec& cost);
TreeOptions tree_options_for(const DiscreteMeasure& measure, int depth);
/// Depth shared by both trees when options.depth is 0.
int shared_depth(const ProblemInstance& problem, int requested);
ShieldMethod default_method(const ProblemInstance& problem);
CandidateScheme default_candidates(const ProblemInstance& problem);

MultiScaleResult solve_multiscale(const ProblemInstance& problem, const SolveOptions& options = {});
/// Trees must share their depth and be built over mu and nu.
MultiScaleResult solve_multiscale(const ProblemInstance& problem, const HierarchicalPartition& tree_x,
                                  const HierarchicalPartition& tree_y, const SolveOptions& options = {});

}  // namespace shieldot
