#pragma once

// Executable oracles: dense reference solve, dual checks, exhaustive
// shielding validation and explicit short-cut construction.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"
#include "shieldot/netsolver.hpp"
#include "shieldot/problem.hpp"
#include "shieldot/shield.hpp"

namespace shieldot {

inline constexpr std::size_t kDefaultDenseCap = 10'000'000;

struct DenseResult {
    SparseCoupling pi;
    DualPotentials duals;
    Objective objective = 0;
    SolverStats stats;
};

/// Network simplex over the full product. Throws Error(InvalidInput) when
/// |X|*|Y| exceeds cap.
DenseResult dense_solve(const ProblemInstance& problem, std::size_t cap = kDefaultDenseCap);

struct CheckResult {
    bool ok = true;
    Index x = -1;
    Index y = -1;
    std::string message;

    explicit operator bool() const noexcept { return ok; }
    static CheckResult pass() { return {}; }
    static CheckResult fail(Index x, Index y, std::string message) { return {false, x, y, std::move(message)}; }
};

CheckResult check_marginals(const SparseCoupling& pi, const std::vector<Mass>& mu, const std::vector<Mass>& nu);

/// alpha + beta <= c on N and equality on spt pi, in cost units.
CheckResult check_local_duals(const CostEvaluator& cost, const Neighbourhood& n, const SparseCoupling& pi,
                              const DualPotentials& duals);

/// alpha + beta <= c on every pair.
CheckResult check_full_duals(const CostEvaluator& cost, const DualPotentials& duals);

/// Every pair outside N is shielded by a support pair (xs, ys) with
/// (xA, ys) in N, tested exactly on quantized costs.
CheckResult check_shielding(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n);

/// Support pairs (x_2,y_2) .. (x_n,y_n) of a short-cut for (xA, yB).
struct ShortCut {
    std::vector<std::pair<Index, Index>> path;
};

/// Path construction through shielding pairs. Throws Error(InvalidInput)
/// for a pair inside N and Error(Verification) when no shielding pair exists
/// or a pair repeats.
ShortCut build_shortcut(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n, Index xa, Index yb);

/// Link pairs in N, path pairs in spt pi, no repeats, and
/// c(x1,yB) >= c(x1,y2) + sum_i [c(x_i,y_{i+1}) - c(x_i,y_i)] exactly.
CheckResult check_shortcut(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n, Index xa,
                           Index yb, const ShortCut& shortcut);

struct RegularityDiagnostics {
    double measured_L = 0.0;
    double measured_D = 0.0;
    double measured_q = 0.0;
};

/// Cosine of half the widest angular gap left by the directions from x to
/// its candidates (2D exact; sampled directions otherwise). -1 without
/// candidates.
double coverage_cosine(const PointCloud& points, Index x, std::span<const Index> candidates);

RegularityDiagnostics measure_regularity(const SparseCoupling& pi, const PointCloud& x_points,
                                         const PointCloud& y_points, const CandidateSets& candidates,
                                         std::uint64_t seed = 0);

enum class CertificateKind { LocalOptimal, GloballyOptimal, ShieldingValid, ShortCutFound };

struct Certificate {
    CertificateKind kind = CertificateKind::LocalOptimal;
    std::uint64_t problem_hash = 0;
    Objective objective = 0;
    std::optional<std::pair<Index, Index>> witness;
    std::vector<std::pair<Index, Index>> path;

    std::string kind_name() const;
};

}  // namespace shieldot
