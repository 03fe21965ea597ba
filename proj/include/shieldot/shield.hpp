#pragma once

// Shielding neighbourhoods: candidate sets S(x), the hierarchical search for
// unshielded y and the direct rectangle method on Cartesian grids.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shieldot/core.hpp"
#include "shieldot/costs.hpp"
#include "shieldot/hierarchy.hpp"

namespace shieldot {

enum class CandidateKind { GridAxes, KNearest };

struct CandidateScheme {
    CandidateKind kind = CandidateKind::KNearest;
    int k = 0;

    static CandidateScheme axes() { return {CandidateKind::GridAxes, 0}; }
    static CandidateScheme knn(int k) { return {CandidateKind::KNearest, k}; }
    /// "axes" or "knn:<k>".
    static CandidateScheme parse(const std::string& text);
    std::string name() const;
};

enum class ShieldMethod { Tree, Grid };

struct ShieldStats {
    std::uint64_t psi_hat_calls = 0;
    std::uint64_t missed_total = 0;
    std::size_t neighbourhood_size = 0;

    ShieldStats& operator+=(const ShieldStats& o) {
        psi_hat_calls += o.psi_hat_calls;
        missed_total += o.missed_total;
        neighbourhood_size += o.neighbourhood_size;
        return *this;
    }
};

/// S(x) for every cell of one layer, in CSR form.
class CandidateSets {
public:
    CandidateSets() = default;
    explicit CandidateSets(const std::vector<std::vector<Index>>& rows);
    std::size_t size() const noexcept { return offsets_.size() - 1; }
    std::span<const Index> of(Index x) const {
        const auto i = static_cast<std::size_t>(x);
        return {items_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<Index> items_;
};

/// GridAxes needs a lattice on tree_x; KNearest uses Euclidean distance
/// between representatives (monotone in geodesic distance on the sphere).
CandidateSets make_candidates(const HierarchicalPartition& tree_x, int layer, const CandidateScheme& scheme);

struct ShieldCandidate {
    Index xs;
    Index ys;
};

/// Everything shield needs for one layer problem. cost evaluates between the
/// layer's representatives of X and Y.
struct ShieldContext {
    const HierarchicalPartition* tree_x = nullptr;
    const HierarchicalPartition* tree_y = nullptr;
    int layer = 0;
    const CostEvaluator* cost = nullptr;
    const CandidateSets* candidates = nullptr;
    ShieldMethod method = ShieldMethod::Tree;
};

/// Exact shielding test on quantized costs:
/// q(xA,yB) - q(xs,yB) - q(xA,ys) + q(xs,ys) > 0.
bool shields_exact(const CostEvaluator& cost, Index xa, Index xs, Index ys, Index yb);

/// The miss set: layer cells y of the search root that no candidate shields.
std::vector<Index> search_tree(Index xa, std::span<const ShieldCandidate> candidates, const ShieldContext& ctx,
                               ShieldStats* stats = nullptr);

/// Superset of the miss set from the grid-aligned rectangle spanned by the
/// axis neighbours; exact for clean squared Euclidean costs.
std::vector<Index> grid_miss(Index xa, std::span<const Index> t, const ShieldContext& ctx);

/// spt pi plus candidate targets plus miss sets, row by row.
Neighbourhood shield(const SparseCoupling& pi, const ShieldContext& ctx, ShieldStats* stats = nullptr);

}  // namespace shieldot
