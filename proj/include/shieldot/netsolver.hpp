#pragma once

// Exact transportation solver on a sparse bipartite arc set: primal
// network simplex with block pivoting, strongly feasible spanning trees and
// warm starts from a previous basis or from dual potentials.

#include <cstdint>
#include <functional>
#include <vector>

#include "shieldot/core.hpp"

namespace shieldot {

/// Restricted transport problem; costs[k] belongs to the k-th pair of arcs
/// in flat row order.
struct SparseTransportLP {
    std::vector<Mass> supplies;
    std::vector<Mass> demands;
    Neighbourhood arcs;
    std::vector<CostUnits> costs;

    static SparseTransportLP build(std::vector<Mass> supplies, std::vector<Mass> demands, Neighbourhood arcs,
                                   const std::function<CostUnits(Index, Index)>& cost);
};

/// Spanning tree over x nodes 0..nx-1, y nodes nx..nx+ny-1 and the root
/// nx+ny. Entry v describes the tree arc between v and parent[v]; arc_x is
/// -1 for the artificial arc joining v to the root.
struct Basis {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<Index> parent;
    std::vector<Index> arc_x;
    std::vector<Index> arc_y;
    std::vector<CostUnits> arc_cost;
    std::vector<std::int64_t> potential;

    bool empty() const noexcept { return parent.empty(); }
};

enum class WarmKind { None, Basis, Duals };

struct WarmStart {
    WarmKind kind = WarmKind::None;
    const Basis* basis = nullptr;
    const DualPotentials* duals = nullptr;

    static WarmStart none() { return {}; }
    static WarmStart from(const Basis& b) { return {WarmKind::Basis, &b, nullptr}; }
    static WarmStart from(const DualPotentials& d) { return {WarmKind::Duals, nullptr, &d}; }
};

struct SolverOptions {
    /// Arcs scanned per pricing block; 0 selects ceil(sqrt(m)).
    std::size_t block_size = 0;
};

struct SolverStats {
    std::uint64_t pivots = 0;
    std::uint64_t degenerate_pivots = 0;
    bool warm_used = false;
    bool bland_used = false;
};

struct LocalSolution {
    SparseCoupling pi;
    DualPotentials duals;
    Basis basis;
    Objective objective = 0;
    SolverStats stats;
};

/// Exactly optimal coupling and duals of the restricted problem. Throws
/// Error(Infeasible, "restricted problem infeasible") when no transport plan
/// exists over the arc set.
LocalSolution solve_local(const SparseTransportLP& lp, const WarmStart& warm = {}, const SolverOptions& options = {});

}  // namespace shieldot
