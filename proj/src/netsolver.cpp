#include "shieldot/netsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shieldot {

SparseTransportLP SparseTransportLP::build(std::vector<Mass> supplies, std::vector<Mass> demands, Neighbourhood arcs,
                                           const std::function<CostUnits(Index, Index)>& cost) {
    SparseTransportLP lp;
    lp.costs.resize(arcs.size());
    std::size_t k = 0;
    for (std::size_t x = 0; x < arcs.nx(); ++x) {
        for (Index y : arcs.row(x)) lp.costs[k++] = cost(static_cast<Index>(x), y);
    }
    lp.supplies = std::move(supplies);
    lp.demands = std::move(demands);
    lp.arcs = std::move(arcs);
    return lp;
}

namespace {

constexpr std::int64_t kMaxArtificialCost = std::int64_t{1} << 60;

class NetworkSimplex {
public:
    NetworkSimplex(const SparseTransportLP& lp, const std::vector<CostUnits>& costs, const SolverOptions& options)
        : lp_(lp), nx_(lp.supplies.size()), ny_(lp.demands.size()) {
        n_nodes_ = nx_ + ny_ + 1;
        root_ = static_cast<Index>(nx_ + ny_);
        m_real_ = lp.arcs.size();
        src_.reserve(m_real_);
        tgt_.reserve(m_real_);
        for (std::size_t x = 0; x < nx_; ++x) {
            for (Index y : lp.arcs.row(x)) {
                src_.push_back(static_cast<Index>(x));
                tgt_.push_back(static_cast<Index>(nx_) + y);
            }
        }
        cost_ = costs;
        supply_.resize(n_nodes_, 0);
        for (std::size_t x = 0; x < nx_; ++x) supply_[x] = lp.supplies[x];
        for (std::size_t y = 0; y < ny_; ++y) supply_[nx_ + y] = -lp.demands[y];
        block_size_ = options.block_size;
    }

    // Appends an arc that exists only to carry a warm basis; priced like an
    // artificial arc so it never carries flow in a solution of the true arc set.
    std::size_t add_extra(Index x, Index y, CostUnits true_cost) {
        src_.push_back(x);
        tgt_.push_back(static_cast<Index>(nx_) + y);
        cost_.push_back(0);
        extra_true_cost_.push_back(true_cost);
        return src_.size() - 1;
    }

    void finalize_arcs() {
        m_search_ = src_.size();
        __int128 max_abs = 0;
        for (std::size_t e = 0; e < m_real_; ++e) max_abs = std::max<__int128>(max_abs, cost_[e] < 0 ? -static_cast<__int128>(cost_[e]) : cost_[e]);
        for (CostUnits c : extra_true_cost_) max_abs = std::max<__int128>(max_abs, c < 0 ? -static_cast<__int128>(c) : c);
        const __int128 big = (max_abs + 1) * static_cast<__int128>(n_nodes_);
        if (big > kMaxArtificialCost) throw Error(ErrorKind::InvalidInput, "cost range too large for exact solve; lower cost_scale");
        big_m_ = static_cast<std::int64_t>(big);
        for (std::size_t e = m_real_; e < m_search_; ++e) cost_[e] = big_m_;
        const std::size_t m_total = m_search_ + n_nodes_ - 1;
        src_.resize(m_total);
        tgt_.resize(m_total);
        cost_.resize(m_total, big_m_);
        flow_.assign(m_total, 0);
        state_.assign(m_total, kLower);
        for (std::size_t v = 0; v + 1 < n_nodes_; ++v) {
            const std::size_t a = m_search_ + v;
            if (supply_[v] > 0) {
                src_[a] = static_cast<Index>(v);
                tgt_[a] = root_;
            } else {
                src_[a] = root_;
                tgt_[a] = static_cast<Index>(v);
            }
            cost_[a] = big_m_;
        }
        parent_.assign(n_nodes_, -1);
        pred_.assign(n_nodes_, -1);
        forward_.assign(n_nodes_, 0);
        depth_.assign(n_nodes_, 0);
        pi_.assign(n_nodes_, 0);
        first_child_.assign(n_nodes_, -1);
        next_sib_.assign(n_nodes_, -1);
        prev_sib_.assign(n_nodes_, -1);
        if (block_size_ == 0) {
            block_size_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(m_search_, 1))))));
        }
    }

    void init_cold() {
        std::fill(first_child_.begin(), first_child_.end(), -1);
        for (std::size_t e = 0; e < m_search_; ++e) {
            state_[e] = kLower;
            flow_[e] = 0;
        }
        for (std::size_t v = 0; v + 1 < n_nodes_; ++v) {
            const std::size_t a = m_search_ + v;
            state_[a] = kTree;
            parent_[v] = root_;
            pred_[v] = static_cast<std::int64_t>(a);
            depth_[v] = 1;
            if (src_[a] == static_cast<Index>(v)) {
                forward_[v] = 1;
                flow_[a] = supply_[v];
                pi_[v] = -big_m_;
            } else {
                forward_[v] = 0;
                flow_[a] = -supply_[v];
                pi_[v] = big_m_;
            }
            link_child(root_, static_cast<Index>(v));
        }
        pi_[static_cast<std::size_t>(root_)] = 0;
    }

    /// arc_of[v] is the arc joining v to parent[v]. Returns false if the tree
    /// is not a spanning tree or yields negative flows.
    bool init_from_tree(const std::vector<Index>& parent, const std::vector<std::size_t>& arc_of) {
        std::fill(first_child_.begin(), first_child_.end(), -1);
        for (std::size_t e = 0; e < state_.size(); ++e) {
            state_[e] = kLower;
            flow_[e] = 0;
        }
        for (std::size_t v = 0; v + 1 < n_nodes_; ++v) {
            const Index p = parent[v];
            const std::size_t a = arc_of[v];
            if (p < 0 || static_cast<std::size_t>(p) >= n_nodes_) return false;
            const bool fwd = src_[a] == static_cast<Index>(v) && tgt_[a] == p;
            const bool bwd = tgt_[a] == static_cast<Index>(v) && src_[a] == p;
            if (!fwd && !bwd) return false;
            if (state_[a] == kTree) return false;
            parent_[v] = p;
            pred_[v] = static_cast<std::int64_t>(a);
            forward_[v] = fwd ? 1 : 0;
            state_[a] = kTree;
            link_child(p, static_cast<Index>(v));
        }
        parent_[static_cast<std::size_t>(root_)] = -1;
        pred_[static_cast<std::size_t>(root_)] = -1;
        // BFS order from the root: depths and potentials.
        std::vector<Index> order;
        order.reserve(n_nodes_);
        order.push_back(root_);
        depth_[static_cast<std::size_t>(root_)] = 0;
        pi_[static_cast<std::size_t>(root_)] = 0;
        for (std::size_t h = 0; h < order.size(); ++h) {
            const Index u = order[h];
            for (Index w = first_child_[static_cast<std::size_t>(u)]; w != -1; w = next_sib_[static_cast<std::size_t>(w)]) {
                const auto wi = static_cast<std::size_t>(w);
                depth_[wi] = depth_[static_cast<std::size_t>(u)] + 1;
                const std::int64_t c = cost_[static_cast<std::size_t>(pred_[wi])];
                pi_[wi] = forward_[wi] ? pi_[static_cast<std::size_t>(u)] - c : pi_[static_cast<std::size_t>(u)] + c;
                order.push_back(w);
                if (order.size() > n_nodes_) return false;
            }
        }
        if (order.size() != n_nodes_) return false;
        // Flows from the leaves upward.
        std::vector<std::int64_t> out(n_nodes_, 0);
        for (std::size_t v = 0; v < n_nodes_; ++v) out[v] = supply_[v];
        for (std::size_t h = order.size(); h-- > 1;) {
            const auto v = static_cast<std::size_t>(order[h]);
            const std::int64_t f = forward_[v] ? out[v] : -out[v];
            if (f < 0) return false;
            flow_[static_cast<std::size_t>(pred_[v])] = f;
            out[static_cast<std::size_t>(parent_[v])] += out[v];
        }
        return true;
    }

    void run(SolverStats& stats) {
        std::uint64_t stall = 0;
        const std::uint64_t stall_limit = 10 * static_cast<std::uint64_t>(std::max<std::size_t>(m_search_, 1));
        bool bland = false;
        for (;;) {
            const std::int64_t e = bland ? find_entering_bland() : find_entering_block();
            if (e < 0) break;
            const bool degenerate = pivot(static_cast<std::size_t>(e));
            ++stats.pivots;
            if (degenerate) {
                ++stats.degenerate_pivots;
                if (++stall > stall_limit && !bland) {
                    bland = true;
                    stats.bland_used = true;
                }
            } else {
                stall = 0;
                bland = false;
            }
        }
    }

    bool has_artificial_flow() const {
        for (std::size_t e = m_search_; e < flow_.size(); ++e) {
            if (flow_[e] > 0) return true;
        }
        for (std::size_t e = m_real_; e < m_search_; ++e) {
            if (flow_[e] > 0) return true;
        }
        return false;
    }

    void extract(LocalSolution& out, const std::vector<CostUnits>& true_costs) const {
        std::vector<SparseCoupling::Triplet> trip;
        Objective obj = 0;
        for (std::size_t e = 0; e < m_real_; ++e) {
            if (flow_[e] > 0) {
                trip.push_back({src_[e], tgt_[e] - static_cast<Index>(nx_), flow_[e]});
                obj += static_cast<Objective>(true_costs[e]) * flow_[e];
            }
        }
        out.pi = SparseCoupling::from_triplets(nx_, ny_, std::move(trip));
        out.objective = obj;
        out.duals.alpha.resize(nx_);
        out.duals.beta.resize(ny_);
        for (std::size_t x = 0; x < nx_; ++x) out.duals.alpha[x] = -pi_[x];
        for (std::size_t y = 0; y < ny_; ++y) out.duals.beta[y] = pi_[nx_ + y];

        Basis& b = out.basis;
        b.nx = nx_;
        b.ny = ny_;
        b.parent.resize(n_nodes_ - 1);
        b.arc_x.resize(n_nodes_ - 1);
        b.arc_y.resize(n_nodes_ - 1);
        b.arc_cost.resize(n_nodes_ - 1);
        b.potential.assign(pi_.begin(), pi_.end());
        for (std::size_t v = 0; v + 1 < n_nodes_; ++v) {
            b.parent[v] = parent_[v];
            const auto a = static_cast<std::size_t>(pred_[v]);
            if (a >= m_search_) {
                b.arc_x[v] = -1;
                b.arc_y[v] = -1;
                b.arc_cost[v] = 0;
            } else {
                b.arc_x[v] = src_[a];
                b.arc_y[v] = tgt_[a] - static_cast<Index>(nx_);
                b.arc_cost[v] = a < m_real_ ? true_costs[a] : extra_true_cost_[a - m_real_];
            }
        }
    }

    std::size_t m_real() const { return m_real_; }
    std::size_t artificial_arc(std::size_t v) const { return m_search_ + v; }
    std::size_t n_nodes() const { return n_nodes_; }
    std::int64_t potential(std::size_t v) const { return pi_[v]; }

private:
    static constexpr std::uint8_t kTree = 0;
    static constexpr std::uint8_t kLower = 1;

    std::int64_t reduced_cost(std::size_t e) const {
        return cost_[e] + pi_[static_cast<std::size_t>(src_[e])] - pi_[static_cast<std::size_t>(tgt_[e])];
    }

    std::int64_t find_entering_block() {
        if (m_search_ == 0) return -1;
        std::int64_t best = 0;
        std::int64_t in = -1;
        std::size_t cnt = block_size_;
        std::size_t e = next_arc_;
        for (std::size_t scanned = 0; scanned < m_search_; ++scanned) {
            if (state_[e] == kLower) {
                const std::int64_t rc = reduced_cost(e);
                if (rc < best) {
                    best = rc;
                    in = static_cast<std::int64_t>(e);
                }
            }
            if (++e == m_search_) e = 0;
            if (--cnt == 0) {
                if (in >= 0) {
                    next_arc_ = e;
                    return in;
                }
                cnt = block_size_;
            }
        }
        next_arc_ = e;
        return in;
    }

    std::int64_t find_entering_bland() const {
        for (std::size_t e = 0; e < m_search_; ++e) {
            if (state_[e] == kLower && reduced_cost(e) < 0) return static_cast<std::int64_t>(e);
        }
        return -1;
    }

    Index find_join(Index u, Index v) const {
        while (u != v) {
            if (depth_[static_cast<std::size_t>(u)] > depth_[static_cast<std::size_t>(v)]) {
                u = parent_[static_cast<std::size_t>(u)];
            } else if (depth_[static_cast<std::size_t>(v)] > depth_[static_cast<std::size_t>(u)]) {
                v = parent_[static_cast<std::size_t>(v)];
            } else {
                u = parent_[static_cast<std::size_t>(u)];
                v = parent_[static_cast<std::size_t>(v)];
            }
        }
        return u;
    }

    void link_child(Index p, Index v) {
        const auto pi = static_cast<std::size_t>(p);
        const auto vi = static_cast<std::size_t>(v);
        prev_sib_[vi] = -1;
        next_sib_[vi] = first_child_[pi];
        if (first_child_[pi] != -1) prev_sib_[static_cast<std::size_t>(first_child_[pi])] = v;
        first_child_[pi] = v;
    }

    void unlink_child(Index p, Index v) {
        const auto vi = static_cast<std::size_t>(v);
        const Index prev = prev_sib_[vi];
        const Index next = next_sib_[vi];
        if (prev != -1) {
            next_sib_[static_cast<std::size_t>(prev)] = next;
        } else {
            first_child_[static_cast<std::size_t>(p)] = next;
        }
        if (next != -1) prev_sib_[static_cast<std::size_t>(next)] = prev;
        prev_sib_[vi] = next_sib_[vi] = -1;
    }

    /// Returns true for a degenerate pivot.
    bool pivot(std::size_t in) {
        const Index first = src_[in];
        const Index second = tgt_[in];
        const Index join = find_join(first, second);

        std::int64_t delta = std::numeric_limits<std::int64_t>::max();
        Index u_out = -1;
        int side = 0;
        for (Index u = first; u != join; u = parent_[static_cast<std::size_t>(u)]) {
            const auto ui = static_cast<std::size_t>(u);
            if (forward_[ui]) {
                const std::int64_t d = flow_[static_cast<std::size_t>(pred_[ui])];
                if (d < delta) {
                    delta = d;
                    u_out = u;
                    side = 1;
                }
            }
        }
        for (Index u = second; u != join; u = parent_[static_cast<std::size_t>(u)]) {
            const auto ui = static_cast<std::size_t>(u);
            if (!forward_[ui]) {
                const std::int64_t d = flow_[static_cast<std::size_t>(pred_[ui])];
                if (d <= delta) {
                    delta = d;
                    u_out = u;
                    side = 2;
                }
            }
        }
        if (u_out < 0) throw Error(ErrorKind::Infeasible, "unbounded restricted problem");

        if (delta > 0) {
            flow_[in] += delta;
            for (Index u = first; u != join; u = parent_[static_cast<std::size_t>(u)]) {
                const auto ui = static_cast<std::size_t>(u);
                flow_[static_cast<std::size_t>(pred_[ui])] += forward_[ui] ? -delta : delta;
            }
            for (Index u = second; u != join; u = parent_[static_cast<std::size_t>(u)]) {
                const auto ui = static_cast<std::size_t>(u);
                flow_[static_cast<std::size_t>(pred_[ui])] += forward_[ui] ? delta : -delta;
            }
        }

        const Index u_in = side == 1 ? first : second;
        const Index v_in = side == 1 ? second : first;
        state_[static_cast<std::size_t>(pred_[static_cast<std::size_t>(u_out)])] = kLower;
        state_[in] = kTree;

        const std::int64_t sigma = u_in == src_[in] ? pi_[static_cast<std::size_t>(v_in)] - cost_[in] - pi_[static_cast<std::size_t>(u_in)]
                                                    : pi_[static_cast<std::size_t>(v_in)] + cost_[in] - pi_[static_cast<std::size_t>(u_in)];

        // Reverse the stem u_in .. u_out and hang it below v_in.
        Index u = u_in;
        Index new_parent = v_in;
        std::int64_t new_pred = static_cast<std::int64_t>(in);
        std::uint8_t new_forward = src_[in] == u_in ? 1 : 0;
        for (;;) {
            const auto ui = static_cast<std::size_t>(u);
            const Index old_parent = parent_[ui];
            const std::int64_t old_pred = pred_[ui];
            const std::uint8_t old_forward = forward_[ui];
            unlink_child(old_parent, u);
            link_child(new_parent, u);
            parent_[ui] = new_parent;
            pred_[ui] = new_pred;
            forward_[ui] = new_forward;
            if (u == u_out) break;
            new_parent = u;
            new_pred = old_pred;
            new_forward = old_forward ? 0 : 1;
            u = old_parent;
        }

        stack_.clear();
        stack_.push_back(u_in);
        while (!stack_.empty()) {
            const Index w = stack_.back();
            stack_.pop_back();
            const auto wi = static_cast<std::size_t>(w);
            pi_[wi] += sigma;
            depth_[wi] = depth_[static_cast<std::size_t>(parent_[wi])] + 1;
            for (Index c = first_child_[wi]; c != -1; c = next_sib_[static_cast<std::size_t>(c)]) stack_.push_back(c);
        }
        return delta == 0;
    }

    const SparseTransportLP& lp_;
    std::size_t nx_;
    std::size_t ny_;
    std::size_t n_nodes_ = 0;
    Index root_ = 0;
    std::size_t m_real_ = 0;
    std::size_t m_search_ = 0;
    std::size_t block_size_ = 0;
    std::size_t next_arc_ = 0;
    std::int64_t big_m_ = 0;

    std::vector<Index> src_;
    std::vector<Index> tgt_;
    std::vector<std::int64_t> cost_;
    std::vector<std::int64_t> flow_;
    std::vector<std::uint8_t> state_;
    std::vector<CostUnits> extra_true_cost_;
    std::vector<std::int64_t> supply_;

    std::vector<Index> parent_;
    std::vector<std::int64_t> pred_;
    std::vector<std::uint8_t> forward_;
    std::vector<std::int32_t> depth_;
    std::vector<std::int64_t> pi_;
    std::vector<Index> first_child_;
    std::vector<Index> next_sib_;
    std::vector<Index> prev_sib_;
    std::vector<Index> stack_;
};

void check_balanced(const SparseTransportLP& lp) {
    if (lp.arcs.nx() != lp.supplies.size() || lp.arcs.ny() != lp.demands.size()) {
        throw Error(ErrorKind::InvalidInput, "arc set does not match supply/demand sizes");
    }
    if (lp.costs.size() != lp.arcs.size()) throw Error(ErrorKind::InvalidInput, "arc cost count mismatch");
    __int128 s = 0, d = 0;
    for (Mass m : lp.supplies) {
        if (m < 0) throw Error(ErrorKind::InvalidInput, "negative supply");
        s += m;
    }
    for (Mass m : lp.demands) {
        if (m < 0) throw Error(ErrorKind::InvalidInput, "negative demand");
        d += m;
    }
    if (s != d) throw Error(ErrorKind::InvalidInput, "unbalanced transport problem");
}

LocalSolution solve_cold(const SparseTransportLP& lp, const std::vector<CostUnits>& costs, const SolverOptions& options) {
    NetworkSimplex ns(lp, costs, options);
    ns.finalize_arcs();
    ns.init_cold();
    LocalSolution out;
    ns.run(out.stats);
    if (ns.has_artificial_flow()) throw Error(ErrorKind::Infeasible, "restricted problem infeasible");
    ns.extract(out, costs);
    return out;
}

bool try_basis_warm(const SparseTransportLP& lp, const Basis& b, const SolverOptions& options, LocalSolution& out) {
    const std::size_t nx = lp.supplies.size();
    const std::size_t ny = lp.demands.size();
    if (b.nx != nx || b.ny != ny || b.parent.size() != nx + ny) return false;
    NetworkSimplex ns(lp, lp.costs, options);
    std::vector<std::size_t> arc_of(nx + ny, 0);
    std::vector<std::pair<std::size_t, std::size_t>> pending;  // node, extra index
    for (std::size_t v = 0; v < nx + ny; ++v) {
        if (b.arc_x[v] < 0) continue;
        const Index x = b.arc_x[v];
        const Index y = b.arc_y[v];
        if (x < 0 || static_cast<std::size_t>(x) >= nx || y < 0 || static_cast<std::size_t>(y) >= ny) return false;
        const std::size_t k = lp.arcs.find(x, y);
        arc_of[v] = k != Neighbourhood::npos ? k : ns.add_extra(x, y, b.arc_cost[v]);
    }
    ns.finalize_arcs();
    for (std::size_t v = 0; v < nx + ny; ++v) {
        if (b.arc_x[v] < 0) {
            if (b.parent[v] != static_cast<Index>(nx + ny)) return false;
            arc_of[v] = ns.artificial_arc(v);
        }
    }
    if (!ns.init_from_tree(b.parent, arc_of)) return false;
    out = LocalSolution{};
    ns.run(out.stats);
    if (ns.has_artificial_flow()) throw Error(ErrorKind::Infeasible, "restricted problem infeasible");
    ns.extract(out, lp.costs);
    out.stats.warm_used = true;
    return true;
}

bool try_dual_warm(const SparseTransportLP& lp, const DualPotentials& d, const SolverOptions& options, LocalSolution& out) {
    const std::size_t nx = lp.supplies.size();
    const std::size_t ny = lp.demands.size();
    if (d.alpha.size() != nx || d.beta.size() != ny) return false;
    std::vector<std::int64_t> alpha(d.alpha);
    std::size_t k = 0;
    for (std::size_t x = 0; x < nx; ++x) {
        __int128 worst = 0;
        std::size_t kk = k;
        for (Index y : lp.arcs.row(x)) {
            const __int128 v = static_cast<__int128>(alpha[x]) + d.beta[static_cast<std::size_t>(y)] - lp.costs[kk++];
            worst = std::max(worst, v);
        }
        const __int128 shifted = static_cast<__int128>(alpha[x]) - worst;
        if (shifted < std::numeric_limits<std::int64_t>::min() / 4) return false;
        alpha[x] = static_cast<std::int64_t>(shifted);
        k = kk;
    }
    std::vector<CostUnits> reduced(lp.costs.size());
    k = 0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (Index y : lp.arcs.row(x)) {
            const __int128 v = static_cast<__int128>(lp.costs[k]) - alpha[x] - d.beta[static_cast<std::size_t>(y)];
            if (v < 0 || v > std::numeric_limits<std::int64_t>::max() / 4) return false;
            reduced[k++] = static_cast<CostUnits>(v);
        }
    }
    LocalSolution sol;
    try {
        sol = solve_cold(lp, reduced, options);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) return false;
        throw;
    }
    for (std::size_t x = 0; x < nx; ++x) sol.duals.alpha[x] += alpha[x];
    for (std::size_t y = 0; y < ny; ++y) sol.duals.beta[y] += d.beta[y];
    Objective obj = 0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (const auto& e : sol.pi.row(x)) obj += static_cast<Objective>(lp.costs[lp.arcs.find(static_cast<Index>(x), e.y)]) * e.mass;
    }
    sol.objective = obj;
    for (std::size_t v = 0; v < sol.basis.arc_x.size(); ++v) {
        if (sol.basis.arc_x[v] >= 0) {
            sol.basis.arc_cost[v] = lp.costs[lp.arcs.find(sol.basis.arc_x[v], sol.basis.arc_y[v])];
        }
    }
    sol.stats.warm_used = true;
    out = std::move(sol);
    return true;
}

/// Shift so that alpha[0] == 0; alpha + beta is unchanged.
void normalize(DualPotentials& d) {
    if (d.alpha.empty()) return;
    const std::int64_t shift = d.alpha[0];
    for (auto& a : d.alpha) a -= shift;
    for (auto& b : d.beta) b += shift;
}

}  // namespace

LocalSolution solve_local(const SparseTransportLP& lp, const WarmStart& warm, const SolverOptions& options) {
    check_balanced(lp);
    LocalSolution out;
    bool done = false;
    if (warm.kind == WarmKind::Basis && warm.basis != nullptr && !warm.basis->empty()) {
        done = try_basis_warm(lp, *warm.basis, options, out);
    } else if (warm.kind == WarmKind::Duals && warm.duals != nullptr) {
        done = try_dual_warm(lp, *warm.duals, options, out);
    }
    if (!done) out = solve_cold(lp, lp.costs, options);
    normalize(out.duals);
    return out;
}

}  // namespace shieldot
