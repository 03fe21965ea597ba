#include "shieldot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "shieldot/random.hpp"

namespace shieldot {

namespace {

std::string pair_text(Index x, Index y) { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }

/// For every y the x indices with (x, y) in spt pi, ascending.
std::vector<std::vector<Index>> support_columns(const SparseCoupling& pi) {
    std::vector<std::vector<Index>> cols(pi.ny());
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        for (const auto& e : pi.row(x)) cols[static_cast<std::size_t>(e.y)].push_back(static_cast<Index>(x));
    }
    return cols;
}

bool in_support(const SparseCoupling& pi, Index x, Index y) {
    const auto r = pi.row(static_cast<std::size_t>(x));
    return std::binary_search(r.begin(), r.end(), CouplingEntry{y, 0},
                              [](const CouplingEntry& a, const CouplingEntry& b) { return a.y < b.y; });
}

}  // namespace

DenseResult dense_solve(const ProblemInstance& problem, std::size_t cap) {
    const std::size_t nx = problem.mu.size();
    const std::size_t ny = problem.nu.size();
    if (ny != 0 && nx > cap / ny) {
        throw Error(ErrorKind::InvalidInput, "dense problem has " + std::to_string(nx * ny) + " arcs, above the cap of " +
                                                 std::to_string(cap));
    }
    const CostEvaluator cost = problem.evaluator();
    const auto lp = SparseTransportLP::build(problem.mu.masses, problem.nu.masses, Neighbourhood::full(nx, ny),
                                             [&](Index x, Index y) { return cost(x, y); });
    LocalSolution sol = solve_local(lp);
    return DenseResult{std::move(sol.pi), std::move(sol.duals), sol.objective, sol.stats};
}

CheckResult check_marginals(const SparseCoupling& pi, const std::vector<Mass>& mu, const std::vector<Mass>& nu) {
    if (pi.nx() != mu.size() || pi.ny() != nu.size()) return CheckResult::fail(-1, -1, "coupling size does not match the measures");
    if (!pi.is_canonical()) return CheckResult::fail(-1, -1, "coupling is not canonical");
    const auto rows = pi.row_sums();
    for (std::size_t x = 0; x < mu.size(); ++x) {
        if (rows[x] != mu[x]) return CheckResult::fail(static_cast<Index>(x), -1, "marginals violated at x=" + std::to_string(x));
    }
    const auto cols = pi.column_sums();
    for (std::size_t y = 0; y < nu.size(); ++y) {
        if (cols[y] != nu[y]) return CheckResult::fail(-1, static_cast<Index>(y), "marginals violated at y=" + std::to_string(y));
    }
    return CheckResult::pass();
}

CheckResult check_local_duals(const CostEvaluator& cost, const Neighbourhood& n, const SparseCoupling& pi,
                              const DualPotentials& duals) {
    if (duals.alpha.size() != n.nx() || duals.beta.size() != n.ny()) return CheckResult::fail(-1, -1, "dual size mismatch");
    for (std::size_t x = 0; x < n.nx(); ++x) {
        for (Index y : n.row(x)) {
            const __int128 lhs = static_cast<__int128>(duals.alpha[x]) + duals.beta[static_cast<std::size_t>(y)];
            if (lhs > cost(static_cast<Index>(x), y)) {
                return CheckResult::fail(static_cast<Index>(x), y, "dual constraint violated at " + pair_text(static_cast<Index>(x), y));
            }
        }
    }
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        for (const auto& e : pi.row(x)) {
            if (!n.contains(static_cast<Index>(x), e.y)) {
                return CheckResult::fail(static_cast<Index>(x), e.y, "support pair " + pair_text(static_cast<Index>(x), e.y) + " outside N");
            }
            const __int128 lhs = static_cast<__int128>(duals.alpha[x]) + duals.beta[static_cast<std::size_t>(e.y)];
            if (lhs != cost(static_cast<Index>(x), e.y)) {
                return CheckResult::fail(static_cast<Index>(x), e.y,
                                         "complementary slackness violated at " + pair_text(static_cast<Index>(x), e.y));
            }
        }
    }
    return CheckResult::pass();
}

CheckResult check_full_duals(const CostEvaluator& cost, const DualPotentials& duals) {
    const std::size_t nx = cost.x().size();
    const std::size_t ny = cost.y().size();
    if (duals.alpha.size() != nx || duals.beta.size() != ny) return CheckResult::fail(-1, -1, "dual size mismatch");
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            const __int128 lhs = static_cast<__int128>(duals.alpha[x]) + duals.beta[y];
            if (lhs > cost(static_cast<Index>(x), static_cast<Index>(y))) {
                return CheckResult::fail(static_cast<Index>(x), static_cast<Index>(y),
                                         "dual constraint violated at " + pair_text(static_cast<Index>(x), static_cast<Index>(y)));
            }
        }
    }
    return CheckResult::pass();
}

CheckResult check_shielding(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n) {
    if (!n.contains_support(pi)) return CheckResult::fail(-1, -1, "support not contained in N");
    const auto cols = support_columns(pi);
    struct Cand {
        Index xs;
        CostUnits q_a_ys;
        CostUnits q_s_ys;
    };
    std::vector<Cand> cands;
    for (std::size_t xa_u = 0; xa_u < n.nx(); ++xa_u) {
        const auto xa = static_cast<Index>(xa_u);
        cands.clear();
        for (Index ys : n.row(xa_u)) {
            for (Index xs : cols[static_cast<std::size_t>(ys)]) {
                if (xs == xa) continue;
                cands.push_back({xs, cost(xa, ys), cost(xs, ys)});
            }
        }
        const auto row = n.row(xa_u);
        std::size_t k = 0;
        std::size_t hint = 0;
        for (std::size_t yb_u = 0; yb_u < n.ny(); ++yb_u) {
            const auto yb = static_cast<Index>(yb_u);
            if (k < row.size() && row[k] == yb) {
                ++k;
                continue;
            }
            const CostUnits q_a_yb = cost(xa, yb);
            bool found = false;
            for (std::size_t i = 0; i < cands.size() && !found; ++i) {
                const std::size_t j = (i + hint) % cands.size();
                const Cand& c = cands[j];
                const __int128 delta = static_cast<__int128>(q_a_yb) - cost(c.xs, yb) - c.q_a_ys + c.q_s_ys;
                if (delta > 0) {
                    found = true;
                    hint = j;
                }
            }
            if (!found) return CheckResult::fail(xa, yb, "pair " + pair_text(xa, yb) + " outside N is not shielded");
        }
    }
    return CheckResult::pass();
}

ShortCut build_shortcut(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n, Index xa, Index yb) {
    if (n.contains(xa, yb)) throw Error(ErrorKind::InvalidInput, "pair inside N");
    const auto cols = support_columns(pi);
    ShortCut sc;
    std::set<std::pair<Index, Index>> visited;
    Index xn = xa;
    while (!n.contains(xn, yb)) {
        const auto pn = cost.x()[static_cast<std::size_t>(xn)];
        const CostUnits q_n_yb = cost(xn, yb);
        double best_dist = 0.0;
        std::pair<Index, Index> best{-1, -1};
        for (Index y_next : n.row(static_cast<std::size_t>(xn))) {
            for (Index x_next : cols[static_cast<std::size_t>(y_next)]) {
                const __int128 delta = static_cast<__int128>(q_n_yb) - cost(x_next, yb) - cost(xn, y_next) + cost(x_next, y_next);
                if (delta <= 0) continue;
                const double dist = euclidean_distance(pn, cost.x()[static_cast<std::size_t>(x_next)]);
                const std::pair<Index, Index> cand{x_next, y_next};
                if (best.first < 0 || dist < best_dist || (dist == best_dist && cand < best)) {
                    best = cand;
                    best_dist = dist;
                }
            }
        }
        if (best.first < 0) {
            throw Error(ErrorKind::Verification, "no shielding pair for x=" + std::to_string(xn) + " from y=" + std::to_string(yb));
        }
        if (!visited.insert(best).second) throw Error(ErrorKind::Verification, "short-cut path revisits a support pair");
        sc.path.push_back(best);
        xn = best.first;
    }
    return sc;
}

CheckResult check_shortcut(const CostEvaluator& cost, const SparseCoupling& pi, const Neighbourhood& n, Index xa,
                           Index yb, const ShortCut& shortcut) {
    if (shortcut.path.empty()) return CheckResult::fail(xa, yb, "empty short-cut");
    std::set<std::pair<Index, Index>> seen;
    Index prev_x = xa;
    __int128 rhs = 0;
    for (const auto& [x, y] : shortcut.path) {
        if (!in_support(pi, x, y)) return CheckResult::fail(x, y, "short-cut pair " + pair_text(x, y) + " not in support");
        if (!seen.insert({x, y}).second) return CheckResult::fail(x, y, "short-cut has a cycle");
        if (!n.contains(prev_x, y)) return CheckResult::fail(prev_x, y, "link " + pair_text(prev_x, y) + " not in N");
        rhs += cost(prev_x, y);
        prev_x = x;
    }
    if (!n.contains(prev_x, yb)) return CheckResult::fail(prev_x, yb, "final link not in N");
    rhs += cost(prev_x, yb);
    for (const auto& [x, y] : shortcut.path) rhs -= cost(x, y);
    if (static_cast<__int128>(cost(xa, yb)) < rhs) return CheckResult::fail(xa, yb, "short-cut inequality violated");
    return CheckResult::pass();
}

double coverage_cosine(const PointCloud& points, Index x, std::span<const Index> candidates) {
    if (candidates.empty()) return -1.0;
    const int dim = points.dim();
    const auto px = points[static_cast<std::size_t>(x)];
    std::vector<std::vector<double>> dirs;
    for (Index c : candidates) {
        const auto pc = points[static_cast<std::size_t>(c)];
        std::vector<double> v(static_cast<std::size_t>(dim));
        double norm = 0.0;
        for (int d = 0; d < dim; ++d) {
            v[d] = pc[d] - px[d];
            norm += v[d] * v[d];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (double& c2 : v) c2 /= norm;
        dirs.push_back(std::move(v));
    }
    if (dirs.empty()) return -1.0;
    if (dim == 2) {
        std::vector<double> ang;
        for (const auto& v : dirs) ang.push_back(std::atan2(v[1], v[0]));
        std::sort(ang.begin(), ang.end());
        double gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
        for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
        return std::cos(gap / 2.0);
    }
    SplitMix64 rng(0x5eedULL);
    double worst = 1.0;
    for (int s = 0; s < 4096; ++s) {
        std::vector<double> u(static_cast<std::size_t>(dim));
        double norm = 0.0;
        for (double& c : u) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        double best = -1.0;
        for (const auto& v : dirs) {
            double dot = 0.0;
            for (int d = 0; d < dim; ++d) dot += u[d] * v[d] / norm;
            best = std::max(best, dot);
        }
        worst = std::min(worst, best);
    }
    return worst;
}

RegularityDiagnostics measure_regularity(const SparseCoupling& pi, const PointCloud& x_points,
                                         const PointCloud& y_points, const CandidateSets& candidates,
                                         std::uint64_t seed) {
    RegularityDiagnostics diag;
    const auto t = extract_map(pi);
    const std::size_t nx = pi.nx();
    auto ratio = [&](std::size_t a, std::size_t b) {
        const double dx = euclidean_distance(x_points[a], x_points[b]);
        if (dx == 0.0) return 0.0;
        return euclidean_distance(y_points[static_cast<std::size_t>(t[a])], y_points[static_cast<std::size_t>(t[b])]) / dx;
    };
    constexpr std::uint64_t kSamples = 100'000;
    const std::uint64_t pairs = nx < 2 ? 0 : static_cast<std::uint64_t>(nx) * (nx - 1) / 2;
    if (pairs <= kSamples) {
        for (std::size_t a = 0; a < nx; ++a) {
            for (std::size_t b = a + 1; b < nx; ++b) diag.measured_L = std::max(diag.measured_L, ratio(a, b));
        }
    } else {
        SplitMix64 rng(seed);
        for (std::uint64_t s = 0; s < kSamples; ++s) {
            const auto a = static_cast<std::size_t>(rng.below(nx));
            auto b = static_cast<std::size_t>(rng.below(nx - 1));
            if (b >= a) ++b;
            diag.measured_L = std::max(diag.measured_L, ratio(a, b));
        }
    }
    diag.measured_q = nx == 0 ? 0.0 : 1.0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (Index s : candidates.of(static_cast<Index>(x))) {
            diag.measured_D = std::max(diag.measured_D, euclidean_distance(x_points[x], x_points[static_cast<std::size_t>(s)]));
        }
        const double q = coverage_cosine(x_points, static_cast<Index>(x), candidates.of(static_cast<Index>(x)));
        diag.measured_q = std::min(diag.measured_q, std::max(0.0, q));
    }
    return diag;
}

std::string Certificate::kind_name() const {
    switch (kind) {
        case CertificateKind::LocalOptimal: return "LocalOptimal";
        case CertificateKind::GloballyOptimal: return "GloballyOptimal";
        case CertificateKind::ShieldingValid: return "ShieldingValid";
        case CertificateKind::ShortCutFound: return "ShortCutFound";
    }
    return "Unknown";
}

}  // namespace shieldot
