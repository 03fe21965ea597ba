#include "shieldot/driver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "shieldot/verify.hpp"

namespace shieldot {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::size_t LevelReport::max_n() const {
    return n_sizes.empty() ? 0 : *std::max_element(n_sizes.begin(), n_sizes.end());
}

std::size_t LevelReport::sum_n() const { return std::accumulate(n_sizes.begin(), n_sizes.end(), std::size_t{0}); }

std::uint64_t SolveReport::total_pivots() const {
    std::uint64_t total = 0;
    for (const auto& l : levels) total += l.pivots;
    return total;
}

SparseResult solve_sparse(const LayerProblem& problem, Neighbourhood n1, const SolveOptions& options,
                          LevelReport* report) {
    const CostEvaluator& cost = *problem.ctx.cost;
    LevelReport local;
    local.layer = problem.layer;
    LevelReport& rep = report != nullptr ? *report : local;
    rep.layer = problem.layer;

    Neighbourhood n = std::move(n1);
    std::optional<LocalSolution> prev;
    for (int iter = 0;; ++iter) {
        if (iter >= options.max_iter) {
            throw Error(ErrorKind::Verification, "sparse iteration did not terminate within " +
                                                     std::to_string(options.max_iter) + " iterations");
        }
        auto lp = SparseTransportLP::build(*problem.mu, *problem.nu, n, [&](Index x, Index y) { return cost(x, y); });
        WarmStart warm;
        if (prev) {
            if (options.warm == WarmPolicy::Basis) warm = WarmStart::from(prev->basis);
            if (options.warm == WarmPolicy::Duals) warm = WarmStart::from(prev->duals);
        }
        const auto t0 = Clock::now();
        LocalSolution sol = solve_local(lp, warm, options.solver);
        rep.t_solve_ms += ms_since(t0);
        rep.iterations += 1;
        rep.objectives.push_back(sol.objective);
        rep.n_sizes.push_back(n.size());
        rep.pivots += sol.stats.pivots;
        rep.degenerate_pivots += sol.stats.degenerate_pivots;
        if (prev && sol.objective > prev->objective) {
            throw Error(ErrorKind::Verification, "objective increased from " + to_string(prev->objective) + " to " +
                                                     to_string(sol.objective));
        }

        const auto t1 = Clock::now();
        ShieldStats stats;
        Neighbourhood next = shield(sol.pi, problem.ctx, &stats);
        rep.t_shield_ms += ms_since(t1);
        rep.psi_hat_calls += stats.psi_hat_calls;
        rep.missed_total += stats.missed_total;
        if (options.on_shield) {
            options.on_shield(ShieldObservation{problem.layer, iter, cost, *problem.mu, *problem.nu, sol.pi, next});
        }

        const bool done = prev && sol.objective == prev->objective;
        if (done) return SparseResult{std::move(sol.pi), std::move(next), std::move(sol.duals), sol.objective};
        n = std::move(next);
        prev = std::move(sol);
    }
}

Neighbourhood refine_neighbourhood(const HierarchicalPartition& tree_x, const HierarchicalPartition& tree_y, int layer,
                                   const SparseCoupling& pi) {
    std::vector<std::vector<Index>> rows(tree_x.size(layer - 1));
    for (std::size_t x = 0; x < pi.nx(); ++x) {
        const auto cx = tree_x.children(layer, static_cast<Index>(x));
        for (const auto& e : pi.row(x)) {
            const auto cy = tree_y.children(layer, e.y);
            for (Index child : cx) rows[static_cast<std::size_t>(child)].insert(rows[static_cast<std::size_t>(child)].end(), cy.begin(), cy.end());
        }
    }
    return Neighbourhood::from_rows(tree_y.size(layer - 1), std::move(rows));
}

Metric metric_for(const CostSpec& cost) { return cost.is_sphere() ? Metric::Sphere : Metric::Euclidean; }

TreeOptions tree_options_for(const DiscreteMeasure& measure, int depth) {
    TreeOptions opts;
    opts.depth = depth;
    opts.grid_shape = measure.grid_shape;
    return opts;
}

int shared_depth(const ProblemInstance& problem, int requested) {
    if (requested > 0) return requested;
    if (requested < 0) throw Error(ErrorKind::InvalidInput, "depth must be positive");
    const Metric m = metric_for(problem.cost);
    return std::max(default_depth(problem.mu.size(), problem.mu.dim(), m, problem.mu.grid_shape),
                    default_depth(problem.nu.size(), problem.nu.dim(), m, problem.nu.grid_shape));
}

ShieldMethod default_method(const ProblemInstance& problem) {
    const auto fam = problem.cost.family;
    const bool grids = problem.mu.grid_shape.has_value() && problem.nu.grid_shape.has_value();
    return grids && (fam == CostFamily::SqEuclidean || fam == CostFamily::Noisy) ? ShieldMethod::Grid : ShieldMethod::Tree;
}

CandidateScheme default_candidates(const ProblemInstance& problem) {
    if (problem.mu.grid_shape.has_value()) return CandidateScheme::axes();
    return CandidateScheme::knn(2 * problem.mu.dim() + 2);
}

MultiScaleResult solve_multiscale(const ProblemInstance& problem, const SolveOptions& options) {
    problem.validate();
    const int depth = shared_depth(problem, options.depth);
    const Metric m = metric_for(problem.cost);
    const auto tx = build_tree(problem.mu.points, m, tree_options_for(problem.mu, depth));
    const auto ty = build_tree(problem.nu.points, m, tree_options_for(problem.nu, depth));
    return solve_multiscale(problem, tx, ty, options);
}

MultiScaleResult solve_multiscale(const ProblemInstance& problem, const HierarchicalPartition& tree_x,
                                  const HierarchicalPartition& tree_y, const SolveOptions& options) {
    const auto t_start = Clock::now();
    problem.validate();
    if (tree_x.depth() != tree_y.depth()) throw Error(ErrorKind::InvalidInput, "trees have different depths");
    if (tree_x.size(0) != problem.mu.size() || tree_y.size(0) != problem.nu.size()) {
        throw Error(ErrorKind::InvalidInput, "trees do not match the measures");
    }
    const int depth = tree_x.depth();
    const ShieldMethod method = options.method.value_or(default_method(problem));
    const CandidateScheme scheme = options.candidates.value_or(default_candidates(problem));
    if (method == ShieldMethod::Grid && scheme.kind != CandidateKind::GridAxes) {
        throw Error(ErrorKind::InvalidInput, "grid shielding needs axes candidates");
    }

    MultiScaleResult out;
    SolveReport& report = out.report;
    report.problem_hash = problem_hash(problem);
    report.nx = problem.mu.size();
    report.ny = problem.nu.size();
    report.dim = problem.mu.dim();
    report.cost = problem.cost;
    report.mass_scale = problem.mu.mass_scale;
    report.cost_scale = problem.cost_scale;
    report.depth = depth;
    report.method = method;
    report.candidates = scheme;
    report.warm = options.warm;

    const auto mx = coarsen_measure(problem.mu, tree_x);
    const auto my = coarsen_measure(problem.nu, tree_y);

    // Root layer: dense solve.
    SparseCoupling pi;
    DualPotentials duals;
    {
        const CostEvaluator cost(problem.cost, tree_x.reps(depth), tree_y.reps(depth), problem.cost_scale, depth == 0);
        const auto& mu = mx.layers[static_cast<std::size_t>(depth)];
        const auto& nu = my.layers[static_cast<std::size_t>(depth)];
        auto lp = SparseTransportLP::build(mu, nu, Neighbourhood::full(mu.size(), nu.size()),
                                           [&](Index x, Index y) { return cost(x, y); });
        LevelReport level;
        level.layer = depth;
        const auto t0 = Clock::now();
        LocalSolution sol = solve_local(lp, WarmStart::none(), options.solver);
        level.t_solve_ms = ms_since(t0);
        level.iterations = 1;
        level.objectives.push_back(sol.objective);
        level.n_sizes.push_back(lp.arcs.size());
        level.pivots = sol.stats.pivots;
        level.degenerate_pivots = sol.stats.degenerate_pivots;
        report.levels.push_back(std::move(level));
        pi = std::move(sol.pi);
        duals = std::move(sol.duals);
        report.final_objective = sol.objective;
    }

    for (int k = depth - 1; k >= 0; --k) {
        const CostEvaluator cost(problem.cost, tree_x.reps(k), tree_y.reps(k), problem.cost_scale, k == 0);
        const CandidateSets cands = make_candidates(tree_x, k, scheme);
        LayerProblem lp;
        lp.layer = k;
        lp.mu = &mx.layers[static_cast<std::size_t>(k)];
        lp.nu = &my.layers[static_cast<std::size_t>(k)];
        lp.ctx = ShieldContext{&tree_x, &tree_y, k, &cost, &cands, method};
        LevelReport level;
        SparseResult res = solve_sparse(lp, refine_neighbourhood(tree_x, tree_y, k + 1, pi), options, &level);
        report.levels.push_back(std::move(level));
        pi = std::move(res.pi);
        duals = std::move(res.duals);
        report.final_objective = res.objective;
    }

    if (options.certify) {
        const CostEvaluator cost = problem.evaluator();
        const CheckResult full = check_full_duals(cost, duals);
        const CheckResult marg = check_marginals(pi, problem.mu.masses, problem.nu.masses);
        const bool slack_ok = objective(pi, cost) ==
                              [&] {
                                  Objective s = 0;
                                  for (std::size_t x = 0; x < problem.mu.size(); ++x) s += static_cast<Objective>(duals.alpha[x]) * problem.mu.masses[x];
                                  for (std::size_t y = 0; y < problem.nu.size(); ++y) s += static_cast<Objective>(duals.beta[y]) * problem.nu.masses[y];
                                  return s;
                              }();
        report.certified = full.ok && marg.ok && slack_ok;
        if (!full.ok) report.witness = std::make_pair(full.x, full.y);
    }
    out.pi = std::move(pi);
    out.duals = std::move(duals);
    report.t_total_ms = ms_since(t_start);
    return out;
}

}  // namespace shieldot
