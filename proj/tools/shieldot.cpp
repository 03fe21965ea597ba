// shieldot command line: gen, solve, verify, bench.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shieldot/driver.hpp"
#include "shieldot/generate.hpp"
#include "shieldot/io.hpp"
#include "shieldot/random.hpp"
#include "shieldot/report.hpp"
#include "shieldot/verify.hpp"

using namespace shieldot;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitVerification = 5;

struct CostFlags {
    std::string cost = "sqeucl";
    double p = 2.0;
    double eta = 0.0;
    double lambda = 0.0;
    std::uint64_t noise_seed = 0;
    Mass mass_scale = kDefaultMassScale;
    CostUnits cost_scale = kDefaultCostScale;

    void add(CLI::App* app) {
        app->add_option("--cost", cost, "sqeucl, peucl or sphere")->check(CLI::IsMember({"sqeucl", "peucl", "sphere"}));
        app->add_option("--p", p, "exponent for peucl");
        app->add_option("--eta", eta, "weight of the per-pair noise table");
        app->add_option("--lambda", lambda, "weight of the Lipschitz sine field");
        app->add_option("--noise-seed", noise_seed, "seed of the noise table");
        app->add_option("--mass-scale", mass_scale, "integer total mass of generated measures");
        app->add_option("--cost-scale", cost_scale, "cost quantization scale");
    }

    CostSpec spec() const {
        CostSpec s;
        if (cost == "peucl") {
            s = CostSpec::p_euclidean(p);
        } else if (cost == "sphere") {
            s = CostSpec::sphere();
        } else if (eta != 0.0 || lambda != 0.0) {
            s = CostSpec::noisy(eta, lambda, noise_seed);
        }
        if (cost != "sqeucl" && (eta != 0.0 || lambda != 0.0)) {
            throw Error(ErrorKind::InvalidInput, "--eta and --lambda need --cost sqeucl");
        }
        s.validate();
        return s;
    }
};

std::vector<int> parse_size(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size() || v < 1) throw Error(ErrorKind::InvalidInput, "bad --size '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorKind::InvalidInput, "bad --size '" + text + "'");
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t which) { return splitmix64_mix(seed * 2 + which); }

/// mu and nu for a seeded instance: grids for R^n costs, point clouds for
/// the sphere (size is the point count).
std::pair<DiscreteMeasure, DiscreteMeasure> generate_pair(const CostSpec& cost, const std::vector<int>& size,
                                                          std::uint64_t seed, Mass mass_scale) {
    if (cost.is_sphere()) {
        if (size.size() != 1) throw Error(ErrorKind::InvalidInput, "sphere problems take --size <count>");
        SphereGenOptions o;
        o.count = static_cast<std::size_t>(size[0]);
        o.mass_scale = mass_scale;
        o.seed = derive_seed(seed, 0);
        auto mu = gen_sphere_measure(o);
        o.seed = derive_seed(seed, 1);
        return {std::move(mu), gen_sphere_measure(o)};
    }
    GridGenOptions o;
    o.shape = size.size() == 1 ? std::vector<int>{size[0], size[0]} : size;
    o.mass_scale = mass_scale;
    o.seed = derive_seed(seed, 0);
    auto mu = gen_grid_measure(o);
    o.seed = derive_seed(seed, 1);
    o.mask = MaskKind::Random;
    return {std::move(mu), gen_grid_measure(o)};
}

struct SolveFlags {
    std::string mu_path;
    std::string nu_path;
    std::string size;
    std::uint64_t seed = 0;
    CostFlags cost;
    std::string shield;
    std::string candidates;
    int depth = 0;
    std::string warm = "basis";
    bool dense = false;
    bool certify = false;
    bool timings = false;
    std::string out;
    std::string report;
};

ProblemInstance load_problem(const std::string& mu_path, const std::string& nu_path, const std::string& size,
                             std::uint64_t seed, const CostFlags& cf) {
    ProblemInstance p;
    p.cost = cf.spec();
    p.cost_scale = cf.cost_scale;
    if (!mu_path.empty() || !nu_path.empty()) {
        if (mu_path.empty() || nu_path.empty()) throw Error(ErrorKind::InvalidInput, "give both measure files or --size");
        p.mu = read_measure(mu_path);
        p.nu = read_measure(nu_path);
    } else {
        if (size.empty()) throw Error(ErrorKind::InvalidInput, "give two measure files or --size");
        std::tie(p.mu, p.nu) = generate_pair(p.cost, parse_size(size), seed, cf.mass_scale);
    }
    p.validate();
    return p;
}

SolveOptions solve_options(const SolveFlags& f) {
    SolveOptions o;
    if (f.shield == "grid") o.method = ShieldMethod::Grid;
    if (f.shield == "tree") o.method = ShieldMethod::Tree;
    if (!f.candidates.empty()) o.candidates = CandidateScheme::parse(f.candidates);
    o.depth = f.depth;
    o.warm = f.warm == "none" ? WarmPolicy::None : f.warm == "dual" ? WarmPolicy::Duals : WarmPolicy::Basis;
    o.certify = f.certify;
    return o;
}

int cmd_solve(const SolveFlags& f) {
    const ProblemInstance problem = load_problem(f.mu_path, f.nu_path, f.size, f.seed, f.cost);
    SparseCoupling pi;
    SolveReport report;
    if (f.dense) {
        const auto t0 = std::chrono::steady_clock::now();
        DenseResult d = dense_solve(problem);
        report.problem_hash = problem_hash(problem);
        report.nx = problem.mu.size();
        report.ny = problem.nu.size();
        report.dim = problem.mu.dim();
        report.cost = problem.cost;
        report.mass_scale = problem.mu.mass_scale;
        report.cost_scale = problem.cost_scale;
        report.method = default_method(problem);
        report.candidates = default_candidates(problem);
        report.warm = WarmPolicy::None;
        LevelReport level;
        level.iterations = 1;
        level.objectives.push_back(d.objective);
        level.n_sizes.push_back(problem.mu.size() * problem.nu.size());
        level.pivots = d.stats.pivots;
        level.degenerate_pivots = d.stats.degenerate_pivots;
        level.t_solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report.t_total_ms = level.t_solve_ms;
        report.levels.push_back(std::move(level));
        report.final_objective = d.objective;
        if (f.certify) report.certified = static_cast<bool>(check_full_duals(problem.evaluator(), d.duals));
        pi = std::move(d.pi);
    } else {
        MultiScaleResult r = solve_multiscale(problem, solve_options(f));
        pi = std::move(r.pi);
        report = std::move(r.report);
    }
    if (!f.out.empty()) write_cpl(f.out, pi, problem.mu.mass_scale);
    const auto json = report_json(report, ReportOptions{f.timings});
    if (!f.report.empty()) write_text(f.report, dump_json(json));
    std::cout << "objective " << to_string(report.final_objective);
    if (f.certify) {
        Certificate cert;
        cert.kind = report.certified ? CertificateKind::GloballyOptimal : CertificateKind::LocalOptimal;
        cert.problem_hash = report.problem_hash;
        cert.objective = report.final_objective;
        cert.witness = report.witness;
        std::cout << " certificate " << cert.kind_name() << "\n";
        if (!report.certified) {
            std::cerr << "certification failed\n";
            return kExitVerification;
        }
    } else {
        std::cout << "\n";
    }
    return 0;
}

struct VerifyFlags {
    std::string mu_path;
    std::string nu_path;
    std::string coupling;
    CostFlags cost;
    std::string candidates;
    std::string out;
    bool skip_shielding = false;
};

int cmd_verify(const VerifyFlags& f) {
    const ProblemInstance problem = load_problem(f.mu_path, f.nu_path, "", 0, f.cost);
    const CouplingFile file = read_cpl(f.coupling);
    Certificate cert;
    cert.problem_hash = problem_hash(problem);
    auto fail = [&](const CheckResult& r) {
        if (r.x >= 0 && r.y >= 0) cert.witness = std::make_pair(r.x, r.y);
        std::cout << dump_json(certificate_json(cert));
        std::cerr << r.message << "\n";
        return kExitVerification;
    };
    if (file.mass_scale != problem.mu.mass_scale) {
        return fail(CheckResult::fail(-1, -1, "marginals violated: mass_scale differs"));
    }
    if (const auto r = check_marginals(file.pi, problem.mu.masses, problem.nu.masses); !r) {
        return fail(CheckResult::fail(r.x, r.y, "marginals violated"));
    }
    const CostEvaluator cost = problem.evaluator();
    cert.objective = objective(file.pi, cost);

    // Shielding neighbourhood of the given coupling at the finest layer.
    const Metric m = metric_for(problem.cost);
    const auto tx = build_tree(problem.mu.points, m, tree_options_for(problem.mu, shared_depth(problem, 0)));
    const auto ty = build_tree(problem.nu.points, m, tree_options_for(problem.nu, tx.depth()));
    const CandidateScheme scheme = f.candidates.empty() ? default_candidates(problem) : CandidateScheme::parse(f.candidates);
    const CandidateSets cands = make_candidates(tx, 0, scheme);
    const ShieldContext ctx{&tx, &ty, 0, &cost, &cands,
                            scheme.kind == CandidateKind::GridAxes ? default_method(problem) : ShieldMethod::Tree};
    const Neighbourhood n = shield(file.pi, ctx);
    if (!f.skip_shielding) {
        if (const auto r = check_shielding(cost, file.pi, n); !r) return fail(r);
        cert.kind = CertificateKind::ShieldingValid;
    }

    const auto lp = SparseTransportLP::build(problem.mu.masses, problem.nu.masses, n,
                                             [&](Index x, Index y) { return cost(x, y); });
    const LocalSolution local = solve_local(lp);
    if (local.objective != cert.objective) {
        return fail(CheckResult::fail(-1, -1, "coupling is not optimal: " + to_string(cert.objective) + " > " +
                                                  to_string(local.objective)));
    }
    cert.kind = CertificateKind::LocalOptimal;
    if (const auto r = check_full_duals(cost, local.duals); !r) return fail(r);
    cert.kind = CertificateKind::GloballyOptimal;
    const std::string text = dump_json(certificate_json(cert));
    if (!f.out.empty()) write_text(f.out, text);
    std::cout << text;
    return 0;
}

struct GenFlags {
    std::string kind = "grid";
    std::string size = "32x32";
    std::size_t count = 256;
    std::uint64_t seed = 0;
    int gaussians = 3;
    std::string mask = "none";
    Mass mass_scale = kDefaultMassScale;
    std::string out;
};

int cmd_gen(const GenFlags& f) {
    DiscreteMeasure m;
    if (f.kind == "sphere") {
        m = gen_sphere_measure(SphereGenOptions{f.count, f.seed, f.gaussians, f.mass_scale});
    } else {
        GridGenOptions o;
        o.shape = parse_size(f.size);
        if (o.shape.size() == 1) o.shape.push_back(o.shape[0]);
        o.seed = f.seed;
        o.gaussians = f.gaussians;
        o.mass_scale = f.mass_scale;
        o.mask = f.mask == "random"      ? MaskKind::Random
                 : f.mask == "halfplane" ? MaskKind::HalfPlane
                 : f.mask == "disc"      ? MaskKind::Disc
                                         : MaskKind::None;
        m = gen_grid_measure(o);
    }
    write_measure(f.out, m);
    return 0;
}

struct BenchmarkConfig {
    std::string preset;
    std::vector<std::vector<int>> sizes;
    std::vector<CostSpec> costs;
    std::vector<std::uint64_t> seeds;
    int repetitions = 1;
    std::vector<std::string> modes;
    std::vector<WarmPolicy> warm;
};

BenchmarkConfig make_preset(const std::string& name, int seeds) {
    BenchmarkConfig c;
    c.preset = name;
    for (int s = 0; s < seeds; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
    if (name == "paper-fig4") {
        c.sizes = {{32, 32}, {48, 48}, {64, 64}};
        c.costs = {CostSpec::sq_euclidean()};
        c.modes = {"sparse-grid", "sparse-tree"};
        c.warm = {WarmPolicy::Basis, WarmPolicy::None};
    } else if (name == "noise") {
        c.sizes = {{32, 32}};
        for (double eta : {0.0, 5.0, 10.0, 15.0}) {
            for (double lambda : {0.0, 5.0, 10.0, 15.0}) c.costs.push_back(CostSpec::noisy(eta, lambda, 0));
        }
        c.modes = {"sparse-tree"};
        c.warm = {WarmPolicy::Basis};
    } else if (name == "dense-vs-sparse") {
        c.sizes = {{16, 16}, {32, 32}, {48, 48}};
        c.costs = {CostSpec::sq_euclidean()};
        c.modes = {"dense", "sparse-grid"};
        c.warm = {WarmPolicy::Basis};
    } else {
        throw Error(ErrorKind::InvalidInput, "unknown preset '" + name + "' (paper-fig4, noise, dense-vs-sparse)");
    }
    return c;
}

std::string size_text(const std::vector<int>& s) {
    std::string t;
    for (int v : s) t += (t.empty() ? "" : "x") + std::to_string(v);
    return t;
}

int cmd_bench(const std::string& preset, int seeds, int repetitions, Mass mass_scale, bool timings, const std::string& out) {
    BenchmarkConfig cfg = make_preset(preset, seeds);
    if (repetitions < 1) throw Error(ErrorKind::InvalidInput, "repetitions must be at least 1");
    cfg.repetitions = repetitions;
    std::string csv;
    for (std::size_t i = 0; i < bench_columns().size(); ++i) csv += (i ? "," : "") + bench_columns()[i];
    csv += "\n";
    for (const auto& size : cfg.sizes) {
        for (const auto& cost : cfg.costs) {
            for (std::uint64_t seed : cfg.seeds) {
                ProblemInstance p;
                p.cost = cost;
                std::tie(p.mu, p.nu) = generate_pair(cost, size, seed, mass_scale);
                for (const auto& mode : cfg.modes) {
                    for (WarmPolicy warm : cfg.warm) {
                        if (mode == "dense" && warm != cfg.warm.front()) continue;
                        for (int rep = 0; rep < cfg.repetitions; ++rep) {
                            BenchRow row;
                            row.preset = cfg.preset + (cost.family == CostFamily::Noisy
                                                           ? ":eta=" + format_double(cost.eta) + ":lambda=" + format_double(cost.lambda)
                                                           : "");
                            row.size = size_text(size);
                            row.seed = seed;
                            row.mode = mode;
                            row.nx = p.mu.size();
                            const auto t0 = std::chrono::steady_clock::now();
                            if (mode == "dense") {
                                const DenseResult d = dense_solve(p);
                                row.warm = "none";
                                row.iters = 1;
                                row.n_max = row.n_sum = p.mu.size() * p.nu.size();
                                row.pivots = d.stats.pivots;
                                row.final_objective = d.objective;
                                row.t_solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                                row.t_total_ms = row.t_solve_ms;
                            } else {
                                SolveOptions o;
                                o.method = mode == "sparse-grid" ? ShieldMethod::Grid : ShieldMethod::Tree;
                                o.candidates = CandidateScheme::axes();
                                o.warm = warm;
                                const MultiScaleResult r = solve_multiscale(p, o);
                                const LevelReport& fin = r.report.finest();
                                row.warm = warm_name(warm);
                                row.k = fin.layer;
                                row.iters = fin.iterations;
                                row.n_max = fin.max_n();
                                row.n_sum = fin.sum_n();
                                row.psi_hat_calls = fin.psi_hat_calls;
                                row.pivots = fin.pivots;
                                row.t_solve_ms = fin.t_solve_ms;
                                row.t_shield_ms = fin.t_shield_ms;
                                row.t_total_ms = r.report.t_total_ms;
                                row.final_objective = r.report.final_objective;
                            }
                            if (!timings) row.t_solve_ms = row.t_shield_ms = row.t_total_ms = 0.0;
                            csv += bench_row(row) + "\n";
                        }
                    }
                }
            }
        }
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text(out, csv);
    }
    return 0;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::InvalidInput: return kExitUsage;
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::Infeasible: return kExitInfeasible;
        case ErrorKind::Verification: return kExitVerification;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact sparse multi-scale optimal transport with shielding neighbourhoods"};
    app.require_subcommand(1);

    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "solve a transport problem");
    solve->add_option("mu", sf.mu_path, "source measure (.pts or .dgrid)");
    solve->add_option("nu", sf.nu_path, "target measure (.pts or .dgrid)");
    solve->add_option("--size", sf.size, "generate the problem: grid shape s1xs2[...] (s alone is s x s) or sphere point count");
    solve->add_option("--seed", sf.seed, "seed for generated problems");
    sf.cost.add(solve);
    solve->add_option("--shield", sf.shield, "grid or tree")->check(CLI::IsMember({"grid", "tree"}));
    solve->add_option("--candidates", sf.candidates, "axes or knn:<k>");
    solve->add_option("--depth", sf.depth, "tree depth above the points");
    solve->add_option("--warm", sf.warm, "basis, dual or none")->check(CLI::IsMember({"basis", "dual", "none"}));
    solve->add_flag("--dense", sf.dense, "solve the full problem directly");
    solve->add_flag("--certify", sf.certify, "check dual feasibility on every pair");
    solve->add_flag("--timings", sf.timings, "write wall times into the report");
    solve->add_option("--out", sf.out, "coupling output (.cpl)");
    solve->add_option("--report", sf.report, "report output (JSON)");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "check a coupling file against a problem");
    verify->add_option("mu", vf.mu_path, "source measure")->required();
    verify->add_option("nu", vf.nu_path, "target measure")->required();
    verify->add_option("coupling", vf.coupling, "coupling (.cpl)")->required();
    vf.cost.add(verify);
    verify->add_option("--candidates", vf.candidates, "axes or knn:<k>");
    verify->add_flag("--skip-shielding", vf.skip_shielding, "skip the exhaustive shielding scan");
    verify->add_option("--out", vf.out, "certificate output (JSON)");

    GenFlags gf;
    auto* gen = app.add_subcommand("gen", "write a seeded test measure");
    gen->add_option("--kind", gf.kind, "grid or sphere")->check(CLI::IsMember({"grid", "sphere"}));
    gen->add_option("--size", gf.size, "grid shape s1xs2[x s3] (s alone is s x s)");
    gen->add_option("--count", gf.count, "sphere point count");
    gen->add_option("--seed", gf.seed, "generator seed");
    gen->add_option("--gaussians", gf.gaussians, "number of bumps");
    gen->add_option("--mask", gf.mask, "none, random, halfplane or disc")
        ->check(CLI::IsMember({"none", "random", "halfplane", "disc"}));
    gen->add_option("--mass-scale", gf.mass_scale, "integer total mass");
    gen->add_option("--out", gf.out, "output file")->required();

    std::string preset = "paper-fig4";
    int seeds = 3;
    int repetitions = 1;
    Mass bench_mass = kDefaultMassScale;
    bool bench_timings = true;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "run a benchmark sweep and write CSV");
    bench->add_option("--preset", preset, "paper-fig4, noise or dense-vs-sparse");
    bench->add_option("--seeds", seeds, "number of seeds per configuration");
    bench->add_option("--repetitions", repetitions, "runs per instance");
    bench->add_option("--mass-scale", bench_mass, "integer total mass");
    bench->add_flag("--timings,!--no-timings", bench_timings, "record wall times");
    bench->add_option("--out", bench_out, "CSV output (stdout when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(sf);
        if (*verify) return cmd_verify(vf);
        if (*gen) return cmd_gen(gf);
        if (*bench) return cmd_bench(preset, seeds, repetitions, bench_mass, bench_timings, bench_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
