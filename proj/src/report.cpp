#include "shieldot/report.hpp"

#include <cstdio>

#include "shieldot/io.hpp"

namespace shieldot {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string method_name(ShieldMethod m) { return m == ShieldMethod::Grid ? "grid" : "tree"; }

std::string warm_name(WarmPolicy w) {
    switch (w) {
        case WarmPolicy::Basis: return "basis";
        case WarmPolicy::Duals: return "dual";
        case WarmPolicy::None: return "none";
    }
    return "none";
}

nlohmann::json cost_spec_json(const CostSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.name();
    if (spec.family == CostFamily::PEuclidean) j["p"] = spec.p;
    if (spec.family == CostFamily::Noisy) {
        j["eta"] = spec.eta;
        j["lambda"] = spec.lambda;
        j["noise_seed"] = spec.noise_seed;
        j["k_mag"] = spec.k_mag;
    }
    return j;
}

nlohmann::json report_json(const SolveReport& report, const ReportOptions& options) {
    auto t = [&](double ms) { return options.timings ? ms : 0.0; };
    nlohmann::json problem;
    problem["hash"] = hex64(report.problem_hash);
    problem["nx"] = report.nx;
    problem["ny"] = report.ny;
    problem["dim"] = report.dim;
    problem["cost"] = cost_spec_json(report.cost);
    problem["mass_scale"] = report.mass_scale;
    problem["cost_scale"] = report.cost_scale;
    problem["depth"] = report.depth;
    problem["shield"] = method_name(report.method);
    problem["candidates"] = report.candidates.name();
    problem["warm"] = warm_name(report.warm);

    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : report.levels) {
        nlohmann::json lj;
        lj["k"] = l.layer;
        lj["iters"] = l.iterations;
        nlohmann::json objs = nlohmann::json::array();
        for (Objective o : l.objectives) objs.push_back(to_string(o));
        lj["objectives"] = std::move(objs);
        lj["N_sizes"] = l.n_sizes;
        lj["psi_hat_calls"] = l.psi_hat_calls;
        lj["missed_total"] = l.missed_total;
        lj["pivots"] = l.pivots;
        lj["degenerate_pivots"] = l.degenerate_pivots;
        lj["t_solve_ms"] = t(l.t_solve_ms);
        lj["t_shield_ms"] = t(l.t_shield_ms);
        levels.push_back(std::move(lj));
    }

    nlohmann::json j;
    j["problem"] = std::move(problem);
    j["levels"] = std::move(levels);
    j["final_objective"] = to_string(report.final_objective);
    j["certified"] = report.certified;
    if (report.witness) j["witness"] = {report.witness->first, report.witness->second};
    j["t_total_ms"] = t(report.t_total_ms);
    return j;
}

nlohmann::json certificate_json(const Certificate& cert) {
    nlohmann::json j;
    j["kind"] = cert.kind_name();
    j["problem_hash"] = hex64(cert.problem_hash);
    j["objective"] = to_string(cert.objective);
    if (cert.witness) j["witness"] = {cert.witness->first, cert.witness->second};
    if (!cert.path.empty()) {
        nlohmann::json path = nlohmann::json::array();
        for (const auto& [x, y] : cert.path) path.push_back({x, y});
        j["path"] = std::move(path);
    }
    return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

const std::vector<std::string>& bench_columns() {
    static const std::vector<std::string> cols = {"preset", "size",     "seed",          "mode",       "warm",
                                                  "k",      "iters",    "N_max",         "N_sum",      "nx",
                                                  "psi_hat_calls", "pivots", "t_solve_ms", "t_shield_ms", "t_total_ms",
                                                  "final_objective", "certified"};
    return cols;
}

std::string bench_row(const BenchRow& r) {
    std::string s;
    auto add = [&](const std::string& v) {
        if (!s.empty()) s += ',';
        s += v;
    };
    add(r.preset);
    add(r.size);
    add(std::to_string(r.seed));
    add(r.mode);
    add(r.warm);
    add(std::to_string(r.k));
    add(std::to_string(r.iters));
    add(std::to_string(r.n_max));
    add(std::to_string(r.n_sum));
    add(std::to_string(r.nx));
    add(std::to_string(r.psi_hat_calls));
    add(std::to_string(r.pivots));
    add(format_double(r.t_solve_ms));
    add(format_double(r.t_shield_ms));
    add(format_double(r.t_total_ms));
    add(to_string(r.final_objective));
    add(r.certified ? "true" : "false");
    return s;
}

}  // namespace shieldot
