#pragma once

// JSON for solve reports, cost specs and certificates, plus the flat CSV
// rows written by benchmarks.

#include <string>
#include <vector>

#include <json.hpp>

#include "shieldot/costs.hpp"
#include "shieldot/driver.hpp"
#include "shieldot/verify.hpp"

namespace shieldot {

struct ReportOptions {
    /// Wall times are written as 0 unless set, so that repeated runs produce
    /// identical files.
    bool timings = false;
};

nlohmann::json cost_spec_json(const CostSpec& spec);
nlohmann::json report_json(const SolveReport& report, const ReportOptions& options = {});
nlohmann::json certificate_json(const Certificate& cert);

std::string method_name(ShieldMethod m);
std::string warm_name(WarmPolicy w);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Column names of bench_row.
const std::vector<std::string>& bench_columns();
struct BenchRow {
    std::string preset;
    std::string size;
    std::uint64_t seed = 0;
    std::string mode;
    std::string warm;
    int k = 0;
    int iters = 0;
    std::size_t n_max = 0;
    std::size_t n_sum = 0;
    std::size_t nx = 0;
    std::uint64_t psi_hat_calls = 0;
    std::uint64_t pivots = 0;
    double t_solve_ms = 0.0;
    double t_shield_ms = 0.0;
    double t_total_ms = 0.0;
    Objective final_objective = 0;
    bool certified = false;
};
std::string bench_row(const BenchRow& row);

}  // namespace shieldot
