#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclab/extremal_solver.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/limit_solver.hpp"
#include "fraclab/weight_xi.hpp"

namespace fraclab {

enum class InitSource { Xi, DeltaS, Warm };
enum class LimitInit { UpFinal, Xi };

struct SolverConfig {
  InitSource init = InitSource::Warm;
  DescentMethod method = DescentMethod::Newton;
  double grad_tol = 0.0;
  int max_iter = 50000;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct LimitConfig {
  LimitInit init = LimitInit::UpFinal;
  LimitOptions options;
};

/// Experiment description, read from JSON:
///
///   {
///     "domain": {"shape": "interval", "bounds": [0, 1]},
///     "n_per_axis": 101,
///     "collar_width": 1.0,
///     "weight": "uniform",
///     "s": 0.5,
///     "p_list": [4, 8, 16, 32, 64],
///     "solver": {"init": "warm", "grad_tol": 1e-8, "max_iter": 50000, "method": "newton"},
///     "limit": {"init": "u_p_final", "q_ladder": [16, 32, 64, 128, 256]},
///     "output": {"csv": "sweep.csv", "summary": "summary.json"},
///     "seed": 12345,
///     "deterministic": false,
///     "n_random": 200
///   }
///
/// A rectangle uses "bounds": [a, b, c, d]. The weight is "uniform", a nodal
/// array, or an object with "kind" one of "uniform", "power" (delta^alpha,
/// key "alpha"), "gaussian" (keys "center", "width") or "nodal" (key "values").
struct ExperimentConfig {
  DomainSpec domain = DomainSpec::interval(0.0, 1.0);
  int n_per_axis = 101;
  std::optional<double> collar_width;  ///< domain diameter when absent
  nlohmann::json weight = "uniform";
  double s = 0.5;
  std::vector<double> p_list{4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  SolverConfig solver;
  LimitConfig limit;
  std::string csv_path;
  std::string summary_path;
  std::uint64_t seed = 12345;
  bool deterministic = false;
  int n_random = 200;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  Domain make_domain() const;
  Weight make_weight(const Domain& d) const;
};

/// Throws ConfigError with the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Throws ConfigError naming the path when it cannot be read or parsed.
ExperimentConfig load_config(const std::string& path);

struct SweepRecord {
  double p = 0.0;
  double lambda_root = 0.0;
  double holder_of_up = 0.0;
  double el_residual = 0.0;
  double sup_dist_to_prev = 0.0;  ///< NaN for the first record
  double log_lambda = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<ExtremalSolution> solutions;
  ScalarField u_last;
  double k_last = 0.0;
  LimitSolution limit;
  /// sup_i |v_i k_last - u_last_i|
  double vsu_distance = 0.0;
  /// |lambda_root - holder_of_up| per record
  std::vector<double> gaps;
  bool gaps_decreasing = false;
  bool dist_decreasing_last3 = false;
  int flagged = 0;  ///< records with converged = false
};

/// Solves the extremal problem along cfg.p_list and the limit problem from
/// the last iterate. Throws SweepError when no solve converges.
SweepResult run_p_sweep(const ExperimentConfig& cfg);

/// One row per record: p, lambda_root, holder_of_up, el_residual, sup_dist_to_prev.
std::string sweep_csv(const SweepResult& r);
std::vector<SweepRecord> parse_sweep_csv(const std::string& text);

struct AuditCheck {
  std::string name;
  double p = 0.0;  ///< 0 for checks that do not depend on p
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool passed = true;
};

/// Seeded strictly positive fields delta^beta (eps + sum of Gaussian bumps).
std::vector<ScalarField> random_fields(const Domain& d, std::uint64_t seed, int count);

/// Checks the log-Sobolev inequality at every record, Jensen, the ratio
/// chain against the limit v, and the k_last bracket, over cfg.n_random fields.
/// Violations are relative and measured in the log domain where the sides are powers.
AuditReport audit_inequalities(const ExperimentConfig& cfg, const SweepResult& sweep, int n_random);

nlohmann::json sweep_summary(const SweepResult& r);
nlohmann::json audit_summary(const AuditReport& a);

}  // namespace fraclab
