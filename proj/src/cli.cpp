#include "fraclab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include "fraclab/error.hpp"
#include "fraclab/harness.hpp"
#include "fraclab/parallel.hpp"
#include "oracle.hpp"

namespace fraclab {

using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::optional<double> p;
  bool deterministic = false;
  std::optional<std::uint64_t> seed;
  std::string csv;
  std::string summary;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

ExperimentConfig configure(const Flags& fl) {
  ExperimentConfig cfg = fl.config.empty() ? ExperimentConfig{} : load_config(fl.config);
  if (fl.seed) cfg.seed = *fl.seed;
  if (fl.deterministic) cfg.deterministic = true;
  if (!fl.csv.empty()) cfg.csv_path = fl.csv;
  if (!fl.summary.empty()) cfg.summary_path = fl.summary;
  set_deterministic(cfg.deterministic);
  return cfg;
}

// Writes to the configured path, or to `out` when none is set.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

int cmd_xi(const ExperimentConfig& cfg, std::ostream& out) {
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const ScalarField delta = distance_field(d);
  const XiConstruction xc = build_xi(w, delta, d);

  json sigma = json::array();
  const double top = *std::max_element(delta.begin(), delta.end());
  for (int k = 0; k <= 20; ++k) {
    const double t = top * k / 20.0;
    sigma.push_back({{"t", t}, {"sigma", omega_distribution(w, delta, t)}});
  }
  json k_eps_samples = json::array();
  for (double frac : {0.05, 0.1, 0.25}) {
    const double eps = frac * d.inradius();
    if (eps > 0.0 && eps < d.inradius()) k_eps_samples.push_back({{"eps", eps}, {"k_eps", k_eps(w, d, eps)}});
  }
  const json j{{"levels", xc.levels.levels},
               {"truncated", xc.levels.truncated},
               {"truncation_reason", xc.levels.truncation_reason},
               {"scale_k", xc.scale_k},
               {"xi", xc.xi.vector()},
               {"sigma", sigma},
               {"k_eps", k_eps_samples}};
  emit(cfg.summary_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_solve(const ExperimentConfig& cfg, double p, std::ostream& out) {
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  ExtremalOptions opts;
  opts.method = cfg.solver.method;
  opts.grad_tol = cfg.solver.grad_tol;
  opts.max_iter = cfg.solver.max_iter;
  opts.armijo = cfg.solver.armijo;
  opts.backtrack = cfg.solver.backtrack;
  if (cfg.solver.init == InitSource::DeltaS) {
    ScalarField init = distance_field(d);
    for (std::size_t i = 0; i < init.size(); ++i) init[i] = std::pow(init[i], cfg.s);
    opts.init = init;
  }
  const ExtremalSolution sol = solve_extremal(d, w, {cfg.s, p, true}, opts);
  const json j{{"p", sol.p},
               {"log_lambda", sol.log_lambda},
               {"lambda_root", std::exp(sol.log_lambda / sol.p)},
               {"el_residual", sol.el_residual},
               {"iterations", sol.iterations},
               {"converged", sol.converged},
               {"degenerate", sol.degenerate},
               {"u_p", sol.u_p.vector()}};
  emit(cfg.summary_path, j.dump(2) + "\n", out);
  return sol.converged ? kExitOk : kExitNonConvergence;
}

int cmd_sweep(const ExperimentConfig& cfg, bool with_audit, std::ostream& out) {
  const SweepResult r = run_p_sweep(cfg);
  json summary = sweep_summary(r);
  int code = r.flagged > 0 || !r.limit.converged ? kExitNonConvergence : kExitOk;
  if (with_audit) {
    const AuditReport a = audit_inequalities(cfg, r, cfg.n_random);
    summary["audit"] = audit_summary(a);
    if (!a.passed) code = kExitViolation;
  }
  emit(cfg.csv_path, sweep_csv(r), out);
  emit(cfg.summary_path, summary.dump(2) + "\n", out);
  return code;
}

int cmd_limit(const ExperimentConfig& cfg, std::ostream& out) {
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const ScalarField init = default_extremal_init(d, w, cfg.s);
  const LimitSolution lim = minimize_holder_quotient(d, w, cfg.s, init, cfg.limit.options);
  json ladder = json::array();
  for (const auto& st : lim.q_ladder_trace) {
    ladder.push_back({{"q", st.q}, {"smoothed_quotient", st.smoothed_quotient}, {"true_quotient", st.true_quotient}});
  }
  const json j{{"s", lim.s},
               {"mu", lim.mu},
               {"residual_minus_sup", lim.residual_minus.sup},
               {"residual_sup_check_max", lim.residual_sup_check.sup},
               {"converged", lim.converged},
               {"polish_gap", lim.polish_gap},
               {"q_ladder_trace", ladder},
               {"v", lim.v.vector()}};
  emit(cfg.summary_path, j.dump(2) + "\n", out);
  return lim.converged ? kExitOk : kExitNonConvergence;
}

int cmd_selftest(std::ostream& out) {
  bool ok = true;
  for (const auto& c : oracle::run_selftest()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  error=" << c.error << "  tol=" << c.tolerance << "\n";
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-constrained fractional Sobolev experiments"};
  app.require_subcommand(1, 1);
  Flags fl;
  auto add_common = [&fl](CLI::App* sub) {
    sub->add_option("--config", fl.config, "experiment JSON");
    sub->add_flag("--deterministic", fl.deterministic, "serial fixed-order reductions");
    sub->add_option("--seed", fl.seed, "seed for audit fields");
    sub->add_option("--csv", fl.csv, "CSV output path");
    sub->add_option("--summary", fl.summary, "JSON output path");
  };
  auto* xi = app.add_subcommand("xi", "build the admissible field xi");
  auto* solve = app.add_subcommand("solve", "solve the extremal problem at one p");
  auto* sweep = app.add_subcommand("sweep", "p-sweep plus limit problem");
  auto* limit = app.add_subcommand("limit", "Hoelder quotient minimiser");
  auto* audit = app.add_subcommand("audit", "p-sweep plus inequality audit");
  auto* selftest = app.add_subcommand("selftest", "oracle comparisons");
  for (auto* sub : {xi, solve, sweep, limit, audit, selftest}) add_common(sub);
  solve->add_option("--p", fl.p, "exponent p > 1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*selftest) return cmd_selftest(out);
    const ExperimentConfig cfg = configure(fl);
    if (*xi) return cmd_xi(cfg, out);
    if (*solve) return cmd_solve(cfg, *fl.p, out);
    if (*sweep) return cmd_sweep(cfg, false, out);
    if (*limit) return cmd_limit(cfg, out);
    return cmd_sweep(cfg, true, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SweepError& e) {
    err << "sweep error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace fraclab
