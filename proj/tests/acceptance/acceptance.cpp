// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "fraclab/harness.hpp"
#include "fraclab/limit_solver.hpp"
#include "fraclab/nonlocal_ops.hpp"
#include "fraclab/parallel.hpp"
#include "oracle.hpp"

using namespace fraclab;

namespace {

const std::string kConfigs = FRACLAB_CONFIG_DIR;
const std::string kCli = FRACLAB_CLI;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!detail.empty()) detail += "; ";
    detail += (cond ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Domain unit_interval(int n) { return build_domain(DomainSpec::interval(0.0, 1.0), n, 1.0); }

Weight uniform(const Domain& d) { return normalize_weight(ScalarField(d.size(), 1.0), d); }

ScalarField delta_pow(const Domain& d, double s) {
  ScalarField u = distance_field(d);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(u[i], s);
  return u;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const SweepResult& demo_sweep() {
  static const SweepResult r = run_p_sweep(load_config(kConfigs + "/demo.json"));
  return r;
}

Verdict seminorm_oracle() {
  Verdict v;
  const Domain d = unit_interval(9);
  const oracle::Interval iv{0.0, 1.0, 9};
  ScalarField hat(9, 0.0);
  for (int k = 0; k < 9; ++k) hat[k] = 1.0 - std::abs(2.0 * iv.node(k) - 1.0);
  for (double p : {2.0, 3.0, 5.0}) {
    const double mine = std::exp(p * gagliardo_seminorm_log(hat, d, {0.5, p, true}));
    const double err = std::abs(mine / oracle::seminorm_pow(hat.vector(), iv, 0.5, p) - 1.0);
    v.require(err <= 1e-12, "p=" + fmt("%g", p) + " rel " + fmt("%.2e", err));
  }
  return v;
}

Verdict lambda_oracle() {
  Verdict v;
  const Domain d = unit_interval(3);
  const auto sol = solve_extremal(d, uniform(d), {0.5, 2.0, true});
  const auto ref = oracle::brute_force_lambda({0.0, 1.0, 3}, 0.5, 2.0);
  const double rel = std::abs(std::exp(sol.log_lambda) / ref.value - 1.0);
  double sup = 0.0;
  for (int k = 0; k < 3; ++k) sup = std::max(sup, std::abs(sol.u_p[k] - ref.u[k]));
  v.require(sol.converged, "converged");
  v.require(rel <= 1e-4, "Lambda rel " + fmt("%.2e", rel));
  v.require(sup <= 1e-3, "u sup " + fmt("%.2e", sup));
  return v;
}

Verdict constraint_suite() {
  Verdict v;
  const ExperimentConfig cfg = load_config(kConfigs + "/demo.json");
  const SweepResult& r = demo_sweep();
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const PairKernelTable table(d);
  const auto fields = random_fields(d, cfg.seed, 200);
  double worst_k = 0.0, worst_el = 0.0, worst_ineq = -INFINITY, worst_log = -INFINITY;
  int solves = 0;
  for (const auto& sol : r.solutions) {
    if (!sol.converged) continue;
    ++solves;
    worst_k = std::max(worst_k, std::abs(geometric_mean_k(sol.u_p, w).log_value));
    worst_el = std::max(worst_el, sol.el_residual);
    const SeminormParams prm{cfg.s, sol.p, true};
    for (const auto& f : fields) {
      const double log_lhs = sol.log_lambda + sol.p * geometric_mean_k(f, w).log_value;
      const double log_rhs = sol.p * gagliardo_seminorm_log(f, table, prm);
      worst_ineq = std::max(worst_ineq, std::exp(log_lhs) - std::exp(log_rhs));
      worst_log = std::max(worst_log, log_lhs - log_rhs);
    }
  }
  v.require(solves == static_cast<int>(r.solutions.size()), std::to_string(solves) + " converged solves");
  v.require(worst_k <= 1e-10, "max |log k| " + fmt("%.2e", worst_k));
  v.require(worst_el <= 1e-6, "max el_residual/Lambda " + fmt("%.2e", worst_el));
  v.require(worst_ineq <= 1e-8, "max Lambda k^p - [v]^p " + fmt("%.3g", worst_ineq) + " (max log ratio " +
                                    fmt("%.3f", worst_log) + ")");
  return v;
}

Verdict seminorm_limit() {
  Verdict v;
  const Domain d = unit_interval(101);
  const Weight w = uniform(d);
  const PairKernelTable table(d);
  const ScalarField xi = build_xi(w, distance_field(d), d).xi;
  const double hs = holder_seminorm(xi, d, 0.5).value;
  double prev = INFINITY;
  bool monotone = true;
  double last = 0.0;
  std::string trace;
  for (double p : {8.0, 16.0, 32.0, 64.0, 128.0}) {
    const double gap = std::abs(std::exp(gagliardo_seminorm_log(xi, table, {0.5, p, true})) - hs) / hs;
    monotone = monotone && gap < prev;
    prev = gap;
    last = gap;
    trace += (trace.empty() ? "" : ",") + fmt("%.4f", gap);
  }
  v.require(monotone, "monotone rel gaps [" + trace + "]");
  v.require(last < 0.10, "gap at p=128 " + fmt("%.4f", last));
  return v;
}

Verdict asymptotics() {
  Verdict v;
  const SweepResult& r = demo_sweep();
  v.require(r.gaps_decreasing, "gaps decreasing");
  const auto& last = r.records.back();
  const double rel = r.gaps.back() / last.holder_of_up;
  v.require(rel <= 0.05, "final rel gap " + fmt("%.4f", rel));
  const ScalarField& u64 = r.solutions.back().u_p;
  const ScalarField& u32 = r.solutions[r.solutions.size() - 2].u_p;
  double sup = 0.0;
  for (std::size_t i = 0; i < u64.size(); ++i) sup = std::max(sup, std::abs(u64[i] - u32[i]));
  const double ratio = sup / u64.sup_norm();
  v.require(ratio <= 0.02, "sup|u64-u32|/|u64| " + fmt("%.4f", ratio));
  v.require(r.k_last >= 1.0 - 1e-3, "k_last " + fmt("%.12f", r.k_last));
  return v;
}

Verdict limit_problem() {
  Verdict v;
  {
    const Domain d = unit_interval(5);
    const auto lim = minimize_holder_quotient(d, uniform(d), 0.5, ScalarField(5, 1.0));
    const auto ref = oracle::brute_force_mu({0.0, 1.0, 5}, 0.5);
    const double rel = std::abs(lim.mu / ref.value - 1.0);
    v.require(rel <= 1e-3, "n=5 mu rel " + fmt("%.2e", rel));
  }
  const Domain d = unit_interval(101);
  const Weight w = uniform(d);
  const auto lim = minimize_holder_quotient(d, w, 0.5, build_xi(w, distance_field(d), d).xi);
  const double bound = 3.0 / std::sqrt(2.0);
  v.require(lim.mu >= bound - d.h(), "mu " + fmt("%.6f", lim.mu) + " >= " + fmt("%.4f", bound) + " - h");
  v.require(lim.residual_minus.sup <= 0.05 * lim.mu, "sup|L- v + mu| " + fmt("%.2e", lim.residual_minus.sup));
  v.require(lim.residual_sup_check.sup <= 0.05 * lim.mu, "max (L v)+ " + fmt("%.2e", lim.residual_sup_check.sup));
  const double vmin = *std::min_element(lim.v.begin(), lim.v.end());
  v.require(vmin > 0.0, "min v " + fmt("%.3e", vmin));
  return v;
}

Verdict closed_forms() {
  Verdict v;
  const Domain d = unit_interval(101);
  const double h = d.h();
  const Weight w = uniform(d);
  const ScalarField delta = distance_field(d);

  const double e1 = std::abs(holder_seminorm(delta, d, 0.5).value - std::sqrt(0.5));
  v.require(e1 <= std::sqrt(h), "|delta|_0.5 err " + fmt("%.2e", e1) + " vs h^0.5 " + fmt("%.2e", std::sqrt(h)));

  const ScalarField ds = delta_pow(d, 0.5);
  double e2 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) e2 = std::max(e2, std::abs(linf_minus(ds, d, 0.5, i) + 1.0));
  v.require(e2 <= std::sqrt(h), "L- delta^0.5 err " + fmt("%.2e", e2));

  const double e3 = std::abs(geometric_mean_k(delta, w).value - std::exp(-1.0) / 2.0);
  const Domain d2 = unit_interval(201);
  const double e3b = std::abs(geometric_mean_k(distance_field(d2), uniform(d2)).value - std::exp(-1.0) / 2.0);
  v.require(e3 <= h * h, "k(delta) err " + fmt("%.2e", e3) + " vs h^2 " + fmt("%.2e", h * h) + ", observed order " +
                             fmt("%.2f", std::log(e3 / e3b) / std::log(d.h() / d2.h())));

  const double e4 = std::abs(omega_distribution(w, delta, 0.25) - 0.5);
  v.require(e4 <= h, "sigma(0.25) err " + fmt("%.2e", e4));

  const double e5 = coarea_check_1d(delta, d);
  v.require(e5 <= h * h, "co-area err " + fmt("%.2e", e5));
  return v;
}

Verdict ratio_chain() {
  Verdict v;
  const ExperimentConfig cfg = load_config(kConfigs + "/demo.json");
  const SweepResult& r = demo_sweep();
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  double worst = -INFINITY;
  for (const auto& u : random_fields(d, cfg.seed, 200)) {
    const double k = geometric_mean_k(u, w).value;
    double mid = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) mid += std::abs(u[i]) / r.limit.v[i] * w.mass(i);
    const double top = holder_seminorm(u, d, cfg.s).value / r.limit.mu;
    worst = std::max({worst, k / mid - 1.0, mid / top - 1.0});
  }
  const double allowed = 1e-8 + r.limit.polish_gap;
  v.require(worst <= allowed, "max rel violation " + fmt("%.3e", worst) + " allowed " + fmt("%.1e", allowed));
  return v;
}

Verdict determinism() {
  Verdict v;
  const std::string dir = std::filesystem::temp_directory_path().string();
  std::string csv[2], summary[2];
  for (int k = 0; k < 2; ++k) {
    const std::string stem = dir + "/fraclab_det" + std::to_string(k);
    const std::string cmd = "\"" + kCli + "\" sweep --deterministic --config \"" + kConfigs + "/demo.json\" --csv \"" +
                            stem + ".csv\" --summary \"" + stem + ".json\"";
    const int rc = std::system(cmd.c_str());
    v.require(rc == 0, "run " + std::to_string(k) + " exit " + std::to_string(rc));
    csv[k] = slurp(stem + ".csv");
    summary[k] = slurp(stem + ".json");
  }
  v.require(!csv[0].empty() && csv[0] == csv[1], "CSV identical");
  v.require(!summary[0].empty() && summary[0] == summary[1], "JSON identical");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "seminorm oracle", 1.0, seminorm_oracle},
      {2, "Lambda_p oracle", 30.0, lambda_oracle},
      {3, "constraint and minimality", 600.0, constraint_suite},
      {4, "seminorm limit", 120.0, seminorm_limit},
      {5, "asymptotic convergence", 600.0, asymptotics},
      {6, "limit problem", 300.0, limit_problem},
      {7, "closed forms", 600.0, closed_forms},
      {8, "ratio chain", 600.0, ratio_chain},
      {9, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < c.limit_seconds, fmt("%.2f s", secs) + " < " + fmt("%g s", c.limit_seconds));
    if (!v.ok) ++failed;
    std::printf("%s [%d] %s: %s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed;
}
