#include "fraclab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

DomainSpec parse_domain(const json& j) {
  const std::string shape = get_or<std::string>(j, "shape", "interval");
  const auto bounds = get_or<std::vector<double>>(j, "bounds", {});
  if (shape == "interval") {
    if (bounds.empty()) return DomainSpec::interval(0.0, 1.0);
    if (bounds.size() != 2) throw ConfigError("interval bounds need 2 values");
    return DomainSpec::interval(bounds[0], bounds[1]);
  }
  if (shape == "rectangle") {
    if (bounds.empty()) return DomainSpec::rectangle(0.0, 1.0, 0.0, 1.0);
    if (bounds.size() != 4) throw ConfigError("rectangle bounds need 4 values");
    return DomainSpec::rectangle(bounds[0], bounds[1], bounds[2], bounds[3]);
  }
  throw ConfigError("unknown domain shape '" + shape + "'");
}

InitSource parse_init(const std::string& s) {
  if (s == "xi") return InitSource::Xi;
  if (s == "delta_s") return InitSource::DeltaS;
  if (s == "warm") return InitSource::Warm;
  throw ConfigError("unknown solver init '" + s + "'");
}

DescentMethod parse_method(const std::string& s) {
  if (s == "newton") return DescentMethod::Newton;
  if (s == "gradient") return DescentMethod::Gradient;
  throw ConfigError("unknown solver method '" + s + "'");
}

ScalarField delta_power(const Domain& d, double s) {
  ScalarField out = distance_field(d);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(out[i], s);
  return out;
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

ScalarField absolute(const ScalarField& u) {
  ScalarField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(out[i]);
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_per_axis < 3) throw ConfigError("n_per_axis must be at least 3");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("s must lie in (0, 1)");
  if (p_list.empty()) throw ConfigError("p_list is empty");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (!(p_list[i] > 1.0) || !std::isfinite(p_list[i])) throw ConfigError("p_list entries must exceed 1");
    if (i > 0 && !(p_list[i] > p_list[i - 1])) throw ConfigError("p_list must be strictly increasing");
  }
  if (collar_width && !(*collar_width > 0.0)) throw ConfigError("collar_width must be positive");
  if (n_random < 0) throw ConfigError("n_random must be nonnegative");
  if (limit.options.q_ladder.empty()) throw ConfigError("limit q_ladder is empty");
}

Domain ExperimentConfig::make_domain() const {
  return build_domain(domain, n_per_axis, collar_width.value_or(domain.diameter()));
}

Weight ExperimentConfig::make_weight(const Domain& d) const {
  const std::size_t n = d.size();
  const auto nodes = d.interior_nodes();
  std::vector<double> raw(n, 1.0);
  if (weight.is_array()) {
    raw = weight.get<std::vector<double>>();
  } else {
    const json spec = weight.is_string() ? json{{"kind", weight}} : weight;
    const std::string kind = get_or<std::string>(spec, "kind", "uniform");
    if (kind == "uniform") {
    } else if (kind == "power") {
      const double alpha = get_or<double>(spec, "alpha", 1.0);
      const ScalarField delta = distance_field(d);
      for (std::size_t i = 0; i < n; ++i) raw[i] = std::pow(delta[i], alpha);
    } else if (kind == "gaussian") {
      auto center = get_or<std::vector<double>>(spec, "center", {});
      const double width = get_or<double>(spec, "width", 0.1);
      if (center.size() != static_cast<std::size_t>(d.dimension())) {
        throw ConfigError("gaussian weight center must match the dimension");
      }
      if (!(width > 0.0)) throw ConfigError("gaussian weight width must be positive");
      center.resize(2, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = distance(nodes[i], Point{center[0], d.dimension() == 2 ? center[1] : nodes[i][1]});
        raw[i] = std::exp(-r * r / (2.0 * width * width));
      }
    } else if (kind == "nodal") {
      raw = get_or<std::vector<double>>(spec, "values", {});
    } else {
      throw ConfigError("unknown weight kind '" + kind + "'");
    }
  }
  return normalize_weight(ScalarField(std::move(raw)), d);
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"domain", "n_per_axis", "collar_width", "weight", "s",
                                              "p_list", "solver", "limit", "output", "seed",
                                              "deterministic", "n_random"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  ExperimentConfig cfg;
  if (j.contains("domain")) cfg.domain = parse_domain(j.at("domain"));
  cfg.n_per_axis = get_or<int>(j, "n_per_axis", cfg.n_per_axis);
  if (j.contains("collar_width")) cfg.collar_width = get_or<double>(j, "collar_width", 0.0);
  if (j.contains("weight")) cfg.weight = j.at("weight");
  cfg.s = get_or<double>(j, "s", cfg.s);
  cfg.p_list = get_or<std::vector<double>>(j, "p_list", cfg.p_list);
  if (j.contains("solver")) {
    const json& sj = j.at("solver");
    cfg.solver.init = parse_init(get_or<std::string>(sj, "init", "warm"));
    cfg.solver.method = parse_method(get_or<std::string>(sj, "method", "newton"));
    cfg.solver.grad_tol = get_or<double>(sj, "grad_tol", cfg.solver.grad_tol);
    cfg.solver.max_iter = get_or<int>(sj, "max_iter", cfg.solver.max_iter);
    cfg.solver.armijo = get_or<double>(sj, "armijo", cfg.solver.armijo);
    cfg.solver.backtrack = get_or<double>(sj, "backtrack", cfg.solver.backtrack);
  }
  if (j.contains("limit")) {
    const json& lj = j.at("limit");
    const std::string init = get_or<std::string>(lj, "init", "u_p_final");
    if (init == "u_p_final") {
      cfg.limit.init = LimitInit::UpFinal;
    } else if (init == "xi") {
      cfg.limit.init = LimitInit::Xi;
    } else {
      throw ConfigError("unknown limit init '" + init + "'");
    }
    LimitOptions& lo = cfg.limit.options;
    lo.q_ladder = get_or<std::vector<double>>(lj, "q_ladder", lo.q_ladder);
    lo.grad_tol = get_or<double>(lj, "grad_tol", lo.grad_tol);
    lo.max_iter = get_or<int>(lj, "max_iter", lo.max_iter);
    lo.polish = get_or<bool>(lj, "polish", lo.polish);
    lo.polish_gap = get_or<double>(lj, "polish_gap", lo.polish_gap);
  }
  if (j.contains("output")) {
    cfg.csv_path = get_or<std::string>(j.at("output"), "csv", "");
    cfg.summary_path = get_or<std::string>(j.at("output"), "summary", "");
  }
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.deterministic = get_or<bool>(j, "deterministic", cfg.deterministic);
  cfg.n_random = get_or<int>(j, "n_random", cfg.n_random);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file '" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SweepResult run_p_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const PairKernelTable table(d);
  const ScalarField xi = default_extremal_init(d, w, cfg.s);

  SweepResult out;
  ExtremalOptions opts;
  opts.method = cfg.solver.method;
  opts.grad_tol = cfg.solver.grad_tol;
  opts.max_iter = cfg.solver.max_iter;
  opts.armijo = cfg.solver.armijo;
  opts.backtrack = cfg.solver.backtrack;

  for (double p : cfg.p_list) {
    const SeminormParams prm{cfg.s, p, true};
    switch (cfg.solver.init) {
      case InitSource::Xi:
        opts.init = xi;
        break;
      case InitSource::DeltaS:
        opts.init = delta_power(d, cfg.s);
        break;
      case InitSource::Warm:
        opts.init = out.solutions.empty() ? xi : out.solutions.back().u_p;
        break;
    }
    ExtremalSolution sol = solve_extremal(table, w, prm, opts);

    SweepRecord rec;
    rec.p = p;
    rec.log_lambda = sol.log_lambda;
    rec.lambda_root = std::exp(sol.log_lambda / p);
    rec.holder_of_up = holder_seminorm(sol.u_p, d, cfg.s).value;
    rec.el_residual = sol.el_residual;
    rec.sup_dist_to_prev = out.solutions.empty() ? kNaN : sup_distance(sol.u_p, out.solutions.back().u_p);
    rec.iterations = sol.iterations;
    rec.converged = sol.converged;
    if (!sol.converged) ++out.flagged;
    out.records.push_back(rec);
    out.solutions.push_back(std::move(sol));
  }
  if (out.flagged == static_cast<int>(out.records.size())) throw SweepError("no solve in the sweep converged");

  out.u_last = out.solutions.back().u_p;
  const ScalarField& limit_init = cfg.limit.init == LimitInit::UpFinal ? out.u_last : xi;
  out.limit = minimize_holder_quotient(d, w, cfg.s, limit_init, cfg.limit.options);

  double log_k = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (w.mass(i) > 0.0) log_k += w.mass(i) * std::log(out.u_last[i] / out.limit.v[i]);
  }
  out.k_last = std::exp(log_k);
  out.vsu_distance = sup_distance(out.limit.v.scaled(out.k_last), out.u_last);

  for (const auto& r : out.records) out.gaps.push_back(std::abs(r.lambda_root - r.holder_of_up));
  out.gaps_decreasing = true;
  for (std::size_t i = 1; i < out.gaps.size(); ++i) {
    out.gaps_decreasing = out.gaps_decreasing && out.gaps[i] < out.gaps[i - 1];
  }
  const std::size_t m = out.records.size();
  out.dist_decreasing_last3 = m >= 4 && out.records[m - 1].sup_dist_to_prev < out.records[m - 2].sup_dist_to_prev &&
                              out.records[m - 2].sup_dist_to_prev < out.records[m - 3].sup_dist_to_prev;
  return out;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "p,lambda_root,holder_of_up,el_residual,sup_dist_to_prev\n";
  for (const auto& rec : r.records) {
    out += format_double(rec.p) + "," + format_double(rec.lambda_root) + "," + format_double(rec.holder_of_up) +
           "," + format_double(rec.el_residual) + "," + format_double(rec.sup_dist_to_prev) + "\n";
  }
  return out;
}

std::vector<SweepRecord> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "p,lambda_root,holder_of_up,el_residual,sup_dist_to_prev") {
    throw ConfigError("unexpected sweep CSV header");
  }
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw ConfigError("bad CSV cell '" + cell + "'");
      cols.push_back(v);
    }
    if (cols.size() != 5) throw ConfigError("sweep CSV rows need 5 columns");
    SweepRecord rec;
    rec.p = cols[0];
    rec.lambda_root = cols[1];
    rec.holder_of_up = cols[2];
    rec.el_residual = cols[3];
    rec.sup_dist_to_prev = cols[4];
    out.push_back(rec);
  }
  return out;
}

std::vector<ScalarField> random_fields(const Domain& d, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ScalarField delta = distance_field(d);
  const auto nodes = d.interior_nodes();
  const DomainSpec& sp = d.spec();
  const double diam = d.diameter();

  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int f = 0; f < count; ++f) {
    const double beta = 0.3 + 0.7 * unit(rng);
    const double eps = 0.01 + 0.19 * unit(rng);
    const int bumps = 1 + static_cast<int>(unit(rng) * 4.0);
    std::vector<std::array<double, 4>> bump(static_cast<std::size_t>(bumps));
    for (auto& b : bump) {
      b[0] = 0.1 + 0.9 * unit(rng);
      b[1] = sp.a + (sp.b - sp.a) * unit(rng);
      b[2] = d.dimension() == 2 ? sp.c + (sp.d - sp.c) * unit(rng) : 0.0;
      b[3] = (0.05 + 0.25 * unit(rng)) * diam;
    }
    ScalarField u(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      double acc = eps;
      for (const auto& b : bump) {
        const double r = distance(nodes[i], Point{b[1], d.dimension() == 2 ? b[2] : nodes[i][1]});
        acc += b[0] * std::exp(-r * r / (2.0 * b[3] * b[3]));
      }
      u[i] = std::pow(delta[i], beta) * acc;
    }
    out.push_back(std::move(u));
  }
  return out;
}

AuditReport audit_inequalities(const ExperimentConfig& cfg, const SweepResult& sweep, int n_random) {
  const Domain d = cfg.make_domain();
  const Weight w = cfg.make_weight(d);
  const PairKernelTable table(d);
  const std::vector<ScalarField> fields = random_fields(d, cfg.seed, n_random);
  const double slack = 1e-8;

  AuditReport rep;
  auto finish = [&](AuditCheck c) {
    c.passed = c.max_violation <= c.tolerance;
    rep.passed = rep.passed && c.passed;
    rep.checks.push_back(std::move(c));
  };

  // Lambda_p k(u)^p <= [u]^p, compared as logarithms.
  for (std::size_t r = 0; r < sweep.records.size(); ++r) {
    const SweepRecord& rec = sweep.records[r];
    const SeminormParams prm{cfg.s, rec.p, true};
    AuditCheck c{"log_sobolev", rec.p, -std::numeric_limits<double>::infinity(), slack, true};
    for (const auto& u : fields) {
      const GeometricMean k = geometric_mean_k(u, w);
      if (k.degenerate) continue;
      const double lhs = rec.log_lambda + rec.p * k.log_value;
      const double rhs = rec.p * gagliardo_seminorm_log(u, table, prm);
      c.max_violation = std::max(c.max_violation, lhs - rhs);
    }
    finish(c);
  }

  AuditCheck jensen{"jensen", 0.0, -std::numeric_limits<double>::infinity(), slack, true};
  AuditCheck chain_v{"chain_v", 0.0, -std::numeric_limits<double>::infinity(), slack + sweep.limit.polish_gap, true};
  AuditCheck chain_last{"chain_u_last", 0.0, -std::numeric_limits<double>::infinity(), slack, true};
  const double u_last_holder = holder_seminorm(sweep.u_last, d, cfg.s).value;
  for (const auto& raw : fields) {
    const ScalarField u = absolute(raw);
    const GeometricMean k = geometric_mean_k(u, w);
    if (k.degenerate) continue;
    double mean = 0.0;
    double against_v = 0.0;
    double against_last = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      mean += u[i] * w.mass(i);
      against_v += u[i] / sweep.limit.v[i] * w.mass(i);
      against_last += u[i] / k.value / sweep.u_last[i] * w.mass(i);
    }
    const double holder = holder_seminorm(u, d, cfg.s).value;
    jensen.max_violation = std::max(jensen.max_violation, k.value / mean - 1.0);
    chain_v.max_violation = std::max({chain_v.max_violation, k.value / against_v - 1.0,
                                    against_v / (holder / sweep.limit.mu) - 1.0});
    chain_last.max_violation = std::max({chain_last.max_violation, (1.0 / sweep.k_last) / against_last - 1.0,
                                     against_last / (holder / k.value / u_last_holder) - 1.0});
  }
  finish(jensen);
  finish(chain_v);
  finish(chain_last);
  return rep;
}

json sweep_summary(const SweepResult& r) {
  json recs = json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"p", rec.p},
                    {"lambda_root", rec.lambda_root},
                    {"holder_of_up", rec.holder_of_up},
                    {"el_residual", rec.el_residual},
                    {"sup_dist_to_prev", rec.sup_dist_to_prev},
                    {"log_lambda", rec.log_lambda},
                    {"iterations", rec.iterations},
                    {"converged", rec.converged}});
  }
  json ladder = json::array();
  for (const auto& st : r.limit.q_ladder_trace) {
    ladder.push_back({{"q", st.q},
                      {"smoothed_quotient", st.smoothed_quotient},
                      {"true_quotient", st.true_quotient},
                      {"iterations", st.iterations},
                      {"converged", st.converged}});
  }
  return {{"records", recs},
          {"mu", r.limit.mu},
          {"k_last", r.k_last},
          {"vsu_distance", r.vsu_distance},
          {"gaps", r.gaps},
          {"gaps_decreasing", r.gaps_decreasing},
          {"dist_decreasing_last3", r.dist_decreasing_last3},
          {"flagged", r.flagged},
          {"limit",
           {{"residual_minus_sup", r.limit.residual_minus.sup},
            {"residual_sup_check_max", r.limit.residual_sup_check.sup},
            {"converged", r.limit.converged},
            {"polish_iterations", r.limit.polish_iterations},
            {"polish_gap", r.limit.polish_gap},
            {"q_ladder_trace", ladder}}}};
}

json audit_summary(const AuditReport& a) {
  json checks = json::array();
  for (const auto& c : a.checks) {
    checks.push_back({{"name", c.name},
                      {"p", c.p},
                      {"max_violation", c.max_violation},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  }
  return {{"passed", a.passed}, {"checks", checks}};
}

}  // namespace fraclab
