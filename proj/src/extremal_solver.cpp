#include "fraclab/extremal_solver.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"
#include "power_energy.hpp"

namespace fraclab {

namespace {

// [u]^p = sum_{i<j} c_ij |u_i - u_j|^p + sum_i b_i |u_i|^p with both pair
// orderings folded into c_ij and both exterior orderings into b_i.
detail::PowerEnergy rayleigh_energy(const PairKernelTable& table, const SeminormParams& prm) {
  const std::size_t n = table.size();
  const double kexp = prm.kernel_exponent(table.domain().dimension());
  const double lh = table.log_cell_measure();
  const double log2 = std::log(2.0);
  std::vector<double> pair(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pair[i * n + j] = log2 - kexp * table.log_distance(i, j) + 2.0 * lh;
    }
  }
  std::vector<double> self = table.exterior_log_mass(prm.s * prm.p);
  for (double& v : self) v += log2 + lh;
  return detail::PowerEnergy(prm.p, std::move(pair), std::move(self));
}

std::vector<double> masses_of(const Weight& w) {
  std::vector<double> m(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) m[i] = w.mass(i);
  return m;
}

void check_weight(const Weight& w, const Domain& d) {
  if (w.size() != d.size()) throw InvalidWeightError("weight length does not match the domain");
}

}  // namespace

ScalarField default_extremal_init(const Domain& d, const Weight& w, double s) {
  const ScalarField delta = distance_field(d);
  try {
    return build_xi(w, delta, d).xi;
  } catch (const DegenerateLevelError&) {
    ScalarField out = delta;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(out[i], s);
    return out;
  }
}

double ExtremalOptions::effective_grad_tol(std::size_t nodes) const {
  if (grad_tol > 0.0) return grad_tol;
  return nodes <= 200 ? 1e-8 : 1e-6;
}

double log_rayleigh(const ScalarField& wlog, const PairKernelTable& table, const Weight& w,
                    const SeminormParams& prm) {
  check_weight(w, table.domain());
  if (!wlog.all_finite()) throw DomainError("log field contains non-finite values");
  std::vector<double> u(wlog.size());
  double shift = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = std::exp(wlog[i]);
    shift += wlog[i] * w.mass(i);
  }
  return gagliardo_seminorm_log(ScalarField(std::move(u)), table, prm) - shift;
}

double log_rayleigh(const ScalarField& wlog, const Domain& d, const Weight& w, const SeminormParams& prm) {
  return log_rayleigh(wlog, PairKernelTable(d), w, prm);
}

ScalarField log_rayleigh_gradient(const ScalarField& wlog, const PairKernelTable& table, const Weight& w,
                                  const SeminormParams& prm) {
  prm.validate();
  check_weight(w, table.domain());
  const auto energy = rayleigh_energy(table, prm);
  std::vector<double> u(wlog.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(wlog[i]);
  std::vector<double> grad(u.size());
  energy.objective_gradient(u, masses_of(w), grad);
  return ScalarField(std::move(grad));
}

ExtremalSolution solve_extremal(const PairKernelTable& table, const Weight& w, const SeminormParams& prm,
                                const ExtremalOptions& opts) {
  prm.validate();
  const Domain& d = table.domain();
  check_weight(w, d);

  std::vector<double> u0;
  if (opts.init) {
    if (opts.init->size() != d.size()) throw InvalidInitError("init length does not match the domain");
    u0 = opts.init->vector();
  } else {
    u0 = default_extremal_init(d, w, prm.s).vector();
  }
  for (double v : u0) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInitError("init must be strictly positive and finite");
  }

  detail::DescentSettings st;
  st.method = opts.method == DescentMethod::Newton ? detail::Method::Newton : detail::Method::Gradient;
  st.grad_tol = opts.effective_grad_tol(d.size());
  st.max_iter = opts.max_iter;
  st.armijo = opts.armijo;
  st.backtrack = opts.backtrack;

  const auto energy = rayleigh_energy(table, prm);
  const auto masses = masses_of(w);
  detail::DescentResult res = detail::minimize(energy, masses, std::move(u0), st);

  double log_k = 0.0;
  for (std::size_t i = 0; i < res.u.size(); ++i) {
    if (masses[i] > 0.0) log_k += masses[i] * std::log(res.u[i]);
  }
  const double scale = std::exp(-log_k);
  for (double& v : res.u) v *= scale;

  ExtremalSolution sol;
  sol.p = prm.p;
  sol.u_p = ScalarField(std::move(res.u));
  sol.log_lambda = prm.p * gagliardo_seminorm_log(sol.u_p, table, prm);
  sol.iterations = res.iterations;
  sol.converged = res.converged;
  sol.grad_norm = res.grad_norm;
  sol.residual_history = std::move(res.residuals);
  const auto [lo, hi] = std::minmax_element(sol.u_p.begin(), sol.u_p.end());
  sol.degenerate = *lo < 1e-12 * *hi;
  sol.el_residual = euler_lagrange_residual(sol, table, w, prm);
  return sol;
}

ExtremalSolution solve_extremal(const Domain& d, const Weight& w, const SeminormParams& prm,
                                const ExtremalOptions& opts) {
  return solve_extremal(PairKernelTable(d), w, prm, opts);
}

double euler_lagrange_residual(const ExtremalSolution& sol, const PairKernelTable& table, const Weight& w,
                               const SeminormParams& prm) {
  prm.validate();
  const Domain& d = table.domain();
  check_weight(w, d);
  const ScalarField& u = sol.u_p;
  if (u.size() != d.size()) throw DomainError("field length does not match the domain");
  for (double v : u) {
    if (!(v > 0.0)) throw DomainError("euler_lagrange_residual needs a positive field");
  }
  const std::size_t n = table.size();
  const double p = prm.p;
  const double kexp = prm.kernel_exponent(d.dimension());
  const double lh = table.log_cell_measure();
  const double log2 = std::log(2.0);
  const std::vector<double> ext = table.exterior_log_mass(prm.s * p);

  std::vector<double> rows(n, 0.0);
  parallel_rows(n, [&](std::size_t i) {
    SignedLogSum acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double diff = u[i] - u[j];
      if (diff == 0.0) continue;
      acc.add(log2 + (p - 1.0) * std::log(std::abs(diff)) - kexp * table.log_distance(i, j) + 2.0 * lh,
              diff < 0.0);
    }
    acc.add(log2 + (p - 1.0) * std::log(u[i]) + ext[i] + lh, false);
    if (w.mass(i) > 0.0) acc.add(sol.log_lambda + std::log(w.mass(i)) - std::log(u[i]), true);
    rows[i] = std::abs(std::exp(acc.log_positive() - sol.log_lambda) - std::exp(acc.log_negative() - sol.log_lambda));
  });
  return *std::max_element(rows.begin(), rows.end());
}

double euler_lagrange_residual(const ExtremalSolution& sol, const Domain& d, const Weight& w,
                               const SeminormParams& prm) {
  return euler_lagrange_residual(sol, PairKernelTable(d), w, prm);
}

}  // namespace fraclab
