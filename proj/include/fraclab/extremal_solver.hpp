#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/nonlocal_ops.hpp"
#include "fraclab/weight_xi.hpp"

namespace fraclab {

enum class DescentMethod { Newton, Gradient };

struct ExtremalOptions {
  std::optional<ScalarField> init;  ///< positive start; default_extremal_init when empty
  DescentMethod method = DescentMethod::Newton;
  double grad_tol = 0.0;            ///< 0 selects 1e-8 up to 200 nodes, 1e-6 above
  int max_iter = 50000;
  double armijo = 1e-4;
  double backtrack = 0.5;

  double effective_grad_tol(std::size_t nodes) const;
};

struct ExtremalSolution {
  double p = 0.0;
  double log_lambda = 0.0;  ///< log Lambda_p = p log [u_p]_{s,p}
  ScalarField u_p;          ///< positive, k(u_p) = 1
  double el_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  bool degenerate = false;  ///< min u_p < 1e-12 max u_p
  std::vector<double> residual_history;
};

/// xi when the lattice resolves a dyadic level, delta^s otherwise.
ScalarField default_extremal_init(const Domain& d, const Weight& w, double s);

/// log([u]_{s,p} / k(u)) at u = exp(wlog). Invariant under wlog -> wlog + c.
double log_rayleigh(const ScalarField& wlog, const Domain& d, const Weight& w, const SeminormParams& prm);
double log_rayleigh(const ScalarField& wlog, const PairKernelTable& table, const Weight& w,
                    const SeminormParams& prm);

/// Gradient of log_rayleigh with respect to wlog.
ScalarField log_rayleigh_gradient(const ScalarField& wlog, const PairKernelTable& table, const Weight& w,
                                  const SeminormParams& prm);

/// Minimises the log-Rayleigh quotient over positive fields and returns the
/// normalised extremal. Throws InvalidInitError for a non-positive init.
ExtremalSolution solve_extremal(const Domain& d, const Weight& w, const SeminormParams& prm,
                                const ExtremalOptions& opts = {});
ExtremalSolution solve_extremal(const PairKernelTable& table, const Weight& w, const SeminormParams& prm,
                                const ExtremalOptions& opts = {});

/// max_i |<(-Delta_p)^s u, e_i> - Lambda w_i cell_measure / u_i| / Lambda, with
/// Lambda = exp(sol.log_lambda).
double euler_lagrange_residual(const ExtremalSolution& sol, const Domain& d, const Weight& w,
                               const SeminormParams& prm);
double euler_lagrange_residual(const ExtremalSolution& sol, const PairKernelTable& table, const Weight& w,
                               const SeminormParams& prm);

}  // namespace fraclab
