#pragma once

#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/nonlocal_ops.hpp"
#include "fraclab/weight_xi.hpp"

namespace fraclab {

struct LimitOptions {
  std::vector<double> q_ladder{16.0, 32.0, 64.0, 128.0, 256.0};
  double grad_tol = 1e-9;
  int max_iter = 5000;  ///< per ladder stage
  /// After the ladder, maximise k(u) over the unit Hoelder ball by a
  /// log-barrier path until the barrier gap falls below polish_gap.
  bool polish = true;
  double polish_gap = 1e-11;
};

struct LadderStage {
  double q = 0.0;
  double smoothed_quotient = 0.0;  ///< (sum of q-th powers of quotients)^(1/q) / k
  double true_quotient = 0.0;      ///< |v|_s / k
  int iterations = 0;
  bool converged = false;
};

struct ResidualField {
  ScalarField values;
  double sup = 0.0;  ///< sup |r_i| for residuals, max positive part for the supersolution check
};

struct LimitSolution {
  double s = 0.0;
  double mu = 0.0;  ///< |v|_s with k(v) = 1
  ScalarField v;
  ResidualField residual_minus;
  ResidualField residual_sup_check;
  std::vector<LadderStage> q_ladder_trace;
  int polish_iterations = 0;
  double polish_gap = 0.0;  ///< bound on log(mu_reported / mu_exact); 0 when not polished
  bool converged = false;
};

/// Q_s(u) = |u|_s / k(u).
double holder_quotient(const ScalarField& u, const Domain& d, const Weight& w, double s);

/// Minimises the Hoelder quotient through a ladder of q-smoothed quotients,
/// each warm-started from the previous stage. Throws InvalidInitError for a
/// non-positive init.
LimitSolution minimize_holder_quotient(const Domain& d, const Weight& w, double s, const ScalarField& init,
                                       const LimitOptions& opts = {});

/// r_i = L_inf^- u(x_i) + mu.
ResidualField viscosity_residual_minus(const ScalarField& u, double mu, const Domain& d, double s);

/// c_i = L_inf^+ u(x_i) + L_inf^- u(x_i); `sup` is max_i max(c_i, 0).
ResidualField supersolution_check_linf(const ScalarField& u, const Domain& d, double s);

}  // namespace fraclab
