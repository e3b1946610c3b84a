#pragma once

// Shared machinery of the extremal and limit solvers: a power-sum energy
//
//   E(u) = sum_{i<j} c_ij |u_i - u_j|^q + sum_i b_i |u_i|^q ,
//
// and minimisers for the scale-invariant objective
//
//   F(w) = (1/q) log E(exp w) - sum_i m_i w_i ,   sum_i m_i = 1.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fraclab::detail {

class PowerEnergy {
 public:
  /// pair_log_coef is an n*n symmetric table of log c_ij (diagonal unused);
  /// self_log_coef holds log b_i.
  PowerEnergy(double q, std::vector<double> pair_log_coef, std::vector<double> self_log_coef);

  std::size_t size() const { return n_; }
  double order() const { return q_; }

  /// log E(u); -inf for u = 0.
  double log_value(std::span<const double> u) const;

  /// Gradient of F in log coordinates, given the masses m. Returns log E(u).
  double objective_gradient(std::span<const double> u, std::span<const double> masses,
                            std::span<double> grad) const;

  /// Gradient and Hessian of E(u)/q, evaluated with E scaled by exp(-log_shift)
  /// so entries stay in range when E is large.
  void scaled_derivatives(std::span<const double> u, double log_shift, Eigen::VectorXd& grad,
                          Eigen::MatrixXd& hess) const;

 private:
  double q_;
  std::size_t n_;
  std::vector<double> pair_;
  std::vector<double> self_;
};

enum class Method { Newton, Gradient };

struct DescentSettings {
  Method method = Method::Newton;
  double grad_tol = 1e-8;
  int max_iter = 50000;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct DescentResult {
  std::vector<double> u;          ///< final iterate, arbitrary positive scale
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;         ///< sup-norm of the log-coordinate gradient
  std::vector<double> residuals;  ///< sup_i |grad_i| / u_i at unit geometric mean, per accepted step
};

/// Minimises F over positive u starting from u0 (which must be positive).
DescentResult minimize(const PowerEnergy& energy, std::span<const double> masses, std::vector<double> u0,
                       const DescentSettings& settings);

}  // namespace fraclab::detail
