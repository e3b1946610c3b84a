#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

/// Nonnegative nodal weight with unit quadrature mass:
/// sum_i values[i] * cell_measure == 1.
class Weight {
 public:
  Weight() = default;
  Weight(std::vector<double> values, double cell_measure)
      : values_(std::move(values)), cell_measure_(cell_measure) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double cell_measure() const { return cell_measure_; }
  /// Quadrature mass carried by node i.
  double mass(std::size_t i) const { return values_[i] * cell_measure_; }
  ScalarField as_field() const { return ScalarField(values_); }

 private:
  std::vector<double> values_;
  double cell_measure_ = 0.0;
};

/// Scales a raw nonnegative nodal weight to unit mass.
/// Throws InvalidWeightError for negative, non-finite or all-zero input.
Weight normalize_weight(const ScalarField& raw, const Domain& d);

/// Weight mass of the superlevel set {delta > t}.
/// Throws DomainError unless 0 <= t <= max_i delta_i.
double omega_distribution(const Weight& w, const ScalarField& delta, double t);

struct DyadicLevels {
  std::vector<double> levels;  ///< t_1 > t_2 > ... , all >= h
  int requested = 0;
  bool truncated = false;       ///< fewer than `requested` levels were resolvable
  std::string truncation_reason;
};

/// t_n = smallest breakpoint t with sigma(t) <= 1 - 2^-n, for n = 1..n_max.
/// The list stops at the first level below the lattice spacing or the first
/// level that fails to decrease strictly.
DyadicLevels dyadic_levels(const Weight& w, const ScalarField& delta, int n_max, const Domain& d);

struct XiConstruction {
  DyadicLevels levels;
  /// Breakpoints (t_n, 2^-n) of the piecewise-linear profile, increasing in t,
  /// preceded by (0, 0).
  std::vector<std::pair<double, double>> phi_breakpoints;
  double tail_slope = 0.0;  ///< slope used beyond t_1
  ScalarField xi1;          ///< profile composed with delta, before scaling
  ScalarField xi;           ///< scale_k * xi1, geometric mean 1
  double scale_k = 1.0;

  /// Evaluates the piecewise-linear profile at t >= 0.
  double phi(double t) const;
};

/// Builds the admissible positive field xi with k(xi) = 1 from the dyadic
/// levels of the weight distribution. Throws DegenerateLevelError when no
/// level is resolvable or xi1 vanishes where the weight does not.
XiConstruction build_xi(const Weight& w, const ScalarField& delta, const Domain& d, int n_max = 64);

/// Essential sup of the weight over near-boundary level sets {delta = t},
/// 0 <= t <= eps. Throws DomainError unless 0 < eps < inradius.
double k_eps(const Weight& w, const Domain& d, double eps);

struct GeometricMean {
  double value = 0.0;      ///< k(u); exactly 0 when degenerate
  double log_value = 0.0;  ///< log k(u); -inf when degenerate
  bool degenerate = false; ///< u vanishes at a node carrying weight
};

/// k(u) = exp(sum_i log|u_i| * w_i * cell_measure).
GeometricMean geometric_mean_k(const ScalarField& u, const Weight& w);

/// |sum_i g_i * cell_measure - int_0^R (g(a + t) + g(b - t)) dt| with R the
/// inradius; g is interpolated piecewise linearly between nodes. 1D only.
double coarea_check_1d(const ScalarField& g, const Domain& d);

/// Largest quotient xi1(x_i) / delta(x_i) over nodes with delta <= eps: the
/// discrete Lipschitz constant of xi1 against the boundary.
double boundary_lipschitz(const ScalarField& xi1, const ScalarField& delta, double eps);

}  // namespace fraclab
