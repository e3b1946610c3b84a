#pragma once

// Reference implementations on uniform interval lattices, written without the
// log-domain sums, kernel cache or solvers of the main library. Nodes sit at
// a + (k + 1/2) h with h = (b - a) / n and the weight is uniform.

#include <string>
#include <vector>

namespace oracle {

struct Interval {
  double a = 0.0;
  double b = 1.0;
  int n = 9;

  double h() const { return (b - a) / n; }
  double node(int k) const { return a + (k + 0.5) * h(); }
  double delta(int k) const;
};

/// [u]_{s,p}^p by a plain double loop with std::pow.
double seminorm_pow(const std::vector<double>& u, const Interval& iv, double s, double p);

/// <(-Delta_p)^s u, v> by a plain double loop.
double pairing(const std::vector<double>& u, const std::vector<double>& v, const Interval& iv, double s, double p);

/// max |u_i - u_j| / |x_i - x_j|^s together with |u_i| / delta_i^s.
double holder(const std::vector<double>& u, const Interval& iv, double s);

/// exp(mean log|u_i|) under the uniform weight.
double geometric_mean(const std::vector<double>& u);

struct Minimum {
  double value = 0.0;      ///< Lambda_p, or mu_s
  std::vector<double> u;   ///< minimiser with geometric mean 1
  long evaluations = 0;
};

/// Lambda_p = min [u]^p / k(u)^p by an exhaustive lattice scan of
/// `levels` values per node followed by compass refinement in log coordinates.
Minimum brute_force_lambda(const Interval& iv, double s, double p, int levels = 41);

/// mu_s = min |u|_s / k(u), same strategy.
Minimum brute_force_mu(const Interval& iv, double s, int levels = 21);

struct SelftestCase {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Library results against the references above and against closed forms.
std::vector<SelftestCase> run_selftest();

}  // namespace oracle
