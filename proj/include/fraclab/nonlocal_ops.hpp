#pragma once

#include <cstddef>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/log_sum.hpp"

namespace fraclab {

struct SeminormParams {
  double s = 0.5;
  double p = 2.0;
  bool log_domain = true;

  /// Throws DomainError unless 0 < s < 1 < p.
  void validate() const;
  /// Exponent of the singular kernel |x - y|^-(N + sp).
  double kernel_exponent(int dimension) const { return dimension + s * p; }
};

/// Cached log |x_i - x_j| over interior pairs of a Domain, plus the exterior
/// kernel mass of each interior node.
class PairKernelTable {
 public:
  explicit PairKernelTable(const Domain& d);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return n_; }
  double log_distance(std::size_t i, std::size_t j) const { return log_dist_[i * n_ + j]; }
  double log_cell_measure() const { return log_cell_; }

  /// log T_i with T_i = int_{R^N \ Omega} |x_i - y|^-(N + order) dy.
  /// Exact in 1D; in 2D the collar is integrated by midpoint quadrature and the
  /// region beyond it is bounded by the isotropic tail 2 pi R^-order / order.
  std::vector<double> exterior_log_mass(double order) const;

 private:
  Domain domain_;
  std::size_t n_ = 0;
  double log_cell_ = 0.0;
  std::vector<double> log_dist_;
};

/// log [u]_{s,p}; -inf for the zero field.
double gagliardo_seminorm_log(const ScalarField& u, const PairKernelTable& table, const SeminormParams& prm);
double gagliardo_seminorm_log(const ScalarField& u, const Domain& d, const SeminormParams& prm);

/// <(-Delta_p)^s u, v> under the same quadrature as the seminorm, so that
/// weak_pairing(u, u) = [u]_{s,p}^p.
double weak_pairing(const ScalarField& u, const ScalarField& v, const PairKernelTable& table,
                    const SeminormParams& prm);
double weak_pairing(const ScalarField& u, const ScalarField& v, const Domain& d, const SeminormParams& prm);

/// L_p u at interior node i, kept as positive and negative log-domain parts.
SignedLogSum frac_p_laplacian_split(const ScalarField& u, const PairKernelTable& table,
                                    const SeminormParams& prm, std::size_t i);
double frac_p_laplacian(const ScalarField& u, const PairKernelTable& table, const SeminormParams& prm,
                        std::size_t i);
double frac_p_laplacian(const ScalarField& u, const Domain& d, const SeminormParams& prm, std::size_t i);

enum class PartnerKind { Interior, Collar, Boundary };

/// A node pair realising a Hoelder quotient. `second` indexes interior nodes,
/// collar nodes, or is unused for the boundary candidate.
struct NodePair {
  std::size_t first = 0;
  std::size_t second = 0;
  PartnerKind kind = PartnerKind::Interior;
};

struct HolderSeminorm {
  double value = 0.0;
  NodePair argmax;
};

/// max |u(x) - u(y)| / |x - y|^s over interior pairs, interior-collar pairs and
/// the boundary candidates |u_i| / delta_i^s. Ties go to the lexicographically
/// smallest pair (interior < collar < boundary in the second slot).
HolderSeminorm holder_seminorm(const ScalarField& u, const Domain& d, double s);

/// sup_j (u_j - u_i) / |x_j - x_i|^s over all other nodes and the nearest
/// boundary point.
double linf_plus(const ScalarField& u, const Domain& d, double s, std::size_t i);
/// inf_j (u_j - u_i) / |x_j - x_i|^s over all other nodes and the nearest
/// boundary point.
double linf_minus(const ScalarField& u, const Domain& d, double s, std::size_t i);

}  // namespace fraclab
