#include "fraclab/nonlocal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(double x) { return x == 0.0 ? kNegInf : std::log(std::abs(x)); }

void check_field(const ScalarField& u, const Domain& d) {
  if (u.size() != d.size()) throw DomainError("field length does not match the domain");
  if (!u.all_finite()) throw DomainError("field contains non-finite values");
}

}  // namespace

void SeminormParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must be a finite value above 1");
}

PairKernelTable::PairKernelTable(const Domain& d)
    : domain_(d), n_(d.size()), log_cell_(std::log(d.cell_measure())), log_dist_(n_ * n_, 0.0) {
  const auto nodes = d.interior_nodes();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double ld = std::log(distance(nodes[i], nodes[j]));
      log_dist_[i * n_ + j] = ld;
      log_dist_[j * n_ + i] = ld;
    }
  }
}

std::vector<double> PairKernelTable::exterior_log_mass(double order) const {
  std::vector<double> out(n_);
  const auto nodes = domain_.interior_nodes();
  if (domain_.dimension() == 1) {
    const double a = domain_.spec().a;
    const double b = domain_.spec().b;
    for (std::size_t i = 0; i < n_; ++i) {
      LogSum acc;
      acc.add(-order * std::log(nodes[i][0] - a));
      acc.add(-order * std::log(b - nodes[i][0]));
      out[i] = acc.value() - std::log(order);
    }
    return out;
  }

  const auto collar = domain_.collar_nodes();
  const double exponent = 2.0 + order;
  parallel_rows(n_, [&](std::size_t i) {
    LogSum acc;
    for (const Point& y : collar) acc.add(-exponent * std::log(distance(nodes[i], y)) + log_cell_);
    const double reach = domain_.collar_exit_distance(nodes[i]);
    acc.add(std::log(2.0 * std::numbers::pi) - order * std::log(reach) - std::log(order));
    out[i] = acc.value();
  });
  return out;
}

double gagliardo_seminorm_log(const ScalarField& u, const PairKernelTable& table, const SeminormParams& prm) {
  prm.validate();
  check_field(u, table.domain());
  const std::size_t n = table.size();
  const int dim = table.domain().dimension();
  const double p = prm.p;
  const double kexp = prm.kernel_exponent(dim);
  const double lh = table.log_cell_measure();
  const std::vector<double> ext = table.exterior_log_mass(prm.s * p);

  std::vector<LogSum> rows(n);
  parallel_rows(n, [&](std::size_t i) {
    LogSum acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      acc.add(p * log_abs(u[i] - u[j]) - kexp * table.log_distance(i, j) + 2.0 * lh);
    }
    // Both orderings of (interior, exterior) pairs.
    acc.add(std::log(2.0) + p * log_abs(u[i]) + ext[i] + lh);
    rows[i] = acc;
  });
  LogSum total;
  for (const auto& r : rows) total.merge(r);
  return total.value() / p;
}

double gagliardo_seminorm_log(const ScalarField& u, const Domain& d, const SeminormParams& prm) {
  return gagliardo_seminorm_log(u, PairKernelTable(d), prm);
}

double weak_pairing(const ScalarField& u, const ScalarField& v, const PairKernelTable& table,
                    const SeminormParams& prm) {
  prm.validate();
  check_field(u, table.domain());
  check_field(v, table.domain());
  const std::size_t n = table.size();
  const double p = prm.p;
  const double kexp = prm.kernel_exponent(table.domain().dimension());
  const double lh = table.log_cell_measure();
  const std::vector<double> ext = table.exterior_log_mass(prm.s * p);

  std::vector<SignedLogSum> rows(n);
  parallel_rows(n, [&](std::size_t i) {
    SignedLogSum acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double du = u[i] - u[j];
      const double dv = v[i] - v[j];
      if (du == 0.0 || dv == 0.0) continue;
      acc.add((p - 1.0) * log_abs(du) + log_abs(dv) - kexp * table.log_distance(i, j) + 2.0 * lh,
              (du < 0.0) != (dv < 0.0));
    }
    if (u[i] != 0.0 && v[i] != 0.0) {
      acc.add(std::log(2.0) + (p - 1.0) * log_abs(u[i]) + log_abs(v[i]) + ext[i] + lh,
              (u[i] < 0.0) != (v[i] < 0.0));
    }
    rows[i] = acc;
  });
  SignedLogSum total;
  for (const auto& r : rows) total.merge(r);
  return total.value();
}

double weak_pairing(const ScalarField& u, const ScalarField& v, const Domain& d, const SeminormParams& prm) {
  return weak_pairing(u, v, PairKernelTable(d), prm);
}

SignedLogSum frac_p_laplacian_split(const ScalarField& u, const PairKernelTable& table,
                                    const SeminormParams& prm, std::size_t i) {
  prm.validate();
  check_field(u, table.domain());
  if (i >= table.size()) throw DomainError("node index out of range");
  const std::size_t n = table.size();
  const double p = prm.p;
  const double kexp = prm.kernel_exponent(table.domain().dimension());
  const double lh = table.log_cell_measure();
  const double log2 = std::log(2.0);

  SignedLogSum acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double diff = u[j] - u[i];
    if (diff == 0.0) continue;
    acc.add(log2 + (p - 1.0) * log_abs(diff) - kexp * table.log_distance(i, j) + lh, diff < 0.0);
  }
  if (u[i] != 0.0) {
    // u vanishes outside the domain, so every exterior difference is -u_i.
    const double ext = table.exterior_log_mass(prm.s * p)[i];
    acc.add(log2 + (p - 1.0) * log_abs(u[i]) + ext, u[i] > 0.0);
  }
  return acc;
}

double frac_p_laplacian(const ScalarField& u, const PairKernelTable& table, const SeminormParams& prm,
                        std::size_t i) {
  return frac_p_laplacian_split(u, table, prm, i).value();
}

double frac_p_laplacian(const ScalarField& u, const Domain& d, const SeminormParams& prm, std::size_t i) {
  return frac_p_laplacian(u, PairKernelTable(d), prm, i);
}

HolderSeminorm holder_seminorm(const ScalarField& u, const Domain& d, double s) {
  check_field(u, d);
  const auto nodes = d.interior_nodes();
  const auto collar = d.collar_nodes();
  const std::size_t n = nodes.size();

  std::vector<HolderSeminorm> rows(n);
  parallel_rows(n, [&](std::size_t i) {
    HolderSeminorm best{-1.0, {i, 0, PartnerKind::Interior}};
    auto offer = [&](double q, std::size_t j, PartnerKind kind) {
      if (q > best.value) best = {q, {i, j, kind}};
    };
    for (std::size_t j = i + 1; j < n; ++j) {
      offer(std::abs(u[i] - u[j]) / std::pow(distance(nodes[i], nodes[j]), s), j, PartnerKind::Interior);
    }
    for (std::size_t k = 0; k < collar.size(); ++k) {
      offer(std::abs(u[i]) / std::pow(distance(nodes[i], collar[k]), s), k, PartnerKind::Collar);
    }
    offer(std::abs(u[i]) / std::pow(d.boundary_distance(nodes[i]), s), 0, PartnerKind::Boundary);
    rows[i] = best;
  });

  HolderSeminorm out{0.0, {0, 0, PartnerKind::Boundary}};
  bool found = false;
  for (const auto& r : rows) {
    if (!found || r.value > out.value) {
      out = r;
      found = true;
    }
  }
  out.value = std::max(out.value, 0.0);
  return out;
}

namespace {

template <typename Better>
double extreme_quotient(const ScalarField& u, const Domain& d, double s, std::size_t i, double init,
                        Better better) {
  check_field(u, d);
  if (i >= d.size()) throw DomainError("node index out of range");
  const auto nodes = d.interior_nodes();
  double best = init;
  auto offer = [&](double q) {
    if (better(q, best)) best = q;
  };
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j != i) offer((u[j] - u[i]) / std::pow(distance(nodes[i], nodes[j]), s));
  }
  for (const Point& y : d.collar_nodes()) offer(-u[i] / std::pow(distance(nodes[i], y), s));
  offer(-u[i] / std::pow(d.boundary_distance(nodes[i]), s));
  return best;
}

}  // namespace

double linf_plus(const ScalarField& u, const Domain& d, double s, std::size_t i) {
  return extreme_quotient(u, d, s, i, -std::numeric_limits<double>::infinity(),
                          [](double q, double b) { return q > b; });
}

double linf_minus(const ScalarField& u, const Domain& d, double s, std::size_t i) {
  return extreme_quotient(u, d, s, i, std::numeric_limits<double>::infinity(),
                          [](double q, double b) { return q < b; });
}

}  // namespace fraclab
