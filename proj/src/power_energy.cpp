#include "power_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/error.hpp"
#include "fraclab/log_sum.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogOverflow = 700.0;
constexpr int kStallWindow = 30;

double log_abs(double x) { return x == 0.0 ? -kInf : std::log(std::abs(x)); }

double weighted_log_sum(std::span<const double> u, std::span<const double> masses) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (masses[i] > 0.0) acc += masses[i] * std::log(u[i]);
  }
  return acc;
}

}  // namespace

PowerEnergy::PowerEnergy(double q, std::vector<double> pair_log_coef, std::vector<double> self_log_coef)
    : q_(q), n_(self_log_coef.size()), pair_(std::move(pair_log_coef)), self_(std::move(self_log_coef)) {}

double PowerEnergy::log_value(std::span<const double> u) const {
  std::vector<LogSum> rows(n_);
  parallel_rows(n_, [&](std::size_t i) {
    LogSum acc;
    for (std::size_t j = i + 1; j < n_; ++j) acc.add(pair_[i * n_ + j] + q_ * log_abs(u[i] - u[j]));
    acc.add(self_[i] + q_ * log_abs(u[i]));
    rows[i] = acc;
  });
  LogSum total;
  for (const auto& r : rows) total.merge(r);
  return total.value();
}

double PowerEnergy::objective_gradient(std::span<const double> u, std::span<const double> masses,
                                       std::span<double> grad) const {
  const double log_e = log_value(u);
  parallel_rows(n_, [&](std::size_t i) {
    const double lu = std::log(u[i]);
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double diff = u[i] - u[j];
      if (diff == 0.0) continue;
      const double mag = std::exp(pair_[i * n_ + j] + (q_ - 1.0) * std::log(std::abs(diff)) + lu - log_e);
      acc += diff > 0.0 ? mag : -mag;
    }
    acc += std::exp(self_[i] + q_ * lu - log_e);
    grad[i] = acc - masses[i];
  });
  return log_e;
}

void PowerEnergy::scaled_derivatives(std::span<const double> u, double log_shift, Eigen::VectorXd& grad,
                                     Eigen::MatrixXd& hess) const {
  grad.setZero(static_cast<Eigen::Index>(n_));
  hess.setZero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  parallel_rows(n_, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double g = 0.0;
    double diag = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double diff = u[i] - u[j];
      if (diff == 0.0) continue;
      const double ld = std::log(std::abs(diff));
      const double base = pair_[i * n_ + j] - log_shift;
      const double first = std::exp(base + (q_ - 1.0) * ld);
      const double second = (q_ - 1.0) * std::exp(base + (q_ - 2.0) * ld);
      g += diff > 0.0 ? first : -first;
      diag += second;
      hess(ii, static_cast<Eigen::Index>(j)) = -second;
    }
    const double lu = std::log(u[i]);
    g += std::exp(self_[i] - log_shift + (q_ - 1.0) * lu);
    diag += (q_ - 1.0) * std::exp(self_[i] - log_shift + (q_ - 2.0) * lu);
    grad(ii) = g;
    hess(ii, ii) = diag;
  });
}

namespace {

struct Probe {
  double log_e = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
};

Probe probe(const PowerEnergy& energy, std::span<const double> u, std::span<const double> masses,
            std::vector<double>& grad) {
  Probe pr;
  pr.log_e = energy.objective_gradient(u, masses, grad);
  const double k = std::exp(weighted_log_sum(u, masses));
  for (std::size_t i = 0; i < u.size(); ++i) {
    pr.grad_norm = std::max(pr.grad_norm, std::abs(grad[i]));
    pr.residual = std::max(pr.residual, std::abs(grad[i]) * k / u[i]);
  }
  return pr;
}

// Rescales u so that E(u) = sum m = 1, the minimiser of the barrier objective
// along the ray through u.
void rescale_to_unit_energy(const PowerEnergy& energy, std::vector<double>& u) {
  const double factor = std::exp(-energy.log_value(u) / energy.order());
  for (double& v : u) v *= factor;
}

DescentResult newton(const PowerEnergy& energy, std::span<const double> masses, std::vector<double> u,
                     const DescentSettings& st) {
  const std::size_t n = u.size();
  const double q = energy.order();
  DescentResult res;
  std::vector<double> grad(n);
  std::vector<double> trial(n);
  Eigen::VectorXd g_e;
  Eigen::MatrixXd h_e;

  rescale_to_unit_energy(energy, u);
  // Barrier objective G(u) = E(u)/q - sum m log u, strictly convex on u > 0.
  auto barrier = [&](std::span<const double> v) {
    const double le = energy.log_value(v);
    if (le > kLogOverflow) return kInf;
    return std::exp(le) / q - weighted_log_sum(v, masses);
  };

  double best = kInf;
  int since_best = 0;
  for (;;) {
    const Probe pr = probe(energy, u, masses, grad);
    res.grad_norm = pr.grad_norm;
    if (pr.grad_norm <= st.grad_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= st.max_iter) break;
    if (pr.grad_norm < 0.999 * best) {
      best = pr.grad_norm;
      since_best = 0;
    } else if (++since_best >= kStallWindow) {
      break;
    }

    energy.scaled_derivatives(u, 0.0, g_e, h_e);
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      g(ii) = g_e(ii) - masses[i] / u[i];
      h_e(ii, ii) += masses[i] / (u[i] * u[i]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h_e);
    Eigen::VectorXd dir = ldlt.solve(-g);
    double slope = g.dot(dir);
    if (ldlt.info() != Eigen::Success || !dir.allFinite() || !(slope < 0.0)) {
      // Diagonally scaled gradient step.
      for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = -g(i) / std::max(h_e(i, i), 1e-300);
      slope = g.dot(dir);
    }

    double step = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double di = dir(static_cast<Eigen::Index>(i));
      if (di < 0.0) step = std::min(step, 0.95 * u[i] / -di);
    }
    const double g0 = barrier(u);
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir(static_cast<Eigen::Index>(i));
      const double gt = barrier(trial);
      if (gt <= g0 + st.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= st.backtrack;
    }
    if (!accepted) break;
    u.swap(trial);
    rescale_to_unit_energy(energy, u);
    ++res.iterations;
    res.residuals.push_back(probe(energy, u, masses, grad).residual);
  }
  res.u = std::move(u);
  return res;
}

DescentResult gradient(const PowerEnergy& energy, std::span<const double> masses, std::vector<double> u,
                       const DescentSettings& st) {
  const std::size_t n = u.size();
  const double q = energy.order();
  DescentResult res;
  std::vector<double> grad(n);
  std::vector<double> w(n);
  std::vector<double> trial(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::log(u[i]);

  auto objective = [&](const std::vector<double>& logs, double log_e) {
    double acc = log_e / q;
    for (std::size_t i = 0; i < n; ++i) acc -= masses[i] * logs[i];
    return acc;
  };

  double step = 1.0;
  for (;;) {
    Probe pr = probe(energy, u, masses, grad);
    res.grad_norm = pr.grad_norm;
    if (pr.grad_norm <= st.grad_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= st.max_iter) break;

    const double f0 = objective(w, pr.log_e);
    double sq = 0.0;
    for (double g : grad) sq += g * g;
    step *= 2.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      std::vector<double> wt(n);
      for (std::size_t i = 0; i < n; ++i) {
        wt[i] = w[i] - step * grad[i];
        trial[i] = std::exp(wt[i]);
      }
      const double ft = objective(wt, energy.log_value(trial));
      if (ft <= f0 - st.armijo * step * sq) {
        w.swap(wt);
        u.swap(trial);
        accepted = true;
        break;
      }
      step *= st.backtrack;
    }
    if (!accepted) break;
    ++res.iterations;
    res.residuals.push_back(probe(energy, u, masses, grad).residual);
  }
  res.u = std::move(u);
  return res;
}

}  // namespace

DescentResult minimize(const PowerEnergy& energy, std::span<const double> masses, std::vector<double> u0,
                       const DescentSettings& settings) {
  for (double v : u0) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInitError("initial field must be strictly positive");
  }
  if (settings.method == Method::Newton) return newton(energy, masses, std::move(u0), settings);
  return gradient(energy, masses, std::move(u0), settings);
}

}  // namespace fraclab::detail
