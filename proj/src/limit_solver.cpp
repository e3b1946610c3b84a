#include "fraclab/limit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"
#include "power_energy.hpp"

namespace fraclab {

namespace {

// sum_{i<j} (|u_i - u_j| / |x_i - x_j|^s)^q + sum_i (|u_i| / delta_i^s)^q.
// The boundary candidate dominates every collar partner of node i.
detail::PowerEnergy smoothed_energy(const Domain& d, double s, double q) {
  const std::size_t n = d.size();
  const auto nodes = d.interior_nodes();
  std::vector<double> pair(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pair[i * n + j] = -s * q * std::log(distance(nodes[i], nodes[j]));
    }
  }
  std::vector<double> self(n);
  for (std::size_t i = 0; i < n; ++i) self[i] = -s * q * std::log(d.boundary_distance(nodes[i]));
  return detail::PowerEnergy(q, std::move(pair), std::move(self));
}

double log_k_of(std::span<const double> u, std::span<const double> masses) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (masses[i] > 0.0) acc += masses[i] * std::log(std::abs(u[i]));
  }
  return acc;
}

struct PolishResult {
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

// Dual form of the quotient problem: mu = 1 / max { k(u) : |u|_s <= 1 }.
// Path-following on
//   Phi_tau(u) = -sum m_i log u_i - tau [ sum log slack + sum log u_i ],
// with slacks |x_i - x_j|^s -+ (u_i - u_j) and delta_i^s - u_i. At the centre
// of each stage the objective is within tau * (number of barrier terms) of
// its optimum.
PolishResult polish_unit_ball(const Domain& d, double s, std::span<const double> masses, std::vector<double>& u,
                              double target_gap) {
  const std::size_t n = u.size();
  const auto nodes = d.interior_nodes();
  std::vector<double> a(n * n, 0.0);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = std::pow(d.boundary_distance(nodes[i]), s);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) a[i * n + j] = std::pow(distance(nodes[i], nodes[j]), s);
    }
  }
  const double barrier_terms = static_cast<double>(n * (n - 1) + 2 * n);

  auto objective = [&](std::span<const double> v, double tau) {
    std::vector<double> rows(n, 0.0);
    std::vector<char> bad(n, 0);
    parallel_rows(n, [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double diff = v[i] - v[j];
        const double lo = a[i * n + j] - diff;
        const double hi = a[i * n + j] + diff;
        if (!(lo > 0.0 && hi > 0.0)) bad[i] = 1;
        acc -= tau * (std::log(lo) + std::log(hi));
      }
      const double sb = b[i] - v[i];
      if (!(sb > 0.0 && v[i] > 0.0)) bad[i] = 1;
      acc -= tau * std::log(sb) + (masses[i] + tau) * std::log(v[i]);
      rows[i] = acc;
    });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bad[i]) return std::numeric_limits<double>::infinity();
      total += rows[i];
    }
    return total;
  };

  PolishResult out;
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> trial(n);
  double tau = 1e-2 / barrier_terms;
  for (;;) {
    bool centred = false;
    for (int it = 0; it < 200; ++it) {
      parallel_rows(n, [&](std::size_t i) {
        const auto ii = static_cast<Eigen::Index>(i);
        double gi = 0.0;
        double hii = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double diff = u[i] - u[j];
          const double lo = a[i * n + j] - diff;
          const double hi = a[i * n + j] + diff;
          gi += tau * (1.0 / lo - 1.0 / hi);
          const double wij = tau * (1.0 / (lo * lo) + 1.0 / (hi * hi));
          hii += wij;
          h(ii, static_cast<Eigen::Index>(j)) = -wij;
        }
        const double sb = b[i] - u[i];
        gi += tau / sb - (masses[i] + tau) / u[i];
        hii += tau / (sb * sb) + (masses[i] + tau) / (u[i] * u[i]);
        g(ii) = gi;
        h(ii, ii) = hii;
      });
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      const Eigen::VectorXd dir = ldlt.solve(-g);
      const double decrement = -g.dot(dir);
      if (ldlt.info() != Eigen::Success || !dir.allFinite() || !(decrement >= 0.0)) break;
      // Half the decrement bounds the distance to the stage optimum.
      if (decrement < 1e-2 * tau * barrier_terms) {
        centred = true;
        break;
      }

      double step = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double di = dir(static_cast<Eigen::Index>(i));
        if (di < 0.0) step = std::min(step, 0.99 * u[i] / -di);
        if (di > 0.0) step = std::min(step, 0.99 * (b[i] - u[i]) / di);
        for (std::size_t j = i + 1; j < n; ++j) {
          const double dd = di - dir(static_cast<Eigen::Index>(j));
          const double diff = u[i] - u[j];
          if (dd > 0.0) step = std::min(step, 0.99 * (a[i * n + j] - diff) / dd);
          if (dd < 0.0) step = std::min(step, 0.99 * (a[i * n + j] + diff) / -dd);
        }
      }
      const double f0 = objective(u, tau);
      bool accepted = false;
      for (int k = 0; k < 60; ++k) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir(static_cast<Eigen::Index>(i));
        if (objective(trial, tau) <= f0 - 1e-4 * step * decrement) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++out.iterations;
      if (!accepted) {
        // Rounding floor reached before the decrement test.
        centred = decrement < 1e-1 * tau * barrier_terms;
        break;
      }
      u.swap(trial);
    }
    out.gap = tau * barrier_terms;
    if (!centred) return out;
    if (out.gap <= target_gap) {
      out.converged = true;
      return out;
    }
    tau *= 0.1;
  }
}

}  // namespace

double holder_quotient(const ScalarField& u, const Domain& d, const Weight& w, double s) {
  const GeometricMean k = geometric_mean_k(u, w);
  if (k.degenerate) return std::numeric_limits<double>::infinity();
  return holder_seminorm(u, d, s).value / k.value;
}

LimitSolution minimize_holder_quotient(const Domain& d, const Weight& w, double s, const ScalarField& init,
                                       const LimitOptions& opts) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  if (w.size() != d.size()) throw InvalidWeightError("weight length does not match the domain");
  if (init.size() != d.size()) throw InvalidInitError("init length does not match the domain");
  for (double v : init) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInitError("init must be strictly positive and finite");
  }
  if (opts.q_ladder.empty()) throw ConfigError("q ladder is empty");

  std::vector<double> masses(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) masses[i] = w.mass(i);

  detail::DescentSettings st;
  st.grad_tol = opts.grad_tol;
  st.max_iter = opts.max_iter;

  LimitSolution out;
  out.s = s;
  out.converged = true;
  std::vector<double> u = init.vector();
  for (double q : opts.q_ladder) {
    if (!(q > 1.0)) throw ConfigError("q ladder entries must exceed 1");
    const auto energy = smoothed_energy(d, s, q);
    detail::DescentResult res = detail::minimize(energy, masses, std::move(u), st);
    u = std::move(res.u);
    const double log_k = log_k_of(u, masses);
    for (double& v : u) v *= std::exp(-log_k);

    LadderStage stage;
    stage.q = q;
    stage.smoothed_quotient = std::exp(energy.log_value(u) / q);
    stage.true_quotient = holder_seminorm(ScalarField(u), d, s).value;
    stage.iterations = res.iterations;
    stage.converged = res.converged;
    out.converged = out.converged && res.converged;
    out.q_ladder_trace.push_back(stage);
  }

  if (opts.polish) {
    const double q0 = holder_seminorm(ScalarField(u), d, s).value;
    for (double& v : u) v *= 0.9 / q0;
    const PolishResult pr = polish_unit_ball(d, s, masses, u, opts.polish_gap);
    out.polish_iterations = pr.iterations;
    out.polish_gap = pr.gap;
    out.converged = pr.converged;
    const double log_k = log_k_of(u, masses);
    for (double& v : u) v *= std::exp(-log_k);
  }

  out.v = ScalarField(std::move(u));
  out.mu = holder_seminorm(out.v, d, s).value;
  out.residual_minus = viscosity_residual_minus(out.v, out.mu, d, s);
  out.residual_sup_check = supersolution_check_linf(out.v, d, s);
  return out;
}

ResidualField viscosity_residual_minus(const ScalarField& u, double mu, const Domain& d, double s) {
  ResidualField out{ScalarField(d.size(), 0.0), 0.0};
  parallel_rows(d.size(), [&](std::size_t i) { out.values[i] = linf_minus(u, d, s, i) + mu; });
  for (double r : out.values) out.sup = std::max(out.sup, std::abs(r));
  return out;
}

ResidualField supersolution_check_linf(const ScalarField& u, const Domain& d, double s) {
  ResidualField out{ScalarField(d.size(), 0.0), 0.0};
  parallel_rows(d.size(), [&](std::size_t i) {
    out.values[i] = linf_plus(u, d, s, i) + linf_minus(u, d, s, i);
  });
  for (double c : out.values) out.sup = std::max(out.sup, c);
  return out;
}

}  // namespace fraclab
