#include "fraclab/weight_xi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fraclab/error.hpp"

namespace fraclab {

Weight normalize_weight(const ScalarField& raw, const Domain& d) {
  if (raw.size() != d.size()) {
    throw InvalidWeightError("weight has " + std::to_string(raw.size()) + " values, domain has " +
                             std::to_string(d.size()) + " interior nodes");
  }
  double total = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidWeightError("weight values must be finite and nonnegative");
    total += v;
  }
  if (total <= 0.0) throw InvalidWeightError("weight is identically zero");

  const double mass = total * d.cell_measure();
  std::vector<double> values(raw.begin(), raw.end());
  for (double& v : values) v /= mass;
  return Weight(std::move(values), d.cell_measure());
}

double omega_distribution(const Weight& w, const ScalarField& delta, double t) {
  const double top = *std::max_element(delta.begin(), delta.end());
  if (!(t >= 0.0) || t > top) throw DomainError("sigma(t) requires 0 <= t <= max delta");
  double sigma = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i] > t) sigma += w.mass(i);
  }
  return sigma;
}

DyadicLevels dyadic_levels(const Weight& w, const ScalarField& delta, int n_max, const Domain& d) {
  DyadicLevels out;
  out.requested = n_max;
  if (n_max < 1) throw DomainError("n_max must be at least 1");

  // Breakpoints of the step function sigma: t = 0 and every distinct delta.
  std::vector<std::size_t> order(delta.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return delta[i] < delta[j]; });

  std::vector<double> breaks{0.0};
  std::vector<double> sigma;
  double total = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) total += w.mass(i);
  sigma.push_back(total);
  double removed = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double t = delta[order[k]];
    while (k < order.size() && delta[order[k]] == t) removed += w.mass(order[k++]);
    breaks.push_back(t);
    sigma.push_back(total - removed);
  }

  const double h = d.h();
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    const double target = 1.0 - std::ldexp(1.0, -n);
    // sigma is nonincreasing along the breakpoints.
    const auto it = std::partition_point(sigma.begin(), sigma.end(), [&](double s) { return s > target; });
    if (it == sigma.end()) {
      out.truncated = true;
      out.truncation_reason = "target mass unreachable";
      break;
    }
    const double t = breaks[static_cast<std::size_t>(it - sigma.begin())];
    if (t < h) {
      out.truncated = true;
      out.truncation_reason = "level below lattice spacing";
      break;
    }
    if (!(t < previous)) {
      out.truncated = true;
      out.truncation_reason = "level not strictly decreasing";
      break;
    }
    out.levels.push_back(t);
    previous = t;
  }
  return out;
}

double XiConstruction::phi(double t) const {
  const auto& bp = phi_breakpoints;
  if (t <= 0.0) return 0.0;
  if (t >= bp.back().first) return bp.back().second + tail_slope * (t - bp.back().first);
  const auto it = std::upper_bound(bp.begin(), bp.end(), t,
                                   [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double frac = (t - lo.first) / (hi.first - lo.first);
  return lo.second + frac * (hi.second - lo.second);
}

XiConstruction build_xi(const Weight& w, const ScalarField& delta, const Domain& d, int n_max) {
  XiConstruction xc;
  xc.levels = dyadic_levels(w, delta, n_max, d);
  const auto& t = xc.levels.levels;
  if (t.empty()) throw DegenerateLevelError("no dyadic level is resolvable on this lattice");

  xc.phi_breakpoints.emplace_back(0.0, 0.0);
  for (std::size_t k = t.size(); k-- > 0;) {
    xc.phi_breakpoints.emplace_back(t[k], std::ldexp(1.0, -static_cast<int>(k + 1)));
  }
  const auto& bp = xc.phi_breakpoints;
  const auto& last = bp[bp.size() - 1];
  const auto& prev = bp[bp.size() - 2];
  xc.tail_slope = (last.second - prev.second) / (last.first - prev.first);

  std::vector<double> xi1(delta.size());
  double log_mean = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    xi1[i] = xc.phi(delta[i]);
    if (w.mass(i) > 0.0) {
      if (!(xi1[i] > 0.0)) throw DegenerateLevelError("xi1 vanishes at a node carrying weight");
      log_mean += std::log(xi1[i]) * w.mass(i);
    }
  }
  xc.scale_k = std::exp(-log_mean);
  xc.xi1 = ScalarField(xi1);
  xc.xi = xc.xi1.scaled(xc.scale_k);
  return xc;
}

double k_eps(const Weight& w, const Domain& d, double eps) {
  if (!(eps > 0.0) || !(eps < d.inradius())) throw DomainError("k_eps requires 0 < eps < inradius");
  const double h = d.h();
  const int samples = std::max(1000, static_cast<int>(std::ceil(8.0 * eps / h)));
  double best = 0.0;

  if (d.dimension() == 1) {
    const auto n = static_cast<long>(d.size());
    const double hx = d.spacing(0);
    auto nearest = [&](double offset) {
      const long k = std::lround(offset / hx - 0.5);
      return static_cast<std::size_t>(std::clamp(k, 0L, n - 1));
    };
    for (int m = 0; m <= samples; ++m) {
      const double t = eps * m / samples;
      const std::size_t left = nearest(t);
      const std::size_t right = static_cast<std::size_t>(n - 1) - nearest(t);
      best = std::max(best, w[left] + w[right]);
    }
    return best;
  }

  // Band of width h around each level set stands in for its 1-dimensional measure.
  const ScalarField delta = distance_field(d);
  const double band_weight = d.cell_measure() / h;
  for (int m = 0; m <= samples; ++m) {
    const double t = eps * m / samples;
    double band = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (std::abs(delta[i] - t) < 0.5 * h) band += w[i] * band_weight;
    }
    best = std::max(best, band);
  }
  return best;
}

GeometricMean geometric_mean_k(const ScalarField& u, const Weight& w) {
  if (!u.all_finite()) throw DomainError("geometric mean of a non-finite field");
  GeometricMean out;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = w.mass(i);
    if (m <= 0.0) continue;
    const double a = std::abs(u[i]);
    if (a == 0.0) {
      out.degenerate = true;
      out.value = 0.0;
      out.log_value = -std::numeric_limits<double>::infinity();
      return out;
    }
    acc += std::log(a) * m;
  }
  out.log_value = acc;
  out.value = std::exp(acc);
  return out;
}

namespace {

// Piecewise-linear interpolant through (x_k, g_k), extended linearly to the
// boundary from the outermost pair of nodes.
double interpolate(const std::vector<double>& x, std::span<const double> g, double t) {
  const std::size_t n = x.size();
  std::size_t k;
  if (t <= x.front()) {
    k = 0;
  } else if (t >= x.back()) {
    k = n - 2;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
    k = std::min(k, n - 2);
  }
  const double frac = (t - x[k]) / (x[k + 1] - x[k]);
  return g[k] + frac * (g[k + 1] - g[k]);
}

double integrate_interpolant(const std::vector<double>& x, std::span<const double> g, double lo, double hi) {
  std::vector<double> pts{lo};
  for (double xk : x) {
    if (xk > lo && xk < hi) pts.push_back(xk);
  }
  pts.push_back(hi);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    acc += 0.5 * (pts[k + 1] - pts[k]) * (interpolate(x, g, pts[k]) + interpolate(x, g, pts[k + 1]));
  }
  return acc;
}

}  // namespace

double coarea_check_1d(const ScalarField& g, const Domain& d) {
  if (d.dimension() != 1) throw UnsupportedError("co-area self-test is implemented for intervals only");
  std::vector<double> x;
  for (const Point& p : d.interior_nodes()) x.push_back(p[0]);

  double volume = 0.0;
  for (double v : g) volume += v * d.cell_measure();

  const double a = d.spec().a;
  const double b = d.spec().b;
  const double r = d.inradius();
  // t -> g(a + t) on [0, r] covers [a, a + r]; t -> g(b - t) covers [b - r, b].
  const double levels = integrate_interpolant(x, g.values(), a, a + r) +
                        integrate_interpolant(x, g.values(), b - r, b);
  return std::abs(volume - levels);
}

double boundary_lipschitz(const ScalarField& xi1, const ScalarField& delta, double eps) {
  double best = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i] <= eps) best = std::max(best, std::abs(xi1[i]) / delta[i]);
  }
  return best;
}

}  // namespace fraclab
