#include <cmath>
#include <functional>
#include <limits>

#include "oracle.hpp"

namespace oracle {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

// Scans every combination of `levels` values in (0, 1] per node, then runs a
// compass search in log coordinates over all directions in {-1, 0, 1}^n. The
// full direction set lets the search leave kinks of max-type objectives.
Minimum scan_and_refine(int n, int levels, const Objective& f) {
  Minimum out;
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;
  for (;;) {
    for (int i = 0; i < n; ++i) u[i] = (idx[i] + 1.0) / levels;
    const double v = f(u);
    ++out.evaluations;
    if (v < best) {
      best = v;
      best_u = u;
    }
    int k = 0;
    while (k < n && ++idx[k] == levels) idx[k++] = 0;
    if (k == n) break;
  }

  std::vector<std::vector<int>> dirs;
  std::vector<int> digit(static_cast<std::size_t>(n), -1);
  for (;;) {
    bool nonzero = false;
    for (int d : digit) nonzero = nonzero || d != 0;
    if (nonzero) dirs.push_back(digit);
    int k = 0;
    while (k < n && ++digit[k] == 2) digit[k++] = -1;
    if (k == n) break;
  }

  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = std::log(best_u[i]);
  std::vector<double> trial(static_cast<std::size_t>(n));
  for (double step = 0.5 / levels; step > 1e-12;) {
    bool moved = false;
    for (const auto& dir : dirs) {
      for (int i = 0; i < n; ++i) trial[i] = std::exp(w[i] + step * dir[i]);
      const double v = f(trial);
      ++out.evaluations;
      if (v < best) {
        best = v;
        for (int i = 0; i < n; ++i) w[i] += step * dir[i];
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }

  out.value = best;
  out.u.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.u[i] = std::exp(w[i]);
  const double k = geometric_mean(out.u);
  for (double& v : out.u) v /= k;
  return out;
}

}  // namespace

Minimum brute_force_lambda(const Interval& iv, double s, double p, int levels) {
  return scan_and_refine(iv.n, levels, [&](const std::vector<double>& u) {
    return seminorm_pow(u, iv, s, p) / std::pow(geometric_mean(u), p);
  });
}

Minimum brute_force_mu(const Interval& iv, double s, int levels) {
  return scan_and_refine(iv.n, levels,
                         [&](const std::vector<double>& u) { return holder(u, iv, s) / geometric_mean(u); });
}

}  // namespace oracle
