#include <algorithm>
#include <cmath>

#include "oracle.hpp"

namespace oracle {

double Interval::delta(int k) const { return std::min(node(k) - a, b - node(k)); }

namespace {

double exterior(const Interval& iv, int k, double sp) {
  const double x = iv.node(k);
  return (std::pow(x - iv.a, -sp) + std::pow(iv.b - x, -sp)) / sp;
}

}  // namespace

double seminorm_pow(const std::vector<double>& u, const Interval& iv, double s, double p) {
  const double h = iv.h();
  double total = 0.0;
  for (int i = 0; i < iv.n; ++i) {
    for (int j = 0; j < iv.n; ++j) {
      if (i == j) continue;
      const double r = std::abs(iv.node(i) - iv.node(j));
      total += std::pow(std::abs(u[i] - u[j]), p) / std::pow(r, 1.0 + s * p) * h * h;
    }
    total += 2.0 * std::pow(std::abs(u[i]), p) * exterior(iv, i, s * p) * h;
  }
  return total;
}

double pairing(const std::vector<double>& u, const std::vector<double>& v, const Interval& iv, double s, double p) {
  const double h = iv.h();
  auto phi = [p](double t) { return std::pow(std::abs(t), p - 2.0) * t; };
  double total = 0.0;
  for (int i = 0; i < iv.n; ++i) {
    for (int j = 0; j < iv.n; ++j) {
      if (i == j) continue;
      const double r = std::abs(iv.node(i) - iv.node(j));
      if (u[i] == u[j]) continue;
      total += phi(u[i] - u[j]) * (v[i] - v[j]) / std::pow(r, 1.0 + s * p) * h * h;
    }
    if (u[i] != 0.0) total += 2.0 * phi(u[i]) * v[i] * exterior(iv, i, s * p) * h;
  }
  return total;
}

double holder(const std::vector<double>& u, const Interval& iv, double s) {
  double best = 0.0;
  for (int i = 0; i < iv.n; ++i) {
    for (int j = i + 1; j < iv.n; ++j) {
      best = std::max(best, std::abs(u[i] - u[j]) / std::pow(std::abs(iv.node(i) - iv.node(j)), s));
    }
    best = std::max(best, std::abs(u[i]) / std::pow(iv.delta(i), s));
  }
  return best;
}

double geometric_mean(const std::vector<double>& u) {
  double acc = 0.0;
  for (double v : u) acc += std::log(std::abs(v));
  return std::exp(acc / static_cast<double>(u.size()));
}

}  // namespace oracle
