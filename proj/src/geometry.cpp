#include "fraclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/error.hpp"

namespace fraclab {

double DomainSpec::diameter() const {
  if (shape == Shape::Interval) return b - a;
  return std::hypot(b - a, d - c);
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField ScalarField::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return ScalarField(std::move(out));
}

double distance(const Point& x, const Point& y) { return std::hypot(x[0] - y[0], x[1] - y[1]); }

double Domain::h() const {
  return dimension() == 1 ? spacing_[0] : std::max(spacing_[0], spacing_[1]);
}

double Domain::inradius() const {
  if (dimension() == 1) return 0.5 * (spec_.b - spec_.a);
  return 0.5 * std::min(spec_.b - spec_.a, spec_.d - spec_.c);
}

double Domain::boundary_distance(const Point& x) const {
  double dist = std::min(x[0] - spec_.a, spec_.b - x[0]);
  if (dimension() == 2) dist = std::min({dist, x[1] - spec_.c, spec_.d - x[1]});
  return dist;
}

double Domain::collar_exit_distance(const Point& x) const {
  const double wx = collar_layers_[0] * spacing_[0];
  double dist = std::min(x[0] - spec_.a, spec_.b - x[0]) + wx;
  if (dimension() == 2) {
    const double wy = collar_layers_[1] * spacing_[1];
    dist = std::min(dist, std::min(x[1] - spec_.c, spec_.d - x[1]) + wy);
  }
  return dist;
}

bool Domain::strictly_inside(const Point& x) const {
  const bool in_x = x[0] > spec_.a && x[0] < spec_.b;
  if (dimension() == 1) return in_x;
  return in_x && x[1] > spec_.c && x[1] < spec_.d;
}

std::size_t Domain::reflected_index(std::size_t i) const { return interior_.size() - 1 - i; }

Domain build_domain(const DomainSpec& spec, int n_per_axis, double collar_width) {
  if (n_per_axis < 3) {
    throw InvalidSpecError("n_per_axis must be at least 3, got " + std::to_string(n_per_axis));
  }
  if (!(spec.b > spec.a)) throw InvalidSpecError("interval bounds require b > a");
  if (spec.shape == Shape::Rectangle && !(spec.d > spec.c)) {
    throw InvalidSpecError("rectangle bounds require d > c");
  }
  if (!(collar_width > 0.0) || !std::isfinite(collar_width)) {
    throw InvalidSpecError("collar_width must be positive");
  }

  Domain dom;
  dom.spec_ = spec;
  dom.n_per_axis_ = n_per_axis;
  const int dim = spec.dimension();
  const double n = static_cast<double>(n_per_axis);

  dom.spacing_[0] = (spec.b - spec.a) / n;
  dom.spacing_[1] = dim == 2 ? (spec.d - spec.c) / n : 0.0;
  dom.cell_measure_ = dim == 1 ? dom.spacing_[0] : dom.spacing_[0] * dom.spacing_[1];

  // Whole layers only, so the collar cells tile the collar band exactly.
  for (int axis = 0; axis < dim; ++axis) {
    const double hx = dom.spacing_[static_cast<std::size_t>(axis)];
    dom.collar_layers_[static_cast<std::size_t>(axis)] =
        std::max(1, static_cast<int>(std::ceil(collar_width / hx - 1e-9)));
  }
  dom.collar_width_ = dom.collar_layers_[0] * dom.spacing_[0];
  if (dim == 2) {
    dom.collar_width_ = std::min(dom.collar_width_, dom.collar_layers_[1] * dom.spacing_[1]);
  }

  auto coord = [&](int axis, int k) {
    const double lo = axis == 0 ? spec.a : spec.c;
    return lo + (k + 0.5) * dom.spacing_[static_cast<std::size_t>(axis)];
  };

  if (dim == 1) {
    dom.interior_.reserve(static_cast<std::size_t>(n_per_axis));
    for (int k = 0; k < n_per_axis; ++k) dom.interior_.push_back({coord(0, k), 0.0});
    const int m = dom.collar_layers_[0];
    for (int k = -m; k < 0; ++k) dom.collar_.push_back({coord(0, k), 0.0});
    for (int k = n_per_axis; k < n_per_axis + m; ++k) dom.collar_.push_back({coord(0, k), 0.0});
  } else {
    dom.interior_.reserve(static_cast<std::size_t>(n_per_axis) * static_cast<std::size_t>(n_per_axis));
    for (int j = 0; j < n_per_axis; ++j) {
      for (int i = 0; i < n_per_axis; ++i) dom.interior_.push_back({coord(0, i), coord(1, j)});
    }
    const int mx = dom.collar_layers_[0];
    const int my = dom.collar_layers_[1];
    for (int j = -my; j < n_per_axis + my; ++j) {
      for (int i = -mx; i < n_per_axis + mx; ++i) {
        const bool inside = i >= 0 && i < n_per_axis && j >= 0 && j < n_per_axis;
        if (!inside) dom.collar_.push_back({coord(0, i), coord(1, j)});
      }
    }
  }
  return dom;
}

ScalarField distance_field(const Domain& d) {
  std::vector<double> out;
  out.reserve(d.size());
  for (const Point& x : d.interior_nodes()) out.push_back(d.boundary_distance(x));
  return ScalarField(std::move(out));
}

}  // namespace fraclab
