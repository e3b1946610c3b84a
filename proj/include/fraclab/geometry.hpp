#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fraclab {

using Point = std::array<double, 2>;

enum class Shape { Interval, Rectangle };

/// Bounds of the computational domain. For an interval only a, b are used;
/// a rectangle is (a, b) x (c, d).
struct DomainSpec {
  Shape shape = Shape::Interval;
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 1.0;

  static DomainSpec interval(double a, double b) { return {Shape::Interval, a, b, 0.0, 0.0}; }
  static DomainSpec rectangle(double a, double b, double c, double d) {
    return {Shape::Rectangle, a, b, c, d};
  }

  int dimension() const { return shape == Shape::Interval ? 1 : 2; }
  double diameter() const;
};

/// Node-indexed real values on the interior nodes of a Domain. Every collar
/// node and every point outside the domain carries the value 0.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::vector<double> values) : values_(std::move(values)) {}
  ScalarField(std::size_t n, double value) : values_(n, value) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& vector() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool all_finite() const;
  double sup_norm() const;

  ScalarField scaled(double factor) const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::vector<double> values_;
};

/// Uniform cell-centred lattice over an interval or axis-aligned rectangle,
/// plus an exterior collar of lattice nodes on which fields vanish.
///
/// Interior node k of an interval sits at a + (k + 1/2) h with h = (b - a)/n,
/// so the cells tile the domain exactly and cell_measure sums to |Omega|.
/// Rectangle nodes are ordered row-major with x varying fastest.
class Domain {
 public:
  int dimension() const { return spec_.dimension(); }
  const DomainSpec& spec() const { return spec_; }
  int n_per_axis() const { return n_per_axis_; }

  std::span<const Point> interior_nodes() const { return interior_; }
  std::span<const Point> collar_nodes() const { return collar_; }
  std::size_t size() const { return interior_.size(); }

  /// Lattice spacing along an axis (0 = x, 1 = y).
  double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
  /// The coarsest lattice spacing, used as "h" in resolution-dependent rules.
  double h() const;
  double cell_measure() const { return cell_measure_; }

  /// Requested collar width rounded up to a whole number of lattice layers.
  double collar_width() const { return collar_width_; }
  /// Whole lattice layers in the collar along each axis.
  int collar_layers(int axis) const { return collar_layers_[static_cast<std::size_t>(axis)]; }

  double inradius() const;
  double diameter() const { return spec_.diameter(); }

  /// Exact Euclidean distance to the boundary for a point in the closed domain.
  double boundary_distance(const Point& x) const;
  /// Distance from an interior point to the complement of the collar box.
  double collar_exit_distance(const Point& x) const;

  bool strictly_inside(const Point& x) const;

  /// Interior index of the mirror image of node i under the reflection
  /// x -> a + b - x (the domain's symmetry about its centre in 1D).
  std::size_t reflected_index(std::size_t i) const;

 private:
  friend Domain build_domain(const DomainSpec&, int, double);

  DomainSpec spec_;
  int n_per_axis_ = 0;
  std::array<double, 2> spacing_{0.0, 0.0};
  std::array<int, 2> collar_layers_{0, 0};
  double cell_measure_ = 0.0;
  double collar_width_ = 0.0;
  std::vector<Point> interior_;
  std::vector<Point> collar_;
};

/// Builds the lattice. Throws InvalidSpecError on n_per_axis < 3, empty
/// bounds or nonpositive collar width.
Domain build_domain(const DomainSpec& spec, int n_per_axis, double collar_width);

/// Exact distance to the boundary at every interior node.
ScalarField distance_field(const Domain& d);

double distance(const Point& x, const Point& y);

}  // namespace fraclab
