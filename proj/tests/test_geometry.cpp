#include <gtest/gtest.h>

#include <cmath>

#include "fraclab/error.hpp"
#include "fraclab/geometry.hpp"

using namespace fraclab;

TEST(BuildDomain, IntervalCellCentres) {
  const Domain d = build_domain(DomainSpec::interval(0.0, 1.0), 3, 0.5);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_NEAR(d.h(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.interior_nodes()[0][0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(d.interior_nodes()[1][0], 0.5, 1e-15);
  EXPECT_NEAR(d.interior_nodes()[2][0], 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(d.cell_measure() * static_cast<double>(d.size()), 1.0, 1e-15);
}

TEST(BuildDomain, CollarRoundsUpToWholeLayers) {
  const Domain d = build_domain(DomainSpec::interval(0.0, 1.0), 10, 0.25);
  EXPECT_EQ(d.collar_layers(0), 3);
  EXPECT_NEAR(d.collar_width(), 0.3, 1e-14);
  EXPECT_EQ(d.collar_nodes().size(), 6u);
  for (const Point& y : d.collar_nodes()) EXPECT_FALSE(d.strictly_inside(y));
}

TEST(BuildDomain, RectangleNodeCount) {
  const Domain d = build_domain(DomainSpec::rectangle(0.0, 1.0, 0.0, 1.0), 3, 0.5);
  EXPECT_EQ(d.size(), 9u);
  EXPECT_EQ(d.dimension(), 2);
  // Row-major with x fastest.
  EXPECT_NEAR(d.interior_nodes()[1][0], 0.5, 1e-15);
  EXPECT_NEAR(d.interior_nodes()[1][1], 1.0 / 6.0, 1e-15);
}

TEST(BuildDomain, RejectsBadSpecs) {
  EXPECT_THROW(build_domain(DomainSpec::interval(0.0, 1.0), 2, 0.0), InvalidSpecError);
  EXPECT_THROW(build_domain(DomainSpec::interval(0.0, 1.0), 5, 0.0), InvalidSpecError);
  EXPECT_THROW(build_domain(DomainSpec::interval(1.0, 1.0), 5, 0.5), InvalidSpecError);
  EXPECT_THROW(build_domain(DomainSpec::rectangle(0.0, 1.0, 2.0, 1.0), 5, 0.5), InvalidSpecError);
}

TEST(DistanceField, ClosedForms) {
  const Domain iv = build_domain(DomainSpec::interval(0.0, 1.0), 5, 1.0);
  EXPECT_NEAR(iv.boundary_distance({0.3, 0.0}), 0.3, 1e-15);
  EXPECT_NEAR(iv.boundary_distance({0.5, 0.0}), 0.5, 1e-15);
  const Domain sq = build_domain(DomainSpec::rectangle(0.0, 1.0, 0.0, 1.0), 5, 1.0);
  EXPECT_NEAR(sq.boundary_distance({0.25, 0.5}), 0.25, 1e-15);
  const ScalarField delta = distance_field(sq);
  for (double v : delta) EXPECT_GT(v, 0.0);
}

TEST(DistanceField, BoundedByInradiusAndLipschitz) {
  for (const auto& spec : {DomainSpec::interval(-1.0, 2.0), DomainSpec::rectangle(0.0, 2.0, 0.0, 1.0)}) {
    const Domain d = build_domain(spec, 9, 0.5);
    const ScalarField delta = distance_field(d);
    const auto nodes = d.interior_nodes();
    double top = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_LE(delta[i], d.inradius() + 1e-15);
      top = std::max(top, delta[i]);
      for (std::size_t j = 0; j < d.size(); ++j) {
        EXPECT_LE(std::abs(delta[i] - delta[j]), distance(nodes[i], nodes[j]) + 1e-14);
      }
    }
    EXPECT_GE(top, d.inradius() - d.h());
  }
}

TEST(BuildDomain, ReflectionIsAnInvolution) {
  const Domain d = build_domain(DomainSpec::interval(0.0, 1.0), 7, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.reflected_index(d.reflected_index(i)), i);
    EXPECT_NEAR(d.interior_nodes()[i][0] + d.interior_nodes()[d.reflected_index(i)][0], 1.0, 1e-15);
  }
}
