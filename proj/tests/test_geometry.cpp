#include <gtest/gtest.h>

#include "mdcnet/geometry.hpp"
#include "mdcnet/stats.hpp"

using namespace mdcnet;

TEST(Geometry, TorusDisplacementIsMinimumImage) {
  auto d = displacement({990, 5}, {10, 995}, 1000, BoundaryMode::torus);
  EXPECT_NEAR(d.x, 20, 1e-9);
  EXPECT_NEAR(d.y, -10, 1e-9);
  EXPECT_NEAR(distance({990, 5}, {10, 995}, 1000, BoundaryMode::plane), std::hypot(980, 990), 1e-9);
}

TEST(Geometry, PppCountIsPoisson) {
  RunningStats n;
  for (std::uint64_t s = 0; s < 400; ++s) n.add(static_cast<double>(sample_ppp(1e-3, 100, s).size()));
  // mean 10, variance 10
  EXPECT_NEAR(n.mean(), 10.0, 0.5);
  EXPECT_NEAR(n.variance(), 10.0, 2.5);
}

TEST(Geometry, PppPointsUniform) {
  auto p = sample_ppp(1e-2, 200, 3);
  std::vector<double> xs;
  for (auto q : p.points) xs.push_back(q.x / 200.0);
  EXPECT_LT(ks_statistic(xs, [](double x) { return x; }), 1.63 / std::sqrt(double(xs.size())));
}

TEST(Geometry, PppSameSeedSamePoints) {
  auto a = sample_ppp(1e-3, 500, 9), b = sample_ppp(1e-3, 500, 9);
  EXPECT_EQ(a.points, b.points);
  EXPECT_TRUE(sample_ppp(0.0, 500, 9).points.empty());
  EXPECT_THROW(sample_ppp(-1.0, 500, 9), Error);
}

TEST(Geometry, NearestBreaksTiesTowardLowestIndex) {
  PointSet s{{{10, 0}, {-10, 0}, {0, 10}}, 0, 100, BoundaryMode::plane};
  auto r = nearest({0, 0}, s);
  EXPECT_EQ(r.index, 0u);
  EXPECT_NEAR(r.distance, 10, 1e-12);
  PointSet empty{{}, 0, 100, BoundaryMode::plane};
  EXPECT_THROW(nearest({0, 0}, empty), Error);
}

TEST(Geometry, GridMatchesBruteForce) {
  for (auto mode : {BoundaryMode::torus, BoundaryMode::plane}) {
    auto pts = sample_ppp(2e-3, 300, 5, mode);
    SpatialGrid g(300, mode, 15);
    g.build(pts.points);
    auto probes = sample_ppp(5e-4, 300, 6, mode);
    for (auto p : probes.points) {
      std::vector<std::size_t> got, want;
      g.for_each_within(p, 25, [&](std::size_t id, double) { got.push_back(id); });
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (distance(p, pts.points[i], 300, mode) <= 25) want.push_back(i);
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, want);
      auto a = g.nearest(p);
      auto b = nearest(p, pts);
      EXPECT_EQ(a.index, b.index);
      EXPECT_DOUBLE_EQ(a.distance, b.distance);
    }
  }
}
