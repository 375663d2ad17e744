#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ifstile/attractor.hpp"

using namespace ifstile;
using namespace testfix;

TEST_CASE("chaos game is deterministic per seed and bounded for dyadic") {
  const IfsSpec spec = dyadic();
  const PointCloud a = chaos_game(spec, 5000, 100, 1);
  const PointCloud b = chaos_game(spec, 5000, 100, 1);
  const PointCloud c = chaos_game(spec, 5000, 100, 2);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != c.coords);
  for (double x : a.coords) {
    CHECK(x >= -1e-9);
    CHECK(x <= 1.0 + 1e-9);
  }
}

TEST_CASE("bounding box of the sierpinski cloud matches the triangle") {
  const PointCloud cloud = chaos_game(sierpinski(), 50000, 100, 3);
  const Box b = bounding_box(cloud);
  CHECK(b.lo[0] == doctest::Approx(0.0).epsilon(0.01));
  CHECK(b.hi[0] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(b.lo[1] == doctest::Approx(0.0).epsilon(0.01));
  CHECK(b.hi[1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(0.01));
}

namespace {

// Independent oracle: plain bisection on g(D) = sum lambda_i^D - 1.
double moran_oracle(const std::vector<double>& ratios) {
  double lo = 1e-9, hi = 64.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double r : ratios) s += std::pow(r, mid);
    (s > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Moran dimension: closed forms and oracle") {
  CHECK(std::abs(moran_dimension({0.5, 0.5}) - 1.0) < 1e-12);
  CHECK(std::abs(moran_dimension({0.5, 0.5, 0.5}) -
                 std::log(3.0) / std::log(2.0)) < 1e-10);
  const auto fr = fern().ratios();
  CHECK(std::abs(moran_dimension(fr) - moran_oracle(fr)) < 1e-9);
  // Residual below 1e-12 on every fixture.
  for (const auto& ratios :
       {dyadic().ratios(), golden().ratios(), quartic().ratios(), fr}) {
    const double d = moran_dimension(ratios);
    double s = 0.0;
    for (double r : ratios) s += std::pow(r, d);
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("PointGrid nearest distances are exact against brute force") {
  auto g = rng(11);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  PointCloud cloud;
  cloud.dim = 2;
  for (int i = 0; i < 2000; ++i) {
    const double p[2] = {coord(g), coord(g)};
    cloud.push(p);
  }
  const PointGrid grid(cloud);
  for (int it = 0; it < 300; ++it) {
    const double q[2] = {coord(g) * 1.4, coord(g) * 1.4};
    double best = 1e300;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double* p = cloud.point(i);
      const double d2 = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
      best = std::min(best, d2);
    }
    CHECK(grid.nearest_distance(q) == doctest::Approx(std::sqrt(best)).epsilon(1e-12));
  }
}

TEST_CASE("distance field is 1-Lipschitz across neighboring pixels") {
  const PointCloud cloud = chaos_game(sierpinski(), 20000, 100, 5);
  const Box w{{-0.2, -0.2}, {1.2, 1.1}};
  const RasterField f = distance_field(cloud, w, 128, 128);
  const double pw = f.pixel_w(), ph = f.pixel_h();
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x + 1 < f.width; ++x)
      CHECK(std::abs(f.at(x + 1, y) - f.at(x, y)) <= pw + 1e-12);
  for (int y = 0; y + 1 < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      CHECK(std::abs(f.at(x, y + 1) - f.at(x, y)) <= ph + 1e-12);
}

TEST_CASE("1-d clouds measure distance along the line") {
  PointCloud cloud;
  cloud.dim = 1;
  const double p0 = 0.0, p1 = 1.0;
  cloud.push(&p0);
  cloud.push(&p1);
  const Box w{{-0.5, -0.1}, {1.5, 0.1}};
  const RasterField f = distance_field(cloud, w, 100, 3);
  // Center row, center pixel x ~ 0.5: distance ~ 0.5 (to either endpoint).
  const double d = f.sample(0.5, 0.0);
  CHECK(d == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("attractor mask covers the dyadic interval and not far outside") {
  const Box w{{-0.5, -0.05}, {1.5, 0.05}};
  const RasterField mask = attractor_mask(dyadic(), w, 200, 3, 10);
  CHECK(mask.sample(0.5, 0.0) == 1.0);
  CHECK(mask.sample(0.01, 0.0) == 1.0);
  CHECK(mask.sample(-0.4, 0.0) == 0.0);
  CHECK(mask.sample(1.4, 0.0) == 0.0);
}

TEST_CASE("pgm and csv exports are deterministic") {
  const PointCloud cloud = chaos_game(dyadic(), 1000, 50, 9);
  std::ostringstream a, b;
  write_csv(cloud, a);
  write_csv(cloud, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find(',') == std::string::npos);  // 1-d: one column
}
