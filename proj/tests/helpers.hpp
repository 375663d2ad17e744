#pragma once

// Shared fixtures: the worked systems built in code so unit tests do not
// depend on the bundled JSON files.

#include <cmath>
#include <random>
#include <vector>

#include "ifstile/geometry.hpp"

namespace testfix {

using namespace ifstile;

inline IfsSpec dyadic() {
  return IfsSpec::make({Similitude::make(1, {0.5}, {0.0}),
                        Similitude::make(1, {0.5}, {0.5})},
                       {1.0, 1.0}, "dyadic");
}

inline double golden_s() { return (std::sqrt(5.0) - 1.0) / 2.0; }

inline IfsSpec golden() {
  const double s = golden_s();
  return IfsSpec::make(
      {Similitude::make(2, {0.0, s, -s, 0.0}, {0.0, s}),
       Similitude::make(2, {-s * s, 0.0, 0.0, s * s}, {1.0, 0.0})},
      {1.0, 2.0}, "golden");
}

inline double quartic_s() { return 0.7244919590005156; }  // s + s^4 = 1

inline IfsSpec quartic() {
  const double s = quartic_s();
  return IfsSpec::make(
      {Similitude::make(2, {s, 0.0, 0.0, s}, {1.0, 0.0}),
       Similitude::make(2, {0.0, s * s, s * s, 0.0}, {0.0, 0.0})},
      {1.0, 2.0}, "quartic");
}

inline IfsSpec sierpinski() {
  const double h = std::sqrt(3.0) / 4.0;
  auto half = [](double tx, double ty) {
    return Similitude::make(2, {0.5, 0.0, 0.0, 0.5}, {tx, ty});
  };
  return IfsSpec::make({half(0.0, 0.0), half(0.5, 0.0), half(0.25, h)},
                       {1.0, 1.0, 1.0}, "sierpinski");
}

inline IfsSpec square4() {
  auto half = [](double tx, double ty) {
    return Similitude::make(2, {0.5, 0.0, 0.0, 0.5}, {tx, ty});
  };
  return IfsSpec::make(
      {half(0.0, 0.0), half(0.5, 0.0), half(0.0, 0.5), half(0.5, 0.5)},
      {1.0, 1.0, 1.0, 1.0}, "square-4map");
}

inline IfsSpec fern(bool paper_costs = true) {
  std::vector<Similitude> maps = {
      Similitude::make(2, {0.85, -0.05, 0.05, 0.85}, {0.53842, -0.15789}),
      Similitude::make(2, {0.17, 0.22, -0.22, 0.17}, {0.195909, 0.776364}),
      Similitude::make(2, {-0.17, -0.22, -0.22, 0.17}, {0.805, 0.776364})};
  if (paper_costs) return IfsSpec::make(std::move(maps), {1.0, 8.0, 8.0}, "fern");
  return IfsSpec::make(std::move(maps), "fern");
}

/// Deterministic test-side randomness.
inline std::mt19937_64 rng(std::uint64_t seed = 42) { return std::mt19937_64(seed); }

inline Similitude random_similitude(std::mt19937_64& g, double min_ratio = 0.2,
                                    double max_ratio = 0.9) {
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> ratio(min_ratio, max_ratio);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  return Similitude::rotation2d(angle(g), ratio(g), {shift(g), shift(g)});
}

}  // namespace testfix
