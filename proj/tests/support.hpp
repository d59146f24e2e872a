#pragma once

#include <cmath>
#include <random>

#include "landau/radial.hpp"

namespace landau::test {

inline RadialField maxwellian(const GridPtr& g) {
  return RadialField::sample(g, [](double r) { return std::exp(-r * r); });
}

// sum a_j (1 + b_j r^2) exp(-r^2 / s_j^2), nonnegative and even.
inline RadialField random_mixture(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a[3], s[3], b[3];
  for (int j = 0; j < 3; ++j) {
    a[j] = 0.1 + u(rng);
    s[j] = 0.6 + u(rng);
    b[j] = u(rng);
  }
  return RadialField::sample(g, [=](double r) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += a[j] * (1.0 + b[j] * r * r) * std::exp(-r * r / (s[j] * s[j]));
    return v;
  });
}

inline double max_diff(const RadialField& a, const RadialField& b) {
  return (a - b).max_abs();
}

}  // namespace landau::test
