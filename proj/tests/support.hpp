#pragma once

#include <cmath>
#include <random>

#include "bendlab/hypcore.hpp"

namespace testing {

using bendlab::Complex;
using bendlab::Unimodular;

inline double mat_dist(const Unimodular& a, const Unimodular& b) { return bendlab::projective_distance(a, b); }

// Exact entry comparison, no sign freedom.
inline double entry_dist(const Unimodular& a, const Unimodular& b) {
  return bendlab::matrix_norm(a.matrix() - b.matrix());
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  Complex h2_point() { return {uniform(-1.5, 1.5), std::exp(uniform(-1.0, 1.0))}; }

  Unimodular unimodular(double scale = 1.0) {
    for (;;) {
      Complex a = 1.0 + complex(scale), b = complex(scale), c = complex(scale), d = 1.0 + complex(scale);
      if (std::abs(a * d - b * c) > 0.2) return Unimodular::from_entries(a, b, c, d);
    }
  }
  Unimodular real_unimodular(double scale = 1.0) {
    for (;;) {
      double a = 1.0 + uniform(-scale, scale), b = uniform(-scale, scale), c = uniform(-scale, scale),
             d = 1.0 + uniform(-scale, scale);
      if (a * d - b * c > 0.2) return Unimodular::from_entries(a, b, c, d);
    }
  }
  // Distinct real endpoints, occasionally infinity.
  bendlab::OrientedGeodesic real_geodesic() {
    if (uniform() < 0.1) return {uniform(-3.0, 3.0), bendlab::BoundaryPoint::infinity()};
    for (;;) {
      double u = uniform(-3.0, 3.0), v = uniform(-3.0, 3.0);
      if (std::abs(u - v) > 0.05) return {u, v};
    }
  }
  bendlab::OrientedGeodesic complex_geodesic() {
    for (;;) {
      Complex u = complex(2.0), v = complex(2.0);
      if (std::abs(u - v) > 0.05) return {u, v};
    }
  }
};

}  // namespace testing
