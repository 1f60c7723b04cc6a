#pragma once

// Randomized property checks shared by the unit suite and the acceptance
// binary.  Each returns the number of cases, the number of failures and the
// worst deviation seen.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bendlab/bending.hpp"
#include "bendlab/io.hpp"
#include "support.hpp"

namespace testing {

using namespace bendlab;

struct PropertyReport {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;

  void record(double deviation, double tol) {
    ++cases;
    worst = std::max(worst, deviation);
    if (!(deviation <= tol)) ++failures;
  }
  void record(bool ok) {
    ++cases;
    if (!ok) ++failures;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

inline double boundary_gap(const BoundaryPoint& a, const BoundaryPoint& b) { return chordal_distance(a, b); }

// Random lamination of k pairwise disjoint leaves crossing the segment
// [frame(i), frame(e^L i)] at the given heights, with complex weights.  In the
// frame, leaves (-p, q) with p, q increasing are nested, hence disjoint.
struct RandomLamination {
  GeodesicSegment seg;
  FiniteLamination lam;
  std::vector<double> heights;  // crossing heights in the frame
};

inline RandomLamination random_lamination(Rng& rng, int k) {
  const Unimodular frame = rng.real_unimodular(0.6);
  const double len = rng.uniform(0.3, 2.0);
  std::vector<double> heights;
  for (int i = 0; i < k; ++i) heights.push_back(std::exp(rng.uniform(-0.3, len + 0.3)));
  std::sort(heights.begin(), heights.end());
  std::vector<Leaf> leaves;
  double prev_h = 0.0, prev_r = 1.0;
  for (double h : heights) {
    // (-h r, h / r) crosses the imaginary axis at height h.  Nesting needs
    // both h r and h / r to grow, so r moves by less than the height ratio.
    const double r = prev_h > 0.0 ? prev_r * std::pow(h / prev_h, rng.uniform(-0.8, 0.8))
                                  : std::exp(rng.uniform(-0.2, 0.2));
    prev_h = h;
    prev_r = r;
    leaves.push_back({Geodesic(frame.apply(BoundaryPoint(-h * r)), frame.apply(BoundaryPoint(h / r))),
                      rng.complex(1.5)});
  }
  const Complex start = frame.apply(Complex(0.0, 1.0));
  const Complex end = frame.apply(Complex(0.0, std::exp(len)));
  return {GeodesicSegment(start, end), FiniteLamination(std::move(leaves)), heights};
}

// --- hypcore ----------------------------------------------------------------

inline PropertyReport prop_axis_round_trip(std::uint64_t seed, int n) {
  PropertyReport rep{"axis/displacement round trip"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const OrientedGeodesic g = rng.uniform() < 0.5 ? rng.real_geodesic() : rng.complex_geodesic();
    const Complex z(rng.uniform(0.05, 3.0), rng.uniform(-3.0, 3.0));
    const Unimodular a = axis_isometry(g, z);
    const Displacement d = complex_displacement(a);
    const double dev = std::max({std::abs(d.z - z), boundary_gap(d.axis.source, g.source),
                                 boundary_gap(d.axis.target, g.target)});
    rep.record(dev, 1e-9);
    const double tr = std::min(std::abs(a.trace() - 2.0 * std::cosh(z / 2.0)),
                               std::abs(a.trace() + 2.0 * std::cosh(z / 2.0)));
    rep.record(tr, 1e-10);
    rep.record(mat_dist(axis_isometry(g.reversed(), z), axis_isometry(g, -z)), 0.0);
  }
  return rep;
}

inline PropertyReport prop_conjugation_equivariance(std::uint64_t seed, int n) {
  PropertyReport rep{"axis isometry conjugation equivariance"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const OrientedGeodesic g = rng.real_geodesic();
    const Complex z = rng.complex(1.5);
    const Unimodular h = rng.unimodular(0.7);
    const Unimodular lhs = axis_isometry(apply(h, g), z);
    const Unimodular rhs = h * axis_isometry(g, z) * h.inverse();
    rep.record(mat_dist(lhs, rhs), 1e-9);
  }
  return rep;
}

inline PropertyReport prop_norm(std::uint64_t seed, int n) {
  PropertyReport rep{"norm submultiplicativity and conjugation symmetry"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const Unimodular a = rng.unimodular(2.0), b = rng.unimodular(2.0);
    const double excess = matrix_norm(a * b) - matrix_norm(a) * matrix_norm(b);
    rep.record(std::max(0.0, excess), 1e-12 * matrix_norm(a) * matrix_norm(b));
    rep.record(std::abs(matrix_norm(a.conjugate()) - matrix_norm(a)), 1e-14 * matrix_norm(a));
    rep.record(matrix_norm(a) >= 1.0 - 1e-15);
  }
  return rep;
}

// d(c, A c) <= arccosh(||A||^2); the worst ratio per norm bucket must be
// nondecreasing in the bucket bound.
inline PropertyReport prop_norm_displacement(std::uint64_t seed, int n) {
  PropertyReport rep{"norm bounds displacement of c"};
  Rng rng(seed);
  const std::vector<double> bounds{2.0, 4.0, 8.0, 16.0};
  std::vector<double> radius(bounds.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    const Unimodular a = rng.unimodular(std::exp(rng.uniform(-2.0, 2.5)));
    const double norm = matrix_norm(a);
    const double d = hyp_distance(H3Point::origin(), h3_apply(a, H3Point::origin()));
    rep.record(std::max(0.0, d - std::acosh(norm * norm)), 1e-9);
    for (std::size_t b = 0; b < bounds.size(); ++b) {
      if (norm <= bounds[b]) radius[b] = std::max(radius[b], d);
    }
  }
  for (std::size_t b = 1; b < bounds.size(); ++b) rep.record(radius[b] >= radius[b - 1]);
  return rep;
}

inline PropertyReport prop_cross_invariance(std::uint64_t seed, int n) {
  PropertyReport rep{"cross symmetry and isometry invariance"};
  Rng rng(seed);
  int crossing = 0;
  while (crossing < n) {
    const Geodesic g1(rng.real_geodesic()), g2(rng.real_geodesic());
    const auto x = cross(g1, g2);
    const auto y = cross(g2, g1);
    if (!x) {
      rep.record(!y);
      continue;
    }
    ++crossing;
    if (!y) {
      rep.record(false);
      continue;
    }
    rep.record(std::abs(x->point - y->point) + std::abs(x->angle - y->angle), 1e-9);
    const Unimodular h = rng.real_unimodular(0.8);
    const auto z = cross(apply(h, g1), apply(h, g2));
    if (!z) {
      rep.record(false);
      continue;
    }
    rep.record(std::abs(z->angle - x->angle), 1e-9);
    rep.record(hyp_distance(z->point, h.apply(x->point)), 1e-8);
  }
  return rep;
}

inline PropertyReport prop_cylinder_invariance(std::uint64_t seed, int n) {
  PropertyReport rep{"cylinder membership isometry invariance"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const OrientedGeodesic core = rng.real_geodesic();
    const Unimodular s = standardizing_matrix(core);
    const double h = std::exp(rng.uniform(-1.0, 1.0));
    const H3Point base = h3_apply(s, H3Point{0.0, h});
    const double r = rng.uniform(0.1, 2.0);
    const OrientedGeodesic probe = rng.complex_geodesic();
    const double needed = required_radius(core, base, Geodesic(probe));
    // Stay away from the boundary of the membership region.
    if (std::abs(needed - r) < 1e-6) continue;
    const SolidCylinder c(core, base, r);
    const Unimodular g = rng.unimodular(0.6);
    const SolidCylinder moved(apply(g, core), h3_apply(g, base), r);
    rep.record(c.contains(probe) == moved.contains(apply(g, probe)));
  }
  return rep;
}

// --- fuchsian -----------------------------------------------------------------

inline PropertyReport prop_word_homomorphism(std::uint64_t seed, int n) {
  PropertyReport rep{"word evaluation homomorphism"};
  Rng rng(seed);
  const Representation oct = genus2_octagon();
  auto random_word = [&](int len) {
    std::vector<Letter> letters;
    for (int i = 0; i < len; ++i) {
      letters.push_back({static_cast<int>(rng.uniform(0.0, 4.0)), rng.uniform() < 0.5 ? 1 : -1});
    }
    return Word(letters);
  };
  for (int k = 0; k < n; ++k) {
    const Word w1 = random_word(static_cast<int>(rng.uniform(0.0, 6.0)));
    const Word w2 = random_word(static_cast<int>(rng.uniform(0.0, 6.0)));
    const Unimodular lhs = evaluate_word(oct, w1 * w2);
    const Unimodular rhs = evaluate_word(oct, w1) * evaluate_word(oct, w2);
    rep.record(mat_dist(lhs, rhs) / std::max(1.0, matrix_norm(lhs)), 1e-10);
  }
  for (int k = 0; k < std::max(1, n / 10); ++k) {
    const Unimodular g = rng.unimodular(0.5);
    rep.record(std::abs(relator_residual(oct.conjugated(g)) - relator_residual(oct)), 1e-8);
  }
  for (int rank = 1; rank <= 4; ++rank) {
    rep.record(word_ball(rank, 3).size() == word_ball_size(rank, 3));
  }
  return rep;
}

// --- laminations ----------------------------------------------------------------

inline PropertyReport prop_integral_additivity(std::uint64_t seed, int n) {
  PropertyReport rep{"transverse integral additivity"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const RandomLamination rl = random_lamination(rng, 1 + static_cast<int>(rng.uniform(0.0, 6.0)));
    const GeodesicSegment& seg = rl.seg;
    // Split at a random point, or exactly at a crossing.
    Complex y = seg.point_at(rng.uniform(0.1, 0.9));
    const auto cs = crossings(rl.lam, seg);
    if (!cs.empty() && rng.uniform() < 0.5) {
      const Crossing& c = cs[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(cs.size())))];
      if (c.flag == EndpointFlag::None) y = c.point;
    }
    const Complex whole = integral_prime(rl.lam, seg);
    const Complex parts =
        integral_prime(rl.lam, GeodesicSegment(seg.start(), y)) + integral_prime(rl.lam, GeodesicSegment(y, seg.end()));
    rep.record(std::abs(whole - parts), 1e-12 * std::max(1.0, lamination_norm(rl.lam)));
  }
  return rep;
}

inline PropertyReport prop_lamination_misc(std::uint64_t seed, int n) {
  PropertyReport rep{"crossing reversal, weak/integral agreement, norm domination"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    const RandomLamination rl = random_lamination(rng, 1 + static_cast<int>(rng.uniform(0.0, 6.0)));
    const auto fwd = crossings(rl.lam, rl.seg);
    const auto back = crossings(rl.lam, rl.seg.reversed());
    bool ok = fwd.size() == back.size();
    for (std::size_t i = 0; ok && i < fwd.size(); ++i) {
      const Crossing& b = back[fwd.size() - 1 - i];
      ok = b.leaf == fwd[i].leaf && b.side != fwd[i].side;
    }
    rep.record(ok);

    // f = 1 on interior crossings: weak_eval equals the integral when no
    // crossing sits on an endpoint.
    const TestFunction one = TestFunction::profile({{0.0, 1.0}}).with_segment(rl.seg);
    bool endpoint = false;
    for (const Crossing& c : fwd) endpoint = endpoint || c.flag != EndpointFlag::None;
    if (!endpoint) rep.record(std::abs(weak_eval(rl.lam, one) - integral_prime(rl.lam, rl.seg)), 1e-12);

    const TestFunction f =
        TestFunction::profile({{0.0, rng.uniform()}, {0.5, rng.uniform()}, {1.0, rng.uniform()}}).with_segment(rl.seg);
    rep.record(std::abs(weak_eval(rl.lam, f)) <= lamination_norm(rl.lam) + 1e-12);

    // Dropping leaves cannot lower the minimal angle.
    if (rl.lam.size() > 1) {
      std::vector<Leaf> sub(rl.lam.leaves().begin() + 1, rl.lam.leaves().end());
      const auto full = min_crossing_angle(rl.lam, rl.seg);
      const auto part = min_crossing_angle(FiniteLamination(sub), rl.seg);
      rep.record(!part || (full && *part >= *full));
    }
  }
  return rep;
}

// --- bending --------------------------------------------------------------------

inline PropertyReport prop_cocycle_multiplicativity(std::uint64_t seed, int n) {
  PropertyReport rep{"cocycle multiplicativity"};
  Rng rng(seed);
  const GeodesicTransfer id;
  for (int k = 0; k < n; ++k) {
    const RandomLamination rl = random_lamination(rng, 1 + static_cast<int>(rng.uniform(0.0, 8.0)));
    const Complex t = rng.complex(0.8);
    const GeodesicSegment& seg = rl.seg;
    Complex y = seg.point_at(rng.uniform(0.1, 0.9));
    const auto cs = crossings(rl.lam, seg);
    if (!cs.empty() && rng.uniform() < 0.5) {
      const Crossing& c = cs[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(cs.size())))];
      if (c.flag == EndpointFlag::None) y = c.point;
    }
    const Unimodular lhs =
        bending_cocycle(id, rl.lam, seg.start(), y, t) * bending_cocycle(id, rl.lam, y, seg.end(), t);
    const Unimodular rhs = bending_cocycle(id, rl.lam, seg.start(), seg.end(), t);
    rep.record(mat_dist(lhs, rhs) / std::max(1.0, matrix_norm(rhs)), 1e-10);
  }
  return rep;
}

// C(g x, g y) = rho(g) C(x, y) rho(g)^{-1} for the invariant orbit lamination
// of a simple closed curve on the octagon surface.
inline PropertyReport prop_cocycle_equivariance(std::uint64_t seed, int n) {
  PropertyReport rep{"cocycle equivariance"};
  Rng rng(seed);
  const Representation oct = genus2_octagon();
  const std::vector<std::string> curves{"a", "b", "c", "d", "b D"};
  const GeodesicTransfer id;
  const Complex x0 = io::default_basepoint();
  for (int k = 0; k < n; ++k) {
    const Word curve = Word::parse(curves[static_cast<std::size_t>(rng.uniform(0.0, 5.0))], oct.presentation.names);
    const OrbitSpec spec{io::curve_leaves(oct, curve, rng.complex(1.0)), oct, 6};
    const Complex x = x0 + 0.15 * rng.complex(1.0);
    const Complex y = x0 + 0.4 * rng.complex(1.0);
    const Word g = Word::letter(static_cast<int>(rng.uniform(0.0, 4.0)), rng.uniform() < 0.5 ? 1 : -1);
    const Unimodular rg = evaluate_word(oct, g);
    const Complex t = rng.complex(0.5);
    const GeodesicSegment seg(x, y), moved(rg.apply(x), rg.apply(y));
    const Unimodular here = bending_cocycle(id, orbit_instantiate(spec, seg), x, y, t);
    const Unimodular there = bending_cocycle(id, orbit_instantiate(spec, moved), moved.start(), moved.end(), t);
    rep.record(mat_dist(there, rg * here * rg.inverse()), 1e-9);
  }
  return rep;
}

}  // namespace testing
