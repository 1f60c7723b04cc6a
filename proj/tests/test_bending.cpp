#include <cmath>
#include <numbers>

#include "bendlab/bending.hpp"
#include "bendlab/experiments.hpp"
#include "bendlab/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bendlab;
using testing::entry_dist;
using testing::mat_dist;

namespace {

const Complex I{0.0, 1.0};

Geodesic axis_of(const Unimodular& g) { return Geodesic(complex_displacement(g).axis); }

OrbitSpec axis_orbit(const Representation& rho, int generator, int cap, Complex weight = 1.0) {
  return OrbitSpec{{{axis_of(rho.image(generator)), weight}}, rho, cap};
}

// A leaf crossing the segment orthogonally at parameter s.
Geodesic orthogonal_leaf(const GeodesicSegment& seg, double s) {
  const Unimodular& f = seg.frame();
  const double h = std::exp(s * seg.length());
  return Geodesic(f.apply(BoundaryPoint(-h)), f.apply(BoundaryPoint(h)));
}

// d/dt tr(A(axis, t z) g) at t = 0.
Complex leaf_derivative(const OrientedGeodesic& axis, Complex z, const Unimodular& g) {
  const Unimodular m = standardizing_matrix(axis);
  const Mat2 s{1.0, 0.0, 0.0, -1.0};
  const Mat2 dc = m.matrix() * s * m.inverse().matrix() * (z / 2.0);
  return (dc * g.matrix()).trace();
}

}  // namespace

TEST_CASE("context validation") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  CHECK(ctx.theta() > 0.0);
  CHECK(ctx.d() >= ctx.d_prime());
  CHECK(ctx.d_prime() > 0.0);
  CHECK(ctx.rank() == 4);

  // i lies on every generator axis of the regular octagon.
  try {
    BendingContext bad(oct, I);
    FAIL("expected InvalidContext");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidContext);
  }
  // A point of the axis of a conjugate.
  const Unimodular g1 = oct.image(1);
  const Geodesic conj = apply(g1, axis_of(oct.image(0)));
  const Complex on_conj = GeodesicSegment(g1.apply(I), g1.apply(oct.image(0).apply(I))).point_at(0.3);
  REQUIRE(distance_to_geodesic(on_conj, conj) <= 1e-9);
  CHECK_THROWS_AS(BendingContext(oct, on_conj), Error);
  CHECK_THROWS_AS(BendingContext(oct, Complex(0.2, -1.0)), Error);
  CHECK_THROWS_AS(BendingContext(oct, oct.conjugated(Unimodular::diagonal(std::polar(1.0, 0.3))), io::default_basepoint()), Error);
}

TEST_CASE("cocycle examples") {
  const GeodesicTransfer id;
  const Complex x = Complex(0.2, 0.9), y = Complex(0.4, 2.0);
  CHECK(entry_dist(bending_cocycle(id, FiniteLamination(), x, y, 1.0), Unimodular::identity()) == 0.0);
  CHECK(entry_dist(bending_cocycle(id, FiniteLamination({{Geodesic(5.0, 6.0), 1.0}}), x, y, 1.0),
                   Unimodular::identity()) == 0.0);

  const GeodesicSegment seg(x, y);
  const Geodesic leaf = orthogonal_leaf(seg, 0.4);
  const Complex z(0.7, 0.3), t(0.5, -0.2);
  const auto c = segment_crossing(leaf, seg);
  REQUIRE(c);
  const Unimodular expect = axis_isometry(orient_across(leaf, *c), t * z);
  CHECK(mat_dist(bending_cocycle(id, FiniteLamination({{leaf, z}}), x, y, t), expect) <= 1e-12);
}

TEST_CASE("counterexample cocycle") {
  const Complex x = std::polar(1.0, std::numbers::pi / 4), y = I;
  const Unimodular diag = Unimodular::diagonal(std::exp(0.5));
  for (double n : {10.0, 100.0, 1000.0}) {
    const FiniteLamination mu = counterexample_lamination(n);
    const Unimodular c = bending_cocycle(GeodesicTransfer(), mu, x, y, 1.0);
    CHECK(std::abs(c.trace() - 2.2552519) <= 1e-7);
    CHECK(std::abs(c.trace() - 2.0 * std::cosh(0.5)) <= 1e-12);
    CHECK(complex_displacement(c).z.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mat_dist(c, diag) <= 2.0 / n);
    // The only crossing leaf is (1/n, n).
    CHECK(crossings(mu, GeodesicSegment(x, y)).size() == 1);
    CHECK(mat_dist(c, axis_isometry({1.0 / n, n}, 1.0)) <= 1e-12);
  }
}

TEST_CASE("bend") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  const LaminationSource mu = axis_orbit(oct, 0, 6);

  const Representation zero = bend(ctx, mu, 0.0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(entry_dist(zero.images[j], oct.images[j]) == 0.0);

  const Representation real = bend(ctx, mu, 0.3);
  CHECK(real.is_real(1e-12));
  CHECK(relator_residual(real) <= 1e-8);

  const Representation bent = bend(ctx, mu, 0.1 * I);
  CHECK(relator_residual(bent) <= 1e-8);
  CHECK_FALSE(bent.is_real(1e-6));
}

TEST_CASE("partition of unity") {
  for (int m : {2, 4, 8, 16}) {
    for (int k = 0; k <= 40; ++k) {
      const double u = m * k / 40.0;
      double total = 0.0;
      for (int i = 1; i <= m - 1; ++i) total += partition_weight(i, m, u);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(partition_weight(1, m, 0.5) == 1.0);
    CHECK(partition_weight(m - 1, m, m - 0.5) == 1.0);
  }
}

TEST_CASE("approx bundle identities") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  const LaminationSource mu = axis_orbit(oct, 0, 6, Complex(1.0, 0.4));
  for (std::size_t j = 0; j < 4; ++j) {
    for (int m : {4, 8}) {
      const ApproxBundle b = approx_bundle(ctx, mu, j, {m, Complex(0.0, 0.2), std::nullopt});
      REQUIRE(b.points.size() == static_cast<std::size_t>(m + 1));
      REQUIRE(b.C.size() == static_cast<std::size_t>(m));
      REQUIRE(b.D.size() == static_cast<std::size_t>(m - 1));
      for (int i = 1; i <= m - 1; ++i) {
        CHECK(std::abs(b.prime_mass[i - 1] - (b.a[i - 1] + b.b[i - 1])) <= 1e-14);
      }
      for (int k = 1; k <= m; ++k) {
        CHECK(std::abs(b.tilde_mass[k - 1] - b.tilde_integral[k - 1]) <= 1e-12);
      }
      // D_1 = P Q D_1^r and D_{m-1} = D_{m-1}^l R S.
      CHECK(mat_dist(b.D.front(), b.P * b.Q * b.D_right.front()) <= 1e-10);
      CHECK(mat_dist(b.D.back(), b.D_left.back() * b.R * b.S) <= 1e-10);
      CHECK(std::abs(b.a_chi + b.a_rest - b.a.front()) <= 1e-12);
      CHECK(std::abs(b.b_chi + b.b_rest - b.b.back()) <= 1e-12);
      // E is the cocycle along the segment (all mass of each subsegment on
      // one leaf).
      const Complex total_mass = [&] {
        Complex s = 0.0;
        for (const Complex& v : b.tilde_mass) s += v;
        return s;
      }();
      CHECK(std::abs(total_mass - integral_prime(b.lamination, ctx.segment(j))) <= 1e-12);
    }
  }
}

TEST_CASE("approx bundle trivial cases") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());

  const ApproxBundle empty = approx_bundle(ctx, FiniteLamination(), 0, {8, 1.0, std::nullopt});
  CHECK(entry_dist(empty.E, Unimodular::identity()) == 0.0);
  CHECK(entry_dist(empty.B, Unimodular::identity()) == 0.0);
  CHECK(empty.product_difference == 0.0);

  const GeodesicSegment& seg = ctx.segment(0);
  for (int m : {4, 8, 16}) {
    // Inside the third subsegment, away from the partition points.
    const double s = (2.0 + 0.37) / m;
    const FiniteLamination one({{orthogonal_leaf(seg, s), Complex(0.4, 0.9)}});
    const ApproxBundle b = approx_bundle(ctx, one, 0, {m, Complex(0.0, 0.2), std::nullopt});
    CHECK(b.product_difference <= 1e-12);
    CHECK(mat_dist(b.E, bending_cocycle(ctx, one, seg.start(), seg.end(), Complex(0.0, 0.2))) <= 1e-12);
  }
}

TEST_CASE("conjugated distance") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  const LaminationSource mu = axis_orbit(oct, 0, 6);
  std::vector<ApproxBundle> bundles;
  for (std::size_t j = 0; j < 4; ++j) bundles.push_back(approx_bundle(ctx, mu, j, {8, 0.1 * I, std::nullopt}));
  const ConjugatedDistance cd = conjugated_distance(bundles, bundles);
  CHECK(entry_dist(cd.H, Unimodular::identity()) <= 1e-15);
  CHECK(cd.dist == 0.0);

  std::vector<ApproxBundle> other;
  for (std::size_t j = 0; j < 4; ++j) other.push_back(approx_bundle(ctx, mu, j, {4, 0.1 * I, std::nullopt}));
  CHECK_THROWS_AS(conjugated_distance(bundles, other), Error);
}

TEST_CASE("rep class distance") {
  const Representation oct = genus2_octagon();
  std::vector<Word> words;
  for (const Word& w : word_ball(4, 2)) {
    if (!w.empty()) words.push_back(w);
  }
  CHECK(rep_class_distance(oct, oct, words) == 0.0);
  const Unimodular g = Unimodular::from_entries(Complex(1.0, 0.2), 0.3, Complex(0.1, -0.4), 1.0);
  CHECK(rep_class_distance(oct, oct.conjugated(g), words) <= 1e-10);

  const BendingContext ctx(oct, io::default_basepoint());
  const LaminationSource mu = axis_orbit(oct, 0, 6);
  std::vector<Word> long_words;
  for (const Word& w : word_ball(4, 4)) {
    if (!w.empty()) long_words.push_back(w);
  }
  const double d1 = rep_class_distance(bend(ctx, mu, 0.01), oct, long_words);
  const double d2 = rep_class_distance(bend(ctx, mu, 0.02), oct, long_words);
  const double d4 = rep_class_distance(bend(ctx, mu, 0.04), oct, long_words);
  CHECK(d1 > 0.0);
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(d4 / d2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("vector field") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  const std::vector<Word> words{Word::letter(0), Word::letter(1), Word::parse("ab", oct.presentation.names)};

  for (const Complex& v : bending_vector_field(ctx, FiniteLamination(), words)) CHECK(v == Complex(0.0));

  // One leaf crossing [x, g_0(x)] once and no other generator segment.
  const GeodesicSegment& seg = ctx.segment(0);
  Geodesic leaf = orthogonal_leaf(seg, 0.45);
  for (std::size_t j = 1; j < 4; ++j) REQUIRE_FALSE(segment_crossing(leaf, ctx.segment(j)));
  const Complex z(0.8, -0.3);
  const FiniteLamination one({{leaf, z}});
  const auto c = segment_crossing(leaf, seg);
  REQUIRE(c);
  const Complex expect = leaf_derivative(orient_across(leaf, *c), z, oct.image(0));
  const auto field = bending_vector_field(ctx, one, words);
  CHECK(std::abs(field[0] - expect) <= 1e-7);
  CHECK(std::abs(field[1]) <= 1e-9);

  const auto coarse = central_difference(ctx, one, {words[0]}, 0.02);
  const auto fine = central_difference(ctx, one, {words[0]}, 0.01);
  const double ratio = std::abs(coarse[0] - expect) / std::abs(fine[0] - expect);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);

  const LaminationSource mu = axis_orbit(oct, 0, 6);
  const auto base = bending_vector_field(ctx, mu, words);
  const Complex k(0.3, 1.7);
  const auto scaled_field = bending_vector_field(ctx, scaled(mu, k), words);
  for (std::size_t w = 0; w < words.size(); ++w) CHECK(std::abs(scaled_field[w] - k * base[w]) <= 1e-8);
}

TEST_CASE("holomorphy") {
  const Representation oct = genus2_octagon();
  const BendingContext ctx(oct, io::default_basepoint());
  std::vector<Word> words;
  for (const Word& w : word_ball(4, 2)) {
    if (!w.empty()) words.push_back(w);
  }
  const Complex t0(0.05, 0.05);
  CHECK(holomorphy_residual(ctx, FiniteLamination(), words, t0, 1e-4) == 0.0);
  const LaminationSource mu = axis_orbit(oct, 0, 6);
  const double r = holomorphy_residual(ctx, mu, words, t0, 1e-4);
  CHECK(r <= 1e-6);

  const Unimodular g = Unimodular::from_entries(Complex(1.0, 0.1), 0.2, Complex(-0.1, 0.2), 1.0);
  const BendingContext conj(oct.conjugated(g), oct, io::default_basepoint());
  CHECK(std::abs(holomorphy_residual(conj, mu, words, t0, 1e-4) - r) <= 1e-8);
}

TEST_CASE("fitting helpers") {
  const std::vector<double> u{1.0, 2.0, 3.0, 4.0}, v{0.5, 0.1, 0.7, 0.2};
  std::vector<double> y;
  for (std::size_t k = 0; k < u.size(); ++k) y.push_back(2.0 * u[k] + 3.0 * v[k]);
  const LinearFit f = fit_two_terms(u, v, y);
  CHECK(f.n1 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.n2 == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.max_residual <= 1e-10);

  // Negative coefficients are clamped away.
  std::vector<double> y2;
  for (std::size_t k = 0; k < u.size(); ++k) y2.push_back(2.0 * u[k] - 0.5 * v[k]);
  const LinearFit g = fit_two_terms(u, v, y2);
  CHECK(g.n1 >= 0.0);
  CHECK(g.n2 >= 0.0);

  CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0).epsilon(1e-12));
}
