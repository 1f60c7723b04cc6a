#include <cstring>
#include <random>

#include "bendlab/io.hpp"
#include "bendlab/kernels.hpp"
#include "bendlab/laminations.hpp"
#include "doctest.h"

using namespace bendlab;
namespace k = bendlab::kernels;

namespace {

struct Leaves {
  std::vector<double> p1, q1, p2, q2;
};

// Includes sizes that are not multiples of the vector width and a few
// endpoints at infinity (q = 0).
Leaves random_leaves(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Leaves out;
  for (std::size_t i = 0; i < n; ++i) {
    out.p1.push_back(u(gen));
    out.q1.push_back(i % 17 == 3 ? 0.0 : u(gen));
    out.p2.push_back(u(gen));
    out.q2.push_back(u(gen));
  }
  return out;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("kernel dispatch") {
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::force_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == (k::avx2_available() ? k::Isa::Avx2 : k::Isa::Scalar));
  k::force_isa(std::nullopt);
  CHECK(std::string(k::isa_name(k::Isa::Scalar)) == "scalar");
}

TEST_CASE("scalar and avx2 kernels agree bitwise") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 63u, 1000u}) {
    const Leaves l = random_leaves(n, 100 + n);

    k::MatrixBatch m;
    std::mt19937_64 gen(n);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t i = 0; i < n; ++i) m.push_back(u(gen), u(gen), u(gen), u(gen));
    std::vector<double> sp(n), sq(n), vp(n), vq(n);
    k::scalar::mobius_apply_batch(m, 0.3, -1.7, sp.data(), sq.data());
    k::avx2::mobius_apply_batch(m, 0.3, -1.7, vp.data(), vq.data());
    CHECK(bitwise_equal(sp, vp));
    CHECK(bitwise_equal(sq, vq));

    std::vector<std::uint8_t> sh(n), vh(n);
    k::scalar::segment_hit_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, 0.5, 3.0, sh.data());
    k::avx2::segment_hit_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, 0.5, 3.0, vh.data());
    CHECK(sh == vh);

    std::vector<double> si(n), vi(n);
    k::scalar::interleave_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, -1.0, 1.0, 2.0, 1.0, si.data());
    k::avx2::interleave_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, -1.0, 1.0, 2.0, 1.0, vi.data());
    CHECK(bitwise_equal(si, vi));

    std::vector<double> sd(n), vd(n);
    k::scalar::sinh_distance_at_i_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, sd.data());
    k::avx2::sinh_distance_at_i_batch(l.p1.data(), l.q1.data(), l.p2.data(), l.q2.data(), n, vd.data());
    CHECK(bitwise_equal(sd, vd));
  }
}

TEST_CASE("kernel oracles") {
  // Interleaving of (0 : 1), (inf) against (-1, 1): crosses.
  double p1 = 0.0, q1 = 1.0, p2 = 1.0, q2 = 0.0, out = 0.0;
  k::scalar::interleave_batch(&p1, &q1, &p2, &q2, 1, -1.0, 1.0, 1.0, 1.0, &out);
  CHECK(out < 0.0);
  double a = 2.0, b = 3.0;
  double one = 1.0;
  k::scalar::interleave_batch(&a, &one, &b, &one, 1, -1.0, 1.0, 1.0, 1.0, &out);
  CHECK(out > 0.0);

  // Leaf (-1, 1) crosses the imaginary axis at height 1.
  double m1 = -1.0;
  std::uint8_t hit = 0;
  k::scalar::segment_hit_batch(&m1, &one, &one, &one, 1, 0.5, 2.0, &hit);
  CHECK(hit == 1);
  k::scalar::segment_hit_batch(&m1, &one, &one, &one, 1, 1.5, 2.0, &hit);
  CHECK(hit == 0);

  // Distance from i to (2, 3): sinh d computed from the closed form.
  double d = 0.0;
  k::scalar::sinh_distance_at_i_batch(&a, &one, &b, &one, 1, &d);
  CHECK(std::asinh(d) == doctest::Approx(distance_to_geodesic(Complex(0.0, 1.0), Geodesic(2.0, 3.0))).epsilon(1e-12));
}

TEST_CASE("orbit enumeration is identical under both ISAs") {
  const Representation oct = genus2_octagon();
  const Complex x = io::default_basepoint();
  const GeodesicSegment seg(x, oct.image(2).apply(x));
  OrbitSpec spec{{{Geodesic(complex_displacement(oct.image(0)).axis), 1.0}}, oct, 7};
  k::force_isa(k::Isa::Scalar);
  const auto s_seg = orbit_translates(spec, seg);
  const auto s_win = orbit_translates(spec, Window{x, 2.0});
  k::force_isa(k::Isa::Avx2);
  const auto v_seg = orbit_translates(spec, seg);
  const auto v_win = orbit_translates(spec, Window{x, 2.0});
  k::force_isa(std::nullopt);
  REQUIRE(s_seg.size() == v_seg.size());
  REQUIRE(s_win.size() == v_win.size());
  for (std::size_t i = 0; i < s_seg.size(); ++i) {
    CHECK(s_seg[i].word == v_seg[i].word);
    CHECK(s_seg[i].leaf.first() == v_seg[i].leaf.first());
    CHECK(s_seg[i].leaf.second() == v_seg[i].leaf.second());
  }
  for (std::size_t i = 0; i < s_win.size(); ++i) CHECK(s_win[i].word == v_win[i].word);
}
