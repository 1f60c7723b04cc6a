#include "bendlab/kernels.hpp"

#include <atomic>
#include <cmath>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define BENDLAB_HAVE_X86 1
#else
#define BENDLAB_HAVE_X86 0
#endif

namespace bendlab::kernels {

// ---------------------------------------------------------------------------
// Scalar reference

namespace scalar {

void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    out_p[i] = m.a[i] * p + m.b[i] * q;
    out_q[i] = m.c[i] * p + m.d[i] * q;
  }
}

void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = p1[i] * q1[i] * p2[i] * q2[i];
    double num = -(p1[i] * p2[i]);
    double den = q1[i] * q2[i];
    if (den < 0.0) {
      num = -num;
      den = -den;
    }
    hit[i] = (s < 0.0 && num >= lo * den && num <= hi * den) ? 1 : 0;
  }
}

void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d11 = p1[i] * y1 - q1[i] * x1;
    const double d22 = p2[i] * y2 - q2[i] * x2;
    const double d12 = p1[i] * y2 - q1[i] * x2;
    const double d21 = p2[i] * y1 - q2[i] * x1;
    out[i] = ((d11 * d22) * d12) * d21;
  }
}

void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double num = p1[i] * p2[i] + q1[i] * q2[i];
    const double den = p2[i] * q1[i] - p1[i] * q2[i];
    out[i] = std::fabs(num) / std::fabs(den);
  }
}

}  // namespace scalar

// ---------------------------------------------------------------------------
// AVX2

namespace avx2 {

#if BENDLAB_HAVE_X86

namespace {

__attribute__((target("avx2"))) inline __m256d vabs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

__attribute__((target("avx2"))) inline __m256d vneg(__m256d x) {
  return _mm256_xor_pd(_mm256_set1_pd(-0.0), x);
}

}  // namespace

__attribute__((target("avx2"))) void mobius_apply_batch(const MatrixBatch& m, double p, double q,
                                                        double* out_p, double* out_q) {
  const std::size_t n = m.size();
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(m.a.data() + i);
    const __m256d b = _mm256_loadu_pd(m.b.data() + i);
    const __m256d c = _mm256_loadu_pd(m.c.data() + i);
    const __m256d d = _mm256_loadu_pd(m.d.data() + i);
    _mm256_storeu_pd(out_p + i, _mm256_add_pd(_mm256_mul_pd(a, vp), _mm256_mul_pd(b, vq)));
    _mm256_storeu_pd(out_q + i, _mm256_add_pd(_mm256_mul_pd(c, vp), _mm256_mul_pd(d, vq)));
  }
  for (; i < n; ++i) {
    out_p[i] = m.a[i] * p + m.b[i] * q;
    out_q[i] = m.c[i] * p + m.d[i] * q;
  }
}

__attribute__((target("avx2"))) void segment_hit_batch(const double* p1, const double* q1,
                                                       const double* p2, const double* q2,
                                                       std::size_t n, double lo, double hi,
                                                       std::uint8_t* hit) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a1 = _mm256_loadu_pd(p1 + i);
    const __m256d b1 = _mm256_loadu_pd(q1 + i);
    const __m256d a2 = _mm256_loadu_pd(p2 + i);
    const __m256d b2 = _mm256_loadu_pd(q2 + i);
    const __m256d s = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(a1, b1), a2), b2);
    __m256d num = vneg(_mm256_mul_pd(a1, a2));
    __m256d den = _mm256_mul_pd(b1, b2);
    const __m256d flip = _mm256_cmp_pd(den, zero, _CMP_LT_OQ);
    num = _mm256_blendv_pd(num, vneg(num), flip);
    den = _mm256_blendv_pd(den, vneg(den), flip);
    __m256d ok = _mm256_cmp_pd(s, zero, _CMP_LT_OQ);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(num, _mm256_mul_pd(vlo, den), _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(num, _mm256_mul_pd(vhi, den), _CMP_LE_OQ));
    const int mask = _mm256_movemask_pd(ok);
    for (int k = 0; k < 4; ++k) hit[i + k] = static_cast<std::uint8_t>((mask >> k) & 1);
  }
  if (i < n) scalar::segment_hit_batch(p1 + i, q1 + i, p2 + i, q2 + i, n - i, lo, hi, hit + i);
}

__attribute__((target("avx2"))) void interleave_batch(const double* p1, const double* q1,
                                                      const double* p2, const double* q2,
                                                      std::size_t n, double x1, double y1,
                                                      double x2, double y2, double* out) {
  const __m256d vx1 = _mm256_set1_pd(x1);
  const __m256d vy1 = _mm256_set1_pd(y1);
  const __m256d vx2 = _mm256_set1_pd(x2);
  const __m256d vy2 = _mm256_set1_pd(y2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a1 = _mm256_loadu_pd(p1 + i);
    const __m256d b1 = _mm256_loadu_pd(q1 + i);
    const __m256d a2 = _mm256_loadu_pd(p2 + i);
    const __m256d b2 = _mm256_loadu_pd(q2 + i);
    const __m256d d11 = _mm256_sub_pd(_mm256_mul_pd(a1, vy1), _mm256_mul_pd(b1, vx1));
    const __m256d d22 = _mm256_sub_pd(_mm256_mul_pd(a2, vy2), _mm256_mul_pd(b2, vx2));
    const __m256d d12 = _mm256_sub_pd(_mm256_mul_pd(a1, vy2), _mm256_mul_pd(b1, vx2));
    const __m256d d21 = _mm256_sub_pd(_mm256_mul_pd(a2, vy1), _mm256_mul_pd(b2, vx1));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(d11, d22), d12), d21));
  }
  if (i < n) scalar::interleave_batch(p1 + i, q1 + i, p2 + i, q2 + i, n - i, x1, y1, x2, y2, out + i);
}

__attribute__((target("avx2"))) void sinh_distance_at_i_batch(const double* p1, const double* q1,
                                                              const double* p2, const double* q2,
                                                              std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a1 = _mm256_loadu_pd(p1 + i);
    const __m256d b1 = _mm256_loadu_pd(q1 + i);
    const __m256d a2 = _mm256_loadu_pd(p2 + i);
    const __m256d b2 = _mm256_loadu_pd(q2 + i);
    const __m256d num = _mm256_add_pd(_mm256_mul_pd(a1, a2), _mm256_mul_pd(b1, b2));
    const __m256d den = _mm256_sub_pd(_mm256_mul_pd(a2, b1), _mm256_mul_pd(a1, b2));
    _mm256_storeu_pd(out + i, _mm256_div_pd(vabs(num), vabs(den)));
  }
  if (i < n) scalar::sinh_distance_at_i_batch(p1 + i, q1 + i, p2 + i, q2 + i, n - i, out + i);
}

#else

void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q) {
  scalar::mobius_apply_batch(m, p, q, out_p, out_q);
}
void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit) {
  scalar::segment_hit_batch(p1, q1, p2, q2, n, lo, hi, hit);
}
void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out) {
  scalar::interleave_batch(p1, q1, p2, q2, n, x1, y1, x2, y2, out);
}
void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out) {
  scalar::sinh_distance_at_i_batch(p1, q1, p2, q2, n, out);
}

#endif

}  // namespace avx2

// ---------------------------------------------------------------------------
// Dispatch

namespace {

// -1: automatic, otherwise static_cast<int>(Isa).
std::atomic<int> g_forced{-1};

}  // namespace

bool avx2_available() {
#if BENDLAB_HAVE_X86
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced == static_cast<int>(Isa::Scalar)) return Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void force_isa(std::optional<Isa> isa) {
  g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q) {
  if (active_isa() == Isa::Avx2) return avx2::mobius_apply_batch(m, p, q, out_p, out_q);
  scalar::mobius_apply_batch(m, p, q, out_p, out_q);
}

void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit) {
  if (active_isa() == Isa::Avx2) return avx2::segment_hit_batch(p1, q1, p2, q2, n, lo, hi, hit);
  scalar::segment_hit_batch(p1, q1, p2, q2, n, lo, hi, hit);
}

void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out) {
  if (active_isa() == Isa::Avx2) {
    return avx2::interleave_batch(p1, q1, p2, q2, n, x1, y1, x2, y2, out);
  }
  scalar::interleave_batch(p1, q1, p2, q2, n, x1, y1, x2, y2, out);
}

void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out) {
  if (active_isa() == Isa::Avx2) return avx2::sinh_distance_at_i_batch(p1, q1, p2, q2, n, out);
  scalar::sinh_distance_at_i_batch(p1, q1, p2, q2, n, out);
}

}  // namespace bendlab::kernels
