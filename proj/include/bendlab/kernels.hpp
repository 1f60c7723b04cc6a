#pragma once

// Batched kernels for orbit enumeration.  Every kernel has a scalar reference
// implementation and an AVX2 variant; the variant is chosen once at runtime
// from CPUID and can be pinned for testing.  The AVX2 code uses only
// add/sub/mul/div/sqrt (no FMA), so both paths produce bitwise equal output.
//
// Homogeneous real boundary points are (p, q) with the point p / q; leaves are
// stored structure-of-arrays as (p1, q1, p2, q2).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace bendlab::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
// The ISA in use: the forced one if set, otherwise the best available.
Isa active_isa();
// Pin the ISA (nullopt restores automatic selection).  Forcing Avx2 on a CPU
// without it falls back to Scalar.
void force_isa(std::optional<Isa> isa);
const char* isa_name(Isa isa);

// Real 2x2 matrices, structure-of-arrays.
struct MatrixBatch {
  std::vector<double> a, b, c, d;

  std::size_t size() const { return a.size(); }
  void push_back(double va, double vb, double vc, double vd) {
    a.push_back(va);
    b.push_back(vb);
    c.push_back(vc);
    d.push_back(vd);
  }
};

// out[i] = M_i (p, q).
void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q);

// Leaves with both endpoints on opposite sides of the imaginary axis and the
// crossing height h = sqrt(-(p1 p2) / (q1 q2)) satisfying lo <= h^2 <= hi.
// In a segment frame (segment = [i, e^L i]) these are the leaves crossing it.
void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit);

// Product of the four determinants that is negative exactly when the leaf
// interleaves the fixed geodesic (x1 : y1), (x2 : y2).
void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out);

// sinh of the hyperbolic distance from i to each leaf.
void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out);

namespace scalar {
void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q);
void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit);
void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out);
void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out);
}  // namespace scalar

namespace avx2 {
void mobius_apply_batch(const MatrixBatch& m, double p, double q, double* out_p, double* out_q);
void segment_hit_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                       std::size_t n, double lo, double hi, std::uint8_t* hit);
void interleave_batch(const double* p1, const double* q1, const double* p2, const double* q2,
                      std::size_t n, double x1, double y1, double x2, double y2, double* out);
void sinh_distance_at_i_batch(const double* p1, const double* q1, const double* p2,
                              const double* q2, std::size_t n, double* out);
}  // namespace avx2

}  // namespace bendlab::kernels
