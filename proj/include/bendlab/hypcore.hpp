#pragma once

// Upper half-plane / upper half-space primitives: boundary points on the
// Riemann sphere, unimodular matrices, oriented and unoriented geodesics,
// segments, solid cylinders and boundary transfers.
//
// Conventions used throughout the library:
//  * Matrices are normalized to determinant 1 and to the lift whose trace has
//    nonnegative real part (ties on the imaginary axis: nonnegative imaginary
//    part).
//  * A complex displacement z has Re z >= 0 and Im z in (-pi, pi] when it is
//    recovered from a matrix.
//  * The point at infinity is a flag, never a large float.

#include <array>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "bendlab/error.hpp"

namespace bendlab {

using Complex = std::complex<double>;

struct Tolerances {
  double boundary = 1e-12;  // boundary point equality, absolute and relative
  double matrix = 1e-10;    // matrix identities and determinant checks
  double geometry = 1e-9;   // crossing-at-endpoint detection, leaf dedup
};

const Tolerances& default_tolerances();
void set_default_tolerances(const Tolerances& tol);

// ---------------------------------------------------------------------------
// Boundary points

class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  BoundaryPoint(Complex z) : value_(z) {}  // NOLINT(google-explicit-constructor)
  BoundaryPoint(double x) : value_(x, 0.0) {}  // NOLINT(google-explicit-constructor)

  static BoundaryPoint infinity() {
    BoundaryPoint p;
    p.infinite_ = true;
    return p;
  }

  // (p, q) with the point equal to p / q; infinity is (1, 0).
  static BoundaryPoint from_homogeneous(Complex p, Complex q);
  std::array<Complex, 2> homogeneous() const {
    if (infinite_) return {Complex(1.0), Complex(0.0)};
    return {value_, Complex(1.0)};
  }

  bool is_infinite() const { return infinite_; }
  // Finite value; meaningless for the point at infinity.
  Complex value() const { return value_; }
  bool is_real(double tol) const { return infinite_ || std::abs(value_.imag()) <= tol; }

  bool approx_equal(const BoundaryPoint& other, double tol = default_tolerances().boundary) const;
  bool operator==(const BoundaryPoint& other) const {
    return infinite_ == other.infinite_ && (infinite_ || value_ == other.value_);
  }

 private:
  Complex value_{0.0, 0.0};
  bool infinite_ = false;
};

// Total order: finite points by (re, im), infinity last.
bool boundary_less(const BoundaryPoint& a, const BoundaryPoint& b);

// Chordal distance on the Riemann sphere (diameter 2).  Used where a point
// computed as a huge finite value must match infinity, e.g. leaf dedup.
double chordal_distance(const BoundaryPoint& a, const BoundaryPoint& b);

// ---------------------------------------------------------------------------
// Matrices

struct Mat2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(Complex s) const { return {a * s, b * s, c * s, d * s}; }
};

// max{|a|+|b|, |c|+|d|}: the operator norm for the max-norm on C^2.
double matrix_norm(const Mat2& m);

class Unimodular {
 public:
  Unimodular() = default;

  // Rescales to determinant 1 and applies the lift normalization.
  // Throws InvalidArgument for a singular matrix.
  static Unimodular from_entries(Complex a, Complex b, Complex c, Complex d);
  static Unimodular from_matrix(const Mat2& m) { return from_entries(m.a, m.b, m.c, m.d); }
  static Unimodular identity() { return {}; }
  static Unimodular diagonal(Complex lambda) { return from_entries(lambda, 0.0, 0.0, 1.0 / lambda); }

  const Mat2& matrix() const { return m_; }
  Complex a() const { return m_.a; }
  Complex b() const { return m_.b; }
  Complex c() const { return m_.c; }
  Complex d() const { return m_.d; }
  Complex trace() const { return m_.trace(); }

  Unimodular inverse() const;
  Unimodular conjugate() const;  // entrywise complex conjugation
  Unimodular operator*(const Unimodular& o) const;

  BoundaryPoint apply(const BoundaryPoint& z) const;
  // Mobius action on a finite point (for real matrices, the H^2 action).
  Complex apply(Complex z) const { return (m_.a * z + m_.b) / (m_.c * z + m_.d); }

  bool is_real(double tol) const;

 private:
  Mat2 m_{};
};

double matrix_norm(const Unimodular& m);
// min(||A - B||, ||A + B||): distance between the two lifts in PSL(2,C).
double projective_distance(const Unimodular& a, const Unimodular& b);

// ---------------------------------------------------------------------------
// Points of H^2 (complex numbers with positive imaginary part) and H^3.

struct H3Point {
  Complex horizontal{0.0, 0.0};
  double height = 1.0;

  static H3Point origin() { return {Complex(0.0, 0.0), 1.0}; }  // c = (0, 0, 1)
  static H3Point from_h2(Complex z) { return {Complex(z.real(), 0.0), z.imag()}; }
};

double hyp_distance(Complex p, Complex q);
double hyp_distance(const H3Point& p, const H3Point& q);
// Poincare extension of the Mobius action.
H3Point h3_apply(const Unimodular& m, const H3Point& q);

// ---------------------------------------------------------------------------
// Geodesics

struct OrientedGeodesic {
  BoundaryPoint source;
  BoundaryPoint target;

  OrientedGeodesic() : source(0.0), target(BoundaryPoint::infinity()) {}
  // Throws InvalidArgument when the endpoints coincide.
  OrientedGeodesic(BoundaryPoint s, BoundaryPoint t);

  OrientedGeodesic reversed() const { return {target, source}; }
  bool is_real(double tol) const { return source.is_real(tol) && target.is_real(tol); }
};

// Unordered geodesic, stored with endpoints in boundary_less order.
class Geodesic {
 public:
  Geodesic() : first_(0.0), second_(BoundaryPoint::infinity()) {}
  // Throws DegenerateLeaf when the endpoints coincide.
  Geodesic(BoundaryPoint u, BoundaryPoint v);
  explicit Geodesic(const OrientedGeodesic& g) : Geodesic(g.source, g.target) {}

  const BoundaryPoint& first() const { return first_; }
  const BoundaryPoint& second() const { return second_; }
  OrientedGeodesic oriented() const { return {first_, second_}; }
  bool is_real(double tol) const { return first_.is_real(tol) && second_.is_real(tol); }
  // Endpoints matched up to chordal distance tol, in either order.
  bool approx_equal(const Geodesic& other, double tol) const;

 private:
  BoundaryPoint first_;
  BoundaryPoint second_;
};

Geodesic apply(const Unimodular& m, const Geodesic& g);
OrientedGeodesic apply(const Unimodular& m, const OrientedGeodesic& g);

// Any unimodular M with M(0) = source and M(infinity) = target.  For real
// endpoints the result is real (an isometry of H^2).
Unimodular standardizing_matrix(const OrientedGeodesic& g);

// M diag(e^{z/2}, e^{-z/2}) M^{-1}: translation by Re z from source toward
// target composed with rotation by Im z about the axis.
Unimodular axis_isometry(const OrientedGeodesic& axis, Complex z);

struct Displacement {
  OrientedGeodesic axis;
  Complex z;
};

// Inverse of axis_isometry.  Throws NotLoxodromic for the identity and for
// parabolic or elliptic matrices.
Displacement complex_displacement(const Unimodular& m);

// ---------------------------------------------------------------------------
// H^2 geometry of geodesics and segments (real endpoints).

enum class Relation { Equal, Disjoint, Asymptotic, Crossing };

struct Intersection {
  Complex point;
  double angle = 0.0;  // unoriented, in [0, pi/2]
};

Relation relate(const Geodesic& g1, const Geodesic& g2, double tol = default_tolerances().boundary);
std::optional<Intersection> cross(const Geodesic& g1, const Geodesic& g2);

// Hyperbolic distance from an H^2 point to a real geodesic.
double distance_to_geodesic(Complex z, const Geodesic& g);

class GeodesicSegment {
 public:
  // Throws InvalidArgument unless both points lie in H^2 and are distinct.
  GeodesicSegment(Complex start, Complex end);

  Complex start() const { return start_; }
  Complex end() const { return end_; }
  double length() const { return length_; }
  // Carrier oriented from start toward end.
  const OrientedGeodesic& carrier() const { return carrier_; }
  // Real isometry S with S(i) = start and S(e^length i) = end.
  const Unimodular& frame() const { return frame_; }
  // Point at arc length fraction s in [0, 1].
  Complex point_at(double s) const;
  GeodesicSegment reversed() const { return {end_, start_}; }

 private:
  Complex start_;
  Complex end_;
  double length_ = 0.0;
  OrientedGeodesic carrier_;
  Unimodular frame_;
};

enum class EndpointFlag { None, Start, End };
enum class Side { Left, Right };

struct SegmentCrossing {
  double s = 0.0;  // normalized arc length parameter of the crossing
  EndpointFlag flag = EndpointFlag::None;
  Side side = Side::Left;  // side of the segment holding the leaf's first() endpoint
  double angle = 0.0;
  Complex point;
};

// Throws DegenerateLeaf when the geodesic is the carrier of the segment.
std::optional<SegmentCrossing> segment_crossing(const Geodesic& leaf, const GeodesicSegment& seg,
                                                double tol = default_tolerances().geometry);

// Orientation used by bending: the leaf runs from the segment's left-hand side
// to its right-hand side.
OrientedGeodesic orient_across(const Geodesic& leaf, const SegmentCrossing& crossing);

// ---------------------------------------------------------------------------
// Solid cylinders.
//
// In standard position (core (0, infinity) oriented upward, basepoint c) a
// geodesic orthogonal to the cylinder's disc at distance rho from c has
// endpoints p and 1/conj(p) with |p| = tanh(rho/2): it meets the hemisphere
// |zeta| = 1 at the point where the cross-ratio with the core is -1.  Hence
// the supporting discs are |zeta| <= tanh(r/2) and |zeta| >= coth(r/2).

struct BoundaryDisc {
  Unimodular standard;  // map to standard position
  double radius = 0.0;  // |zeta| bound in standard position
  bool exterior = false;  // true: {|zeta| >= radius} (including infinity)

  bool contains(const BoundaryPoint& p, double tol = default_tolerances().boundary) const;
};

class SolidCylinder {
 public:
  // Throws InvalidArgument when the basepoint is off the core or r < 0.
  SolidCylinder(const OrientedGeodesic& core, const H3Point& basepoint, double radius);

  const OrientedGeodesic& core() const { return core_; }
  const H3Point& basepoint() const { return basepoint_; }
  double radius() const { return radius_; }
  const Unimodular& standardizer() const { return standard_; }

  std::array<BoundaryDisc, 2> supporting_discs() const;
  // One endpoint in each supporting disc.
  bool contains(const OrientedGeodesic& g, double tol = default_tolerances().boundary) const;

 private:
  OrientedGeodesic core_;
  H3Point basepoint_;
  double radius_;
  Unimodular standard_;
};

std::array<BoundaryDisc, 2> cylinder_supporting_discs(const SolidCylinder& c);

// Real isometry taking the core to (0, infinity) and the basepoint to c.
Unimodular cylinder_frame(const OrientedGeodesic& core, const H3Point& basepoint,
                          double tol = 1e-8);
// Smallest radius r with g inside C(core, basepoint, r); infinity if no radius works.
double required_radius(const OrientedGeodesic& core, const H3Point& basepoint, const Geodesic& g);

// ---------------------------------------------------------------------------
// Boundary transfer phi and the induced map on geodesics.

class GeodesicTransfer {
 public:
  enum class Kind { Identity, Mobius, Table };

  GeodesicTransfer() = default;
  static GeodesicTransfer identity() { return {}; }
  static GeodesicTransfer mobius(const Unimodular& g);
  // Samples (x_k, phi(x_k)) with strictly increasing x_k (the last may be
  // +infinity) and pairwise distinct images.  Interpolation runs on the
  // Riemann sphere, linear in the angle 2 atan(x), and wraps around through
  // infinity.
  static GeodesicTransfer table(std::vector<double> xs, std::vector<BoundaryPoint> images);

  Kind kind() const { return kind_; }
  const Unimodular& mobius_matrix() const { return mobius_; }
  const std::vector<double>& table_angles() const { return angles_; }
  const std::vector<BoundaryPoint>& table_images() const { return images_; }

  BoundaryPoint apply(const BoundaryPoint& p) const;
  // Throws DegenerateImage if the endpoint images coincide.
  OrientedGeodesic apply(const OrientedGeodesic& g) const;
  // Extension to H^3 where one exists (identity and Mobius kinds).
  std::optional<H3Point> extend(const H3Point& p) const;

 private:
  Kind kind_ = Kind::Identity;
  Unimodular mobius_;
  std::vector<double> angles_;
  std::vector<BoundaryPoint> images_;
};

Geodesic transfer(const GeodesicTransfer& phi, const Geodesic& g);

}  // namespace bendlab
