#include "bendlab/hypcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bendlab {

namespace {

Tolerances g_tolerances{};

constexpr double kInf = std::numeric_limits<double>::infinity();

// det [X Y] for homogeneous points X = (xp, xq), Y = (yp, yq).
double hdet(const std::array<Complex, 2>& x, const std::array<Complex, 2>& y) {
  return (x[0] * y[1] - x[1] * y[0]).real();
}

Mat2 lift_normalized(Mat2 m) {
  const Complex tr = m.trace();
  if (tr.real() < 0.0 || (tr.real() == 0.0 && tr.imag() < 0.0)) m = -m;
  return m;
}

// Point on the Riemann sphere (unit sphere in R^3) for interpolation.
std::array<double, 3> to_sphere(const BoundaryPoint& p) {
  if (p.is_infinite()) return {0.0, 0.0, 1.0};
  const Complex z = p.value();
  const double n = std::norm(z);
  return {2.0 * z.real() / (1.0 + n), 2.0 * z.imag() / (1.0 + n), (n - 1.0) / (n + 1.0)};
}

BoundaryPoint from_sphere(std::array<double, 3> s) {
  const double len = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  for (double& v : s) v /= len;
  if (s[2] >= 1.0 - 1e-300 && s[0] == 0.0 && s[1] == 0.0) return BoundaryPoint::infinity();
  const double denom = 1.0 - s[2];
  if (denom <= 0.0) return BoundaryPoint::infinity();
  return BoundaryPoint(Complex(s[0] / denom, s[1] / denom));
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotLoxodromic: return "NotLoxodromic";
    case ErrorKind::DegenerateLeaf: return "DegenerateLeaf";
    case ErrorKind::DegenerateImage: return "DegenerateImage";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidContext: return "InvalidContext";
    case ErrorKind::MismatchedContexts: return "MismatchedContexts";
    case ErrorKind::NonConvergentDifference: return "NonConvergentDifference";
    case ErrorKind::EmptySubsegmentFamily: return "EmptySubsegmentFamily";
    case ErrorKind::NoDisjointCurveFound: return "NoDisjointCurveFound";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

const Tolerances& default_tolerances() { return g_tolerances; }
void set_default_tolerances(const Tolerances& tol) { g_tolerances = tol; }

// ---------------------------------------------------------------------------

BoundaryPoint BoundaryPoint::from_homogeneous(Complex p, Complex q) {
  if (q == Complex(0.0)) {
    if (p == Complex(0.0)) throw Error(ErrorKind::InvalidArgument, "zero homogeneous vector");
    return infinity();
  }
  const Complex z = p / q;
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return infinity();
  return BoundaryPoint(z);
}

bool BoundaryPoint::approx_equal(const BoundaryPoint& other, double tol) const {
  if (infinite_ || other.infinite_) return infinite_ == other.infinite_;
  const double scale = std::max({1.0, std::abs(value_), std::abs(other.value_)});
  return std::abs(value_ - other.value_) <= tol * scale;
}

bool boundary_less(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  if (a.value().real() != b.value().real()) return a.value().real() < b.value().real();
  return a.value().imag() < b.value().imag();
}

double chordal_distance(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) {
    const Complex z = a.is_infinite() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  const Complex z = a.value(), w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

// ---------------------------------------------------------------------------

double matrix_norm(const Mat2& m) {
  return std::max(std::abs(m.a) + std::abs(m.b), std::abs(m.c) + std::abs(m.d));
}

Unimodular Unimodular::from_entries(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    throw Error(ErrorKind::InvalidArgument, "matrix is singular");
  }
  const Complex s = std::sqrt(det);
  Unimodular u;
  u.m_ = lift_normalized(Mat2{a / s, b / s, c / s, d / s});
  return u;
}

Unimodular Unimodular::inverse() const {
  Unimodular u;
  u.m_ = Mat2{m_.d, -m_.b, -m_.c, m_.a};
  return u;
}

Unimodular Unimodular::conjugate() const {
  Unimodular u;
  u.m_ = lift_normalized(Mat2{std::conj(m_.a), std::conj(m_.b), std::conj(m_.c), std::conj(m_.d)});
  return u;
}

Unimodular Unimodular::operator*(const Unimodular& o) const {
  Unimodular u;
  u.m_ = lift_normalized(m_ * o.m_);
  return u;
}

BoundaryPoint Unimodular::apply(const BoundaryPoint& z) const {
  const auto h = z.homogeneous();
  return BoundaryPoint::from_homogeneous(m_.a * h[0] + m_.b * h[1], m_.c * h[0] + m_.d * h[1]);
}

bool Unimodular::is_real(double tol) const {
  return std::abs(m_.a.imag()) <= tol && std::abs(m_.b.imag()) <= tol &&
         std::abs(m_.c.imag()) <= tol && std::abs(m_.d.imag()) <= tol;
}

double matrix_norm(const Unimodular& m) { return matrix_norm(m.matrix()); }

double projective_distance(const Unimodular& a, const Unimodular& b) {
  return std::min(matrix_norm(a.matrix() - b.matrix()), matrix_norm(a.matrix() + b.matrix()));
}

// ---------------------------------------------------------------------------

double hyp_distance(Complex p, Complex q) {
  return 2.0 * std::asinh(std::abs(p - q) / (2.0 * std::sqrt(p.imag() * q.imag())));
}

double hyp_distance(const H3Point& p, const H3Point& q) {
  const double dh = p.height - q.height;
  const double chord = std::sqrt(std::norm(p.horizontal - q.horizontal) + dh * dh);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.height * q.height)));
}

H3Point h3_apply(const Unimodular& m, const H3Point& q) {
  const Mat2& x = m.matrix();
  const Complex cw_d = x.c * q.horizontal + x.d;
  const double h2 = q.height * q.height;
  const double denom = std::norm(cw_d) + std::norm(x.c) * h2;
  const Complex w = ((x.a * q.horizontal + x.b) * std::conj(cw_d) + x.a * std::conj(x.c) * h2) / denom;
  return {w, q.height / denom};
}

// ---------------------------------------------------------------------------

OrientedGeodesic::OrientedGeodesic(BoundaryPoint s, BoundaryPoint t) : source(s), target(t) {
  if (s.approx_equal(t)) throw Error(ErrorKind::InvalidArgument, "geodesic endpoints coincide");
}

Geodesic::Geodesic(BoundaryPoint u, BoundaryPoint v) {
  if (u.approx_equal(v)) throw Error(ErrorKind::DegenerateLeaf, "geodesic endpoints coincide");
  if (boundary_less(v, u)) std::swap(u, v);
  first_ = u;
  second_ = v;
}

bool Geodesic::approx_equal(const Geodesic& other, double tol) const {
  auto near = [tol](const BoundaryPoint& x, const BoundaryPoint& y) {
    return chordal_distance(x, y) <= tol;
  };
  return (near(first_, other.first_) && near(second_, other.second_)) ||
         (near(first_, other.second_) && near(second_, other.first_));
}

Geodesic apply(const Unimodular& m, const Geodesic& g) {
  return Geodesic(m.apply(g.first()), m.apply(g.second()));
}

OrientedGeodesic apply(const Unimodular& m, const OrientedGeodesic& g) {
  return {m.apply(g.source), m.apply(g.target)};
}

Unimodular standardizing_matrix(const OrientedGeodesic& g) {
  auto u = g.source.homogeneous();
  auto v = g.target.homogeneous();
  if (g.is_real(default_tolerances().boundary)) {
    for (auto* h : {&u, &v}) {
      (*h)[0] = Complex((*h)[0].real(), 0.0);
      (*h)[1] = Complex((*h)[1].real(), 0.0);
    }
    // Keep det > 0 so that the matrix preserves the upper half-plane.
    if (hdet(v, u) < 0.0) {
      v[0] = -v[0];
      v[1] = -v[1];
    }
  }
  return Unimodular::from_entries(v[0], u[0], v[1], u[1]);
}

Unimodular axis_isometry(const OrientedGeodesic& axis, Complex z) {
  const Complex ep = std::exp(0.5 * z);
  const Complex em = std::exp(-0.5 * z);
  if (axis.source.is_infinite()) {
    const Complex v = axis.target.value();
    return Unimodular::from_entries(em, v * (ep - em), 0.0, ep);
  }
  if (axis.target.is_infinite()) {
    const Complex u = axis.source.value();
    return Unimodular::from_entries(ep, u * (em - ep), 0.0, em);
  }
  const Complex u = axis.source.value();
  const Complex v = axis.target.value();
  const Complex w = v - u;
  return Unimodular::from_entries((v * ep - u * em) / w, (u * v) * (em - ep) / w, (ep - em) / w,
                                  (v * em - u * ep) / w);
}

Displacement complex_displacement(const Unimodular& m) {
  const Complex tr = m.trace();
  const double tol = default_tolerances().matrix;
  if (std::abs(tr * tr - 4.0) <= tol) {
    throw Error(ErrorKind::NotLoxodromic, "identity or parabolic matrix");
  }
  if (std::abs(tr.imag()) <= tol && std::abs(tr.real()) < 2.0) {
    throw Error(ErrorKind::NotLoxodromic, "elliptic matrix");
  }
  Complex z = 2.0 * std::acosh(0.5 * tr);
  if (z.real() < 0.0) z = -z;
  if (z.imag() <= -std::numbers::pi) z += Complex(0.0, 2.0 * std::numbers::pi);
  if (z.real() <= 0.0) throw Error(ErrorKind::NotLoxodromic, "no translation along an axis");

  const Mat2& x = m.matrix();
  auto eigenvector = [&](Complex lambda) {
    // Two candidate kernels of (A - lambda I); keep the better conditioned one.
    const std::array<Complex, 2> v1{x.b, lambda - x.a};
    const std::array<Complex, 2> v2{lambda - x.d, x.c};
    const double n1 = std::abs(v1[0]) + std::abs(v1[1]);
    const double n2 = std::abs(v2[0]) + std::abs(v2[1]);
    const auto& v = n1 >= n2 ? v1 : v2;
    return BoundaryPoint::from_homogeneous(v[0], v[1]);
  };
  const Complex lambda = std::exp(0.5 * z);
  return {OrientedGeodesic(eigenvector(1.0 / lambda), eigenvector(lambda)), z};
}

// ---------------------------------------------------------------------------

Relation relate(const Geodesic& g1, const Geodesic& g2, double tol) {
  if (g1.approx_equal(g2, tol)) return Relation::Equal;
  auto near = [tol](const BoundaryPoint& x, const BoundaryPoint& y) {
    return chordal_distance(x, y) <= tol;
  };
  if (near(g1.first(), g2.first()) || near(g1.first(), g2.second()) ||
      near(g1.second(), g2.first()) || near(g1.second(), g2.second())) {
    return Relation::Asymptotic;
  }
  const auto a1 = g1.first().homogeneous();
  const auto a2 = g1.second().homogeneous();
  const auto b1 = g2.first().homogeneous();
  const auto b2 = g2.second().homogeneous();
  const double s = hdet(a1, b1) * hdet(a2, b2) * hdet(a1, b2) * hdet(a2, b1);
  return s < 0.0 ? Relation::Crossing : Relation::Disjoint;
}

std::optional<Intersection> cross(const Geodesic& g1, const Geodesic& g2) {
  if (relate(g1, g2) != Relation::Crossing) return std::nullopt;
  // At most one of the two is vertical: they would otherwise share infinity.
  const Geodesic* line = nullptr;
  const Geodesic* circle = nullptr;
  if (g1.second().is_infinite()) {
    line = &g1;
    circle = &g2;
  } else if (g2.second().is_infinite()) {
    line = &g2;
    circle = &g1;
  }
  if (line != nullptr) {
    const double a = line->first().value().real();
    const double u = circle->first().value().real();
    const double v = circle->second().value().real();
    const double c = 0.5 * (u + v);
    const double r = 0.5 * std::abs(v - u);
    const double y = std::sqrt(std::max(0.0, (a - u) * (v - a)));
    return Intersection{Complex(a, y), std::acos(std::clamp(std::abs(a - c) / r, 0.0, 1.0))};
  }
  const double u1 = g1.first().value().real();
  const double v1 = g1.second().value().real();
  const double u2 = g2.first().value().real();
  const double v2 = g2.second().value().real();
  const double c1 = 0.5 * (u1 + v1);
  const double r1 = 0.5 * (v1 - u1);
  const double c2 = 0.5 * (u2 + v2);
  const double r2 = 0.5 * (v2 - u2);
  const double d = c2 - c1;
  const double x = 0.5 * (c1 + c2) + (r1 * r1 - r2 * r2) / (2.0 * d);
  const double y = std::sqrt(std::max(0.0, r1 * r1 - (x - c1) * (x - c1)));
  const double cos_angle = std::abs(d * d - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
  return Intersection{Complex(x, y), std::acos(std::clamp(cos_angle, 0.0, 1.0))};
}

double distance_to_geodesic(Complex z, const Geodesic& g) {
  const double x = z.real();
  const double y = z.imag();
  const double u = g.first().value().real();
  if (g.second().is_infinite()) return std::asinh(std::abs(x - u) / y);
  const double v = g.second().value().real();
  return std::asinh(std::abs((x - u) * (x - v) + y * y) / (y * std::abs(v - u)));
}

// ---------------------------------------------------------------------------

GeodesicSegment::GeodesicSegment(Complex start, Complex end) : start_(start), end_(end) {
  if (!(start.imag() > 0.0) || !(end.imag() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "segment endpoints must lie in the upper half-plane");
  }
  length_ = hyp_distance(start, end);
  if (!(length_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "segment has zero length");

  // Move start to i, find the geodesic through i and the image of end.
  const double sy = std::sqrt(start.imag());
  const Unimodular to_start = Unimodular::from_entries(sy, start.real() / sy, 0.0, 1.0 / sy);
  const Complex w = to_start.inverse().apply(end);
  const double a = w.real();
  const double numer = std::norm(w) - 1.0;
  const double root = std::sqrt(numer * numer + 4.0 * a * a);
  const double big = numer >= 0.0 ? numer + root : numer - root;
  // Roots of a e^2 - numer e - a = 0, written homogeneously so a = 0 is exact.
  std::array<Complex, 2> e1{big, 2.0 * a};
  std::array<Complex, 2> e2{-2.0 * a, big};
  // Orient so that |(z - src) / (z - tgt)| grows from i to w.
  auto progress = [](Complex z, const std::array<Complex, 2>& s, const std::array<Complex, 2>& t) {
    return std::abs(z * s[1] - s[0]) / std::abs(z * t[1] - t[0]);
  };
  if (progress(w, e2, e1) < progress(Complex(0.0, 1.0), e2, e1)) std::swap(e1, e2);
  carrier_ = OrientedGeodesic(to_start.apply(BoundaryPoint::from_homogeneous(e2[0], e2[1])),
                              to_start.apply(BoundaryPoint::from_homogeneous(e1[0], e1[1])));
  const Unimodular m = standardizing_matrix(carrier_);
  const double h0 = m.inverse().apply(start).imag();
  const double sh = std::sqrt(h0);
  frame_ = m * Unimodular::from_entries(sh, 0.0, 0.0, 1.0 / sh);
}

Complex GeodesicSegment::point_at(double s) const {
  if (s <= 0.0) return start_;
  if (s >= 1.0) return end_;
  return frame_.apply(Complex(0.0, std::exp(s * length_)));
}

std::optional<SegmentCrossing> segment_crossing(const Geodesic& leaf, const GeodesicSegment& seg,
                                                double tol) {
  const Unimodular inv = seg.frame().inverse();
  const BoundaryPoint p = inv.apply(leaf.first());
  const BoundaryPoint q = inv.apply(leaf.second());
  const double btol = default_tolerances().boundary;
  const BoundaryPoint zero(0.0);
  const BoundaryPoint inf = BoundaryPoint::infinity();
  if ((p.approx_equal(zero, btol) && q.approx_equal(inf, btol)) ||
      (p.approx_equal(inf, btol) && q.approx_equal(zero, btol))) {
    throw Error(ErrorKind::DegenerateLeaf, "leaf is the carrier of the segment");
  }
  const auto hp = p.homogeneous();
  const auto hq = q.homogeneous();
  const double pp = hp[0].real(), pq = hp[1].real(), qp = hq[0].real(), qq = hq[1].real();
  if (pp * pq * qp * qq >= 0.0) return std::nullopt;

  const double tau = 0.5 * (std::log(std::abs(pp)) + std::log(std::abs(qp)) -
                            std::log(std::abs(pq)) - std::log(std::abs(qq)));
  const double len = seg.length();
  if (tau < -tol || tau > len + tol) return std::nullopt;

  SegmentCrossing out;
  if (std::abs(tau) <= tol) {
    out.flag = EndpointFlag::Start;
    out.s = 0.0;
  } else if (std::abs(tau - len) <= tol) {
    out.flag = EndpointFlag::End;
    out.s = 1.0;
  } else {
    out.s = std::clamp(tau / len, 0.0, 1.0);
  }
  out.side = pp * pq < 0.0 ? Side::Left : Side::Right;
  const double cos_angle = std::abs(pp * qq + qp * pq) / std::abs(pp * qq - qp * pq);
  out.angle = std::acos(std::clamp(cos_angle, 0.0, 1.0));
  out.point = seg.frame().apply(Complex(0.0, std::exp(tau)));
  return out;
}

OrientedGeodesic orient_across(const Geodesic& leaf, const SegmentCrossing& crossing) {
  if (crossing.side == Side::Left) return {leaf.first(), leaf.second()};
  return {leaf.second(), leaf.first()};
}

// ---------------------------------------------------------------------------

bool BoundaryDisc::contains(const BoundaryPoint& p, double tol) const {
  const BoundaryPoint s = standard.apply(p);
  if (exterior) {
    if (s.is_infinite()) return true;
    if (std::isinf(radius)) return false;
    return std::abs(s.value()) >= radius * (1.0 - tol);
  }
  if (s.is_infinite()) return false;
  return std::abs(s.value()) <= radius * (1.0 + tol) + tol;
}

Unimodular cylinder_frame(const OrientedGeodesic& core, const H3Point& basepoint, double tol) {
  const Unimodular m = standardizing_matrix(core);
  const H3Point w = h3_apply(m.inverse(), basepoint);
  if (std::abs(w.horizontal) > tol * w.height) {
    throw Error(ErrorKind::InvalidArgument, "basepoint does not lie on the core");
  }
  const double s = std::sqrt(w.height);
  return Unimodular::from_entries(1.0 / s, 0.0, 0.0, s) * m.inverse();
}

SolidCylinder::SolidCylinder(const OrientedGeodesic& core, const H3Point& basepoint, double radius)
    : core_(core), basepoint_(basepoint), radius_(radius) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative cylinder radius");
  standard_ = cylinder_frame(core, basepoint);
}

std::array<BoundaryDisc, 2> SolidCylinder::supporting_discs() const {
  const double inner = std::tanh(0.5 * radius_);
  const double outer = radius_ == 0.0 ? kInf : 1.0 / inner;
  return {BoundaryDisc{standard_, inner, false}, BoundaryDisc{standard_, outer, true}};
}

bool SolidCylinder::contains(const OrientedGeodesic& g, double tol) const {
  const auto discs = supporting_discs();
  return (discs[0].contains(g.source, tol) && discs[1].contains(g.target, tol)) ||
         (discs[0].contains(g.target, tol) && discs[1].contains(g.source, tol));
}

std::array<BoundaryDisc, 2> cylinder_supporting_discs(const SolidCylinder& c) {
  return c.supporting_discs();
}

double required_radius(const OrientedGeodesic& core, const H3Point& basepoint, const Geodesic& g) {
  const Unimodular t = cylinder_frame(core, basepoint);
  const BoundaryPoint p = t.apply(g.first());
  const BoundaryPoint q = t.apply(g.second());
  auto inner = [](const BoundaryPoint& x) {
    if (x.is_infinite()) return kInf;
    const double r = std::abs(x.value());
    return r < 1.0 ? 2.0 * std::atanh(r) : kInf;
  };
  auto outer = [](const BoundaryPoint& x) {
    if (x.is_infinite()) return 0.0;
    const double r = std::abs(x.value());
    return r > 1.0 ? 2.0 * std::atanh(1.0 / r) : kInf;
  };
  return std::min(std::max(inner(p), outer(q)), std::max(inner(q), outer(p)));
}

// ---------------------------------------------------------------------------

GeodesicTransfer GeodesicTransfer::mobius(const Unimodular& g) {
  GeodesicTransfer t;
  t.kind_ = Kind::Mobius;
  t.mobius_ = g;
  return t;
}

GeodesicTransfer GeodesicTransfer::table(std::vector<double> xs, std::vector<BoundaryPoint> images) {
  if (xs.size() != images.size() || xs.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "transfer table needs at least 3 samples");
  }
  GeodesicTransfer t;
  t.kind_ = Kind::Table;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double angle = std::isinf(xs[k]) ? std::numbers::pi : 2.0 * std::atan(xs[k]);
    if (!t.angles_.empty() && !(angle > t.angles_.back())) {
      throw Error(ErrorKind::InvalidArgument, "transfer table samples must increase");
    }
    t.angles_.push_back(angle);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (images[i].approx_equal(images[j])) {
        throw Error(ErrorKind::InvalidArgument, "transfer table is not injective");
      }
    }
  }
  t.images_ = std::move(images);
  return t;
}

BoundaryPoint GeodesicTransfer::apply(const BoundaryPoint& p) const {
  switch (kind_) {
    case Kind::Identity: return p;
    case Kind::Mobius: return mobius_.apply(p);
    case Kind::Table: break;
  }
  const double pi = std::numbers::pi;
  double angle = p.is_infinite() ? pi : 2.0 * std::atan(p.value().real());
  const std::size_t n = angles_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (angle == angles_[k]) return images_[k];
  }
  std::size_t lo = n - 1, hi = 0;
  double a0 = angles_[n - 1], a1 = angles_[0] + 2.0 * pi;
  if (angle > angles_[0] && angle < angles_[n - 1]) {
    hi = static_cast<std::size_t>(std::upper_bound(angles_.begin(), angles_.end(), angle) -
                                  angles_.begin());
    lo = hi - 1;
    a0 = angles_[lo];
    a1 = angles_[hi];
  } else if (angle < angles_[0]) {
    angle += 2.0 * pi;
  }
  const double w = (angle - a0) / (a1 - a0);
  const auto s0 = to_sphere(images_[lo]);
  const auto s1 = to_sphere(images_[hi]);
  return from_sphere({(1.0 - w) * s0[0] + w * s1[0], (1.0 - w) * s0[1] + w * s1[1],
                      (1.0 - w) * s0[2] + w * s1[2]});
}

OrientedGeodesic GeodesicTransfer::apply(const OrientedGeodesic& g) const {
  const BoundaryPoint s = apply(g.source);
  const BoundaryPoint t = apply(g.target);
  if (s.approx_equal(t)) throw Error(ErrorKind::DegenerateImage, "transferred endpoints coincide");
  return {s, t};
}

std::optional<H3Point> GeodesicTransfer::extend(const H3Point& p) const {
  switch (kind_) {
    case Kind::Identity: return p;
    case Kind::Mobius: return h3_apply(mobius_, p);
    case Kind::Table: return std::nullopt;
  }
  return std::nullopt;
}

Geodesic transfer(const GeodesicTransfer& phi, const Geodesic& g) {
  const BoundaryPoint u = phi.apply(g.first());
  const BoundaryPoint v = phi.apply(g.second());
  if (u.approx_equal(v)) throw Error(ErrorKind::DegenerateImage, "transferred endpoints coincide");
  return Geodesic(u, v);
}

}  // namespace bendlab
