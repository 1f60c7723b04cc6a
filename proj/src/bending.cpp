#include "bendlab/bending.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bendlab {

namespace {

OrientedGeodesic oriented_leaf(const Geodesic& leaf, Side side) {
  SegmentCrossing c;
  c.side = side;
  return orient_across(leaf, c);
}

Unimodular axis_or_identity(const std::optional<OrientedGeodesic>& axis, Complex z) {
  if (!axis || z == Complex(0.0)) return Unimodular::identity();
  return axis_isometry(*axis, z);
}

}  // namespace

// ---------------------------------------------------------------------------

BendingContext::BendingContext(Representation base, Complex x, ContextOptions options)
    : base_(base), reference_(std::move(base)), x_(x), options_(options) {
  build();
}

BendingContext::BendingContext(Representation base, Representation reference, Complex x,
                               ContextOptions options)
    : base_(std::move(base)), reference_(std::move(reference)), x_(x), options_(options) {
  build();
}

void BendingContext::build() {
  if (!(x_.imag() > 0.0)) throw Error(ErrorKind::InvalidContext, "basepoint must lie in H^2");
  if (base_.rank() != reference_.rank() || base_.rank() == 0) {
    throw Error(ErrorKind::InvalidContext, "base and reference ranks differ or are zero");
  }
  if (!reference_.is_real(1e-9)) {
    throw Error(ErrorKind::InvalidContext, "reference representation must be real");
  }
  const Window near_x{x_, options_.axis_tol};
  theta_ = std::numeric_limits<double>::infinity();
  d_ = 0.0;
  d_prime_ = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < reference_.rank(); ++j) {
    const Unimodular& g = reference_.images[j];
    const Geodesic axis(complex_displacement(g).axis);
    const OrbitTarget target = near_x;
    for (const Word& w : translate_candidates(reference_, axis, options_.cap, TranslateFilter::Window,
                                              &target)) {
      const Geodesic conj_axis = apply(evaluate_word(reference_, w), axis);
      if (distance_to_geodesic(x_, conj_axis) <= options_.axis_tol) {
        throw Error(ErrorKind::InvalidContext,
                    "basepoint lies on the axis of a conjugate of generator " +
                        reference_.presentation.names.at(j) + " (word '" +
                        w.to_string(reference_.presentation.names) + "')");
      }
    }
    segments_.emplace_back(x_, g.apply(x_));
    const GeodesicSegment back(g.inverse().apply(x_), x_);
    const Geodesic forward_carrier(segments_.back().carrier());
    const Geodesic back_carrier(back.carrier());
    double angle = 0.0;
    if (relate(forward_carrier, back_carrier, default_tolerances().geometry) == Relation::Crossing) {
      angle = cross(forward_carrier, back_carrier)->angle;
    }
    theta_ = std::min(theta_, angle);
    d_ = std::max(d_, segments_.back().length());
    d_prime_ = std::min(d_prime_, segments_.back().length());
  }
  if (!(theta_ > 0.0)) throw Error(ErrorKind::InvalidContext, "angle floor theta vanishes");
  if (!(d_prime_ > 0.0)) throw Error(ErrorKind::InvalidContext, "a generator fixes the basepoint");
}

// ---------------------------------------------------------------------------

FiniteLamination lamination_near(const LaminationSource& source, const GeodesicSegment& seg,
                                 double margin) {
  if (const auto* lam = std::get_if<FiniteLamination>(&source)) return *lam;
  const auto& spec = std::get<OrbitSpec>(source);
  if (margin <= 0.0) return orbit_instantiate(spec, seg);
  const Window w{seg.point_at(0.5), 0.5 * seg.length() + margin};
  return orbit_instantiate(spec, w);
}

LaminationSource scaled(const LaminationSource& source, Complex c) {
  if (const auto* lam = std::get_if<FiniteLamination>(&source)) return lam->scaled(c);
  OrbitSpec spec = std::get<OrbitSpec>(source);
  for (Leaf& l : spec.base) l.weight *= c;
  return spec;
}

Unimodular bending_cocycle(const GeodesicTransfer& phi, const FiniteLamination& lam, Complex x,
                           Complex y, Complex t) {
  if (x == y) return Unimodular::identity();
  const GeodesicSegment seg(x, y);
  Unimodular out;
  for (const Crossing& c : crossings(lam, seg)) {
    const Leaf& leaf = lam.leaves()[c.leaf];
    const double half = c.flag == EndpointFlag::None ? 1.0 : 0.5;
    const OrientedGeodesic axis = phi.apply(oriented_leaf(leaf.geodesic, c.side));
    out = out * axis_isometry(axis, t * leaf.weight * half);
  }
  return out;
}

Unimodular bending_cocycle(const BendingContext& ctx, const FiniteLamination& lam, Complex x,
                           Complex y, Complex t) {
  return bending_cocycle(ctx.transfer(), lam, x, y, t);
}

namespace {

Representation bend_instantiated(const BendingContext& ctx, const std::vector<FiniteLamination>& lams,
                                 Complex t) {
  Representation out = ctx.base();
  out.validated = false;
  if (t == Complex(0.0)) return out;
  for (std::size_t j = 0; j < ctx.rank(); ++j) {
    const GeodesicSegment& seg = ctx.segment(j);
    out.images[j] = bending_cocycle(ctx, lams[j], seg.start(), seg.end(), t) * ctx.base().images[j];
  }
  return out;
}

std::vector<FiniteLamination> instantiate_all(const BendingContext& ctx, const LaminationSource& lam) {
  std::vector<FiniteLamination> out;
  for (std::size_t j = 0; j < ctx.rank(); ++j) out.push_back(lamination_near(lam, ctx.segment(j)));
  return out;
}

}  // namespace

Representation bend(const BendingContext& ctx, const LaminationSource& lam, Complex t) {
  if (t == Complex(0.0)) return bend_instantiated(ctx, {}, t);
  return bend_instantiated(ctx, instantiate_all(ctx, lam), t);
}

// ---------------------------------------------------------------------------

double partition_weight(int i, int m, double u) {
  if (m == 2) return 1.0;
  if (i == 1) {
    if (u <= 1.0) return 1.0;
    return std::max(0.0, 2.0 - u);
  }
  if (i == m - 1) {
    if (u >= m - 1) return 1.0;
    return std::max(0.0, u - (m - 2));
  }
  return std::max(0.0, 1.0 - std::abs(u - i));
}

namespace {

// Weight of a crossing at u = m s in the integral' over [x_{k-1}, x_k].
double subsegment_weight(double u, int k) {
  const double eps = 1e-9;
  const double lo = k - 1, hi = k;
  if (u < lo - eps || u > hi + eps) return 0.0;
  if (std::abs(u - lo) <= eps || std::abs(u - hi) <= eps) return 0.5;
  return 1.0;
}

double bump(double distance, double radius) {
  if (distance <= 0.5 * radius) return 1.0;
  if (distance >= radius) return 0.0;
  return 2.0 * (1.0 - distance / radius);
}

H3Point project_onto(const OrientedGeodesic& core, const H3Point& p) {
  const Unimodular m = standardizing_matrix(core);
  const H3Point w = h3_apply(m.inverse(), p);
  const double h = std::sqrt(std::norm(w.horizontal) + w.height * w.height);
  return h3_apply(m, H3Point{Complex(0.0), h});
}

double cylinder_radius(const GeodesicTransfer& phi, const OrientedGeodesic& core, const H3Point& hint,
                       const std::vector<Geodesic>& leaves) {
  auto radius_at = [&](const H3Point& base) {
    double r = 0.0;
    for (const Geodesic& g : leaves) r = std::max(r, required_radius(core, base, g));
    return r;
  };
  if (auto extended = phi.extend(hint)) return radius_at(project_onto(core, *extended));
  // No extension of phi: best basepoint on the core by golden-section search
  // over the height parameter in standard position.
  const Unimodular m = standardizing_matrix(core);
  auto f = [&](double tau) { return radius_at(h3_apply(m, H3Point{Complex(0.0), std::exp(tau)})); };
  double lo = -30.0, hi = 30.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

double chi_window_radius(const BendingContext& ctx, const FiniteLamination& lam, std::size_t generator,
                         int m) {
  const Complex x = ctx.x();
  const Geodesic forward(ctx.segment(generator).carrier());
  const Geodesic back(GeodesicSegment(ctx.generator(generator).inverse().apply(x), x).carrier());
  const double limit = ctx.d_prime() / m;
  auto crosses_near = [&](const Geodesic& leaf, const Geodesic& carrier) {
    if (relate(leaf, carrier, default_tolerances().geometry) != Relation::Crossing) return false;
    return hyp_distance(x, cross(leaf, carrier)->point) < limit;
  };
  double r = limit;
  for (int it = 0; it < 80; ++it) {
    bool ok = true;
    for (const Leaf& l : lam.leaves()) {
      if (distance_to_geodesic(x, l.geodesic) > r) continue;
      if (!crosses_near(l.geodesic, forward) || !crosses_near(l.geodesic, back)) {
        ok = false;
        break;
      }
    }
    if (ok) return r;
    r *= 0.5;
  }
  return r;
}

std::vector<Complex> ApproxBundle::epsilon_components() const {
  std::vector<Complex> out{chi_total};
  for (int i = 1; i <= m - 1; ++i) {
    Complex q = prime_mass[static_cast<std::size_t>(i - 1)];
    if (i == 1) q -= a_chi;
    if (i == m - 1) q -= b_chi;
    out.push_back(q);
  }
  return out;
}

ApproxBundle approx_bundle(const BendingContext& ctx, const LaminationSource& source,
                           std::size_t generator, const ApproxOptions& options) {
  const int m = options.m;
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "partition needs m >= 2");
  const GeodesicSegment& seg = ctx.segment(generator);
  const GeodesicTransfer& phi = ctx.transfer();
  const Complex t = options.t;

  ApproxBundle out;
  out.generator = generator;
  out.m = m;
  out.t = t;
  out.x = ctx.x();
  out.g = ctx.base().images.at(generator);
  out.lamination = lamination_near(source, seg, ctx.d_prime());
  const FiniteLamination& lam = out.lamination;
  for (int i = 0; i <= m; ++i) out.points.push_back(seg.point_at(static_cast<double>(i) / m));

  const CrossingList cr = crossings(lam, seg);
  std::vector<double> u(cr.size());
  for (std::size_t c = 0; c < cr.size(); ++c) u[c] = cr[c].s * m;
  auto weight = [&](std::size_t c) { return lam.leaves()[cr[c].leaf].weight; };
  auto axis_of = [&](std::optional<std::size_t> c) -> std::optional<OrientedGeodesic> {
    if (!c) return std::nullopt;
    return phi.apply(oriented_leaf(lam.leaves()[cr[*c].leaf].geodesic, cr[*c].side));
  };

  // gamma-tilde_k: crossing of [x_{k-1}, x_k] nearest its midpoint, ties toward x.
  std::vector<std::optional<std::size_t>> tilde(static_cast<std::size_t>(m));
  out.tilde_integral.assign(static_cast<std::size_t>(m), Complex(0.0));
  for (int k = 1; k <= m; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cr.size(); ++c) {
      const double sw = subsegment_weight(u[c], k);
      if (sw == 0.0) continue;
      out.tilde_integral[static_cast<std::size_t>(k - 1)] += weight(c) * sw;
      const double dist = std::abs(u[c] - (k - 0.5));
      if (dist < best) {
        best = dist;
        tilde[static_cast<std::size_t>(k - 1)] = c;
      }
    }
  }

  // gamma'_i: crossing of the open (x_{i-1}, x_{i+1}) nearest x_i, ties toward
  // x; the closed interval when the open one has none.
  std::vector<std::optional<std::size_t>> prime(static_cast<std::size_t>(m - 1));
  for (int i = 1; i <= m - 1; ++i) {
    for (const double eps : {1e-9, -1e-9}) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < cr.size(); ++c) {
        if (u[c] <= i - 1 + eps || u[c] >= i + 1 - eps) continue;
        const double dist = std::abs(u[c] - i);
        if (dist < best) {
          best = dist;
          prime[static_cast<std::size_t>(i - 1)] = c;
        }
      }
      if (prime[static_cast<std::size_t>(i - 1)]) break;
    }
  }

  out.a.assign(static_cast<std::size_t>(m - 1), Complex(0.0));
  out.b.assign(static_cast<std::size_t>(m - 1), Complex(0.0));
  for (int i = 1; i <= m - 1; ++i) {
    for (std::size_t c = 0; c < cr.size(); ++c) {
      const double lambda = partition_weight(i, m, u[c]);
      if (lambda == 0.0) continue;
      out.a[static_cast<std::size_t>(i - 1)] += weight(c) * (subsegment_weight(u[c], i) * lambda);
      out.b[static_cast<std::size_t>(i - 1)] += weight(c) * (subsegment_weight(u[c], i + 1) * lambda);
    }
  }
  for (int k = 1; k <= m; ++k) {
    Complex mass = 0.0;
    if (k >= 2) mass += out.b[static_cast<std::size_t>(k - 2)];
    if (k <= m - 1) mass += out.a[static_cast<std::size_t>(k - 1)];
    out.tilde_mass.push_back(mass);
  }
  for (int i = 1; i <= m - 1; ++i) {
    out.prime_mass.push_back(out.a[static_cast<std::size_t>(i - 1)] + out.b[static_cast<std::size_t>(i - 1)]);
  }

  // Window bump chi around x and its translate around g(x).
  out.chi_radius = options.chi_radius ? *options.chi_radius : chi_window_radius(ctx, lam, generator, m);
  const Complex gx = seg.end();
  auto chi = [&](const Geodesic& g) { return bump(distance_to_geodesic(ctx.x(), g), out.chi_radius); };
  auto chi_g = [&](const Geodesic& g) { return bump(distance_to_geodesic(gx, g), out.chi_radius); };
  out.a_chi = out.a_rest = out.b_chi = out.b_rest = Complex(0.0);
  for (std::size_t c = 0; c < cr.size(); ++c) {
    const Geodesic& g = lam.leaves()[cr[c].leaf].geodesic;
    const double first = subsegment_weight(u[c], 1);
    const double last = subsegment_weight(u[c], m);
    if (first > 0.0) {
      const double v = chi(g);
      out.a_chi += weight(c) * (first * v);
      out.a_rest += weight(c) * (first * (1.0 - v));
    }
    if (last > 0.0) {
      const double v = chi_g(g);
      out.b_chi += weight(c) * (last * v);
      out.b_rest += weight(c) * (last * (1.0 - v));
    }
  }
  out.chi_total = Complex(0.0);
  for (const Leaf& l : lam.leaves()) out.chi_total += l.weight * chi(l.geodesic);

  // Matrices.
  out.tilde_leaf.clear();
  for (int k = 1; k <= m; ++k) {
    const auto c = tilde[static_cast<std::size_t>(k - 1)];
    out.tilde_leaf.push_back(c ? std::optional<std::size_t>(cr[*c].leaf) : std::nullopt);
    out.C.push_back(axis_or_identity(axis_of(c), t * out.tilde_mass[static_cast<std::size_t>(k - 1)]));
  }
  for (int i = 1; i <= m - 1; ++i) {
    const auto c = prime[static_cast<std::size_t>(i - 1)];
    out.prime_leaf.push_back(c ? std::optional<std::size_t>(cr[*c].leaf) : std::nullopt);
    const auto axis = axis_of(c);
    const std::size_t idx = static_cast<std::size_t>(i - 1);
    out.D.push_back(axis_or_identity(axis, t * out.prime_mass[idx]));
    out.D_left.push_back(axis_or_identity(axis, t * out.a[idx]));
    out.D_right.push_back(axis_or_identity(axis, t * out.b[idx]));
  }
  const auto first_axis = axis_of(prime.front());
  const auto last_axis = axis_of(prime.back());
  out.P = axis_or_identity(first_axis, t * out.a_chi);
  out.Q = axis_or_identity(first_axis, t * out.a_rest);
  out.R = axis_or_identity(last_axis, t * out.b_rest);
  out.S = axis_or_identity(last_axis, t * out.b_chi);
  out.B = Unimodular::identity();
  for (const auto& d : out.D) out.B = out.B * d;
  out.E = Unimodular::identity();
  for (const auto& c : out.C) out.E = out.E * c;
  out.product_difference = projective_distance(out.E, out.B);

  // r(m): cylinder around each gamma-tilde_k holding the transferred leaves
  // that share mass with subsegment k.
  out.r = 0.0;
  for (int k = 1; k <= m; ++k) {
    const auto core_c = tilde[static_cast<std::size_t>(k - 1)];
    if (!core_c) continue;
    std::vector<Geodesic> members;
    auto add = [&](std::size_t c) { members.push_back(transfer(phi, lam.leaves()[cr[c].leaf].geodesic)); };
    for (std::size_t c = 0; c < cr.size(); ++c) {
      if (subsegment_weight(u[c], k) > 0.0) add(c);
    }
    if (k >= 2 && prime[static_cast<std::size_t>(k - 2)]) add(*prime[static_cast<std::size_t>(k - 2)]);
    if (k <= m - 1 && prime[static_cast<std::size_t>(k - 1)]) add(*prime[static_cast<std::size_t>(k - 1)]);
    const OrientedGeodesic core = *axis_of(core_c);
    const H3Point hint = H3Point::from_h2(seg.point_at((k - 0.5) / m));
    out.r = std::max(out.r, cylinder_radius(phi, core, hint, members));
  }
  return out;
}

ConjugatedDistance conjugated_distance(const std::vector<ApproxBundle>& bundles_n,
                                       const std::vector<ApproxBundle>& bundles_0) {
  if (bundles_n.size() != bundles_0.size() || bundles_n.empty()) {
    throw Error(ErrorKind::MismatchedContexts, "bundle lists differ in length");
  }
  for (std::size_t j = 0; j < bundles_n.size(); ++j) {
    const ApproxBundle& bn = bundles_n[j];
    const ApproxBundle& b0 = bundles_0[j];
    if (bn.m != b0.m || bn.generator != b0.generator || bn.x != b0.x || bn.t != b0.t ||
        projective_distance(bn.g, b0.g) > 0.0) {
      throw Error(ErrorKind::MismatchedContexts, "bundles built over different contexts");
    }
  }
  ConjugatedDistance out;
  out.H = bundles_0[0].P * bundles_n[0].P.inverse();
  const Unimodular h_inv = out.H.inverse();
  for (std::size_t j = 0; j < bundles_n.size(); ++j) {
    const Unimodular lhs = out.H * bundles_n[j].E * bundles_n[j].g * h_inv;
    const Unimodular rhs = bundles_0[j].E * bundles_0[j].g;
    out.dist = std::max(out.dist, projective_distance(lhs, rhs));
  }
  return out;
}

double rep_class_distance(const Representation& rho1, const Representation& rho2,
                          const std::vector<Word>& words) {
  if (rho1.rank() != rho2.rank()) throw Error(ErrorKind::InvalidArgument, "ranks differ");
  double out = 0.0;
  for (const Word& w : words) {
    out = std::max(out, std::abs(evaluate_word(rho1, w).trace() - evaluate_word(rho2, w).trace()));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Complex> traces(const Representation& rho, const std::vector<Word>& words) {
  std::vector<Complex> out;
  for (const Word& w : words) out.push_back(evaluate_word(rho, w).trace());
  return out;
}

std::vector<Complex> central(const BendingContext& ctx, const std::vector<FiniteLamination>& lams,
                             const std::vector<Word>& words, Complex step) {
  const auto plus = traces(bend_instantiated(ctx, lams, step), words);
  const auto minus = traces(bend_instantiated(ctx, lams, -step), words);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < words.size(); ++i) out.push_back((plus[i] - minus[i]) / (2.0 * step));
  return out;
}

}  // namespace

std::vector<Complex> central_difference(const BendingContext& ctx, const LaminationSource& lam,
                                        const std::vector<Word>& words, double h) {
  return central(ctx, instantiate_all(ctx, lam), words, h);
}

std::vector<Complex> bending_vector_field(const BendingContext& ctx, const LaminationSource& lam,
                                          const std::vector<Word>& words,
                                          const DerivativeOptions& options) {
  const auto lams = instantiate_all(ctx, lam);
  const auto coarse = central(ctx, lams, words, options.h);
  const auto fine = central(ctx, lams, words, 0.5 * options.h);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Complex richardson = (4.0 * fine[i] - coarse[i]) / 3.0;
    if (std::abs(richardson - fine[i]) > options.tol * std::max(1.0, std::abs(richardson))) {
      throw Error(ErrorKind::NonConvergentDifference,
                  "Richardson estimate disagrees for word " +
                      words[i].to_string(ctx.base().presentation.names));
    }
    out.push_back(richardson);
  }
  return out;
}

double holomorphy_residual(const BendingContext& ctx, const LaminationSource& lam,
                           const std::vector<Word>& words, Complex t0, double h) {
  const auto lams = instantiate_all(ctx, lam);
  auto at = [&](Complex t) { return traces(bend_instantiated(ctx, lams, t), words); };
  const auto xp = at(t0 + h), xm = at(t0 - h);
  const auto yp = at(t0 + Complex(0.0, h)), ym = at(t0 - Complex(0.0, h));
  double worst = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Complex fx = (xp[i] - xm[i]) / (2.0 * h);
    const Complex fy = (yp[i] - ym[i]) / (2.0 * h);
    // Relative to the derivative, but never below 1: traces of curves that
    // miss the lamination are constant and both differences are rounding.
    const double num = std::abs(fx + Complex(0.0, 1.0) * fy);
    worst = std::max(worst, num / std::max(1.0, std::abs(fx)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

LinearFit fit_two_terms(const std::vector<double>& u, const std::vector<double>& v,
                        const std::vector<double>& y) {
  double uu = 0, uv = 0, vv = 0, uy = 0, vy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    uu += u[i] * u[i];
    uv += u[i] * v[i];
    vv += v[i] * v[i];
    uy += u[i] * y[i];
    vy += v[i] * y[i];
  }
  LinearFit fit;
  const double det = uu * vv - uv * uv;
  if (det > 0.0) {
    fit.n1 = (uy * vv - vy * uv) / det;
    fit.n2 = (vy * uu - uy * uv) / det;
  }
  if (det <= 0.0 || fit.n1 < 0.0 || fit.n2 < 0.0) {
    // Best single-term fits; keep the better one.
    const double only_u = uu > 0 ? std::max(0.0, uy / uu) : 0.0;
    const double only_v = vv > 0 ? std::max(0.0, vy / vv) : 0.0;
    auto sse = [&](double a, double b) {
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += std::pow(y[i] - a * u[i] - b * v[i], 2);
      return s;
    };
    if (sse(only_u, 0.0) <= sse(0.0, only_v)) {
      fit.n1 = only_u;
      fit.n2 = 0.0;
    } else {
      fit.n1 = 0.0;
      fit.n2 = only_v;
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.n1 * u[i] - fit.n2 * v[i]));
    fit.max_value = std::max(fit.max_value, std::abs(y[i]));
  }
  return fit;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

SweepResult sweep(const BendingContext& ctx, const std::function<LaminationSource(int)>& family,
                  const SweepOptions& options) {
  const std::size_t k = ctx.rank();
  // Instantiate every lamination once per generator.
  std::vector<std::vector<FiniteLamination>> lams;  // [n index][generator]
  for (int n : options.ns) {
    const LaminationSource source = family(n);
    std::vector<FiniteLamination> per;
    for (std::size_t j = 0; j < k; ++j) per.push_back(lamination_near(source, ctx.segment(j), ctx.d_prime()));
    lams.push_back(std::move(per));
  }
  const std::vector<FiniteLamination> base = [&] {
    const LaminationSource source = family(0);
    std::vector<FiniteLamination> per;
    for (std::size_t j = 0; j < k; ++j) per.push_back(lamination_near(source, ctx.segment(j), ctx.d_prime()));
    return per;
  }();

  SweepResult result;
  for (int m : options.ms) {
    // One chi per (m, generator), shared by every lamination of the family.
    std::vector<double> chi(k);
    for (std::size_t j = 0; j < k; ++j) {
      chi[j] = chi_window_radius(ctx, base[j], j, m);
      for (const auto& per : lams) chi[j] = std::min(chi[j], chi_window_radius(ctx, per[j], j, m));
    }
    auto bundles_for = [&](const std::vector<FiniteLamination>& per) {
      std::vector<ApproxBundle> out;
      for (std::size_t j = 0; j < k; ++j) {
        ApproxOptions opt;
        opt.m = m;
        opt.t = options.t;
        opt.chi_radius = chi[j];
        out.push_back(approx_bundle(ctx, per[j], j, opt));
      }
      return out;
    };
    const auto b0 = bundles_for(base);
    std::vector<std::vector<ApproxBundle>> bn;
    for (const auto& per : lams) bn.push_back(bundles_for(per));

    double r_m = 0.0, diff0 = 0.0;
    for (const auto& b : b0) {
      r_m = std::max(r_m, b.r);
      diff0 = std::max(diff0, b.product_difference);
    }
    for (const auto& row : bn) {
      for (const auto& b : row) r_m = std::max(r_m, b.r);
    }
    result.r_of_m.push_back(r_m);
    result.product_difference_of_m.push_back(diff0);

    std::optional<int> diag;
    for (std::size_t ni = 0; ni < options.ns.size(); ++ni) {
      const int n = options.ns[ni];
      SweepCell cell;
      cell.m = m;
      cell.n = n;
      cell.r = r_m;
      cell.dist = n == 0 ? conjugated_distance(b0, b0).dist : conjugated_distance(bn[ni], b0).dist;
      for (const auto& b : bn[ni]) cell.product_difference = std::max(cell.product_difference, b.product_difference);
      if (n != 0) {
        for (std::size_t j = 0; j < k; ++j) {
          const auto ref = b0[j].epsilon_components();
          std::vector<double> sup(ref.size(), 0.0);
          for (std::size_t si = 0; si < options.ns.size(); ++si) {
            if (options.ns[si] < n || options.ns[si] == 0) continue;
            const auto comp = bn[si][j].epsilon_components();
            for (std::size_t i = 0; i < ref.size(); ++i) sup[i] = std::max(sup[i], std::abs(comp[i] - ref[i]));
          }
          double total = 0.0;
          for (double v : sup) total += v;
          if (total >= cell.epsilon) {
            cell.epsilon = total;
            cell.epsilon0 = sup[0];
            cell.epsilon1 = sup.size() > 1 ? sup[1] : 0.0;
          }
        }
      }
      if (!diag && n >= m && n != 0 && cell.epsilon <= 1.0 / m) diag = n;
      result.cells.push_back(cell);
    }
    result.diagonal.push_back(diag);
  }
  // Nonincreasing envelope of the measured radii.
  for (std::size_t i = result.r_of_m.size(); i-- > 1;) {
    result.r_of_m[i - 1] = std::max(result.r_of_m[i - 1], result.r_of_m[i]);
  }
  for (auto& c : result.cells) {
    const auto it = std::find(options.ms.begin(), options.ms.end(), c.m);
    c.r = result.r_of_m[static_cast<std::size_t>(it - options.ms.begin())];
  }
  std::vector<double> u, v, y;
  for (const auto& c : result.cells) {
    u.push_back(c.r);
    v.push_back(c.epsilon);
    y.push_back(c.dist);
  }
  result.fit = fit_two_terms(u, v, y);
  return result;
}

}  // namespace bendlab
