#include "bendlab/laminations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bendlab/kernels.hpp"

namespace bendlab {

FiniteLamination::FiniteLamination(std::vector<Leaf> leaves, std::optional<Window> window, double tol)
    : window_(window) {
  for (Leaf& leaf : leaves) {
    auto same = std::find_if(leaves_.begin(), leaves_.end(), [&](const Leaf& l) {
      return l.geodesic.approx_equal(leaf.geodesic, tol);
    });
    if (same != leaves_.end()) {
      same->weight += leaf.weight;
    } else {
      leaves_.push_back(leaf);
    }
  }
  std::erase_if(leaves_, [](const Leaf& l) { return l.weight == Complex(0.0); });
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (relate(leaves_[i].geodesic, leaves_[j].geodesic, tol) == Relation::Crossing) {
        throw Error(ErrorKind::InvalidArgument, "lamination leaves cross");
      }
    }
    if (window_ && !window_->meets(leaves_[i].geodesic)) {
      throw Error(ErrorKind::InvalidArgument, "leaf misses the lamination window");
    }
  }
}

FiniteLamination FiniteLamination::scaled(Complex c) const {
  std::vector<Leaf> out = leaves_;
  for (Leaf& l : out) l.weight *= c;
  return FiniteLamination(std::move(out), window_);
}

FiniteLamination FiniteLamination::operator+(const FiniteLamination& o) const {
  std::vector<Leaf> all = leaves_;
  all.insert(all.end(), o.leaves_.begin(), o.leaves_.end());
  return FiniteLamination(std::move(all), window_ ? window_ : o.window_);
}

CrossingList crossings(const FiniteLamination& lam, const GeodesicSegment& seg) {
  CrossingList out;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (auto c = segment_crossing(lam.leaves()[i].geodesic, seg)) {
      out.push_back({i, c->s, c->flag, c->side, c->angle, c->point});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.s < b.s; });
  return out;
}

// ---------------------------------------------------------------------------

double piecewise_linear(const std::vector<TestFunction::Knot>& knots, double x) {
  if (knots.empty()) return 1.0;
  if (x <= knots.front().x) return knots.front().value;
  if (x >= knots.back().x) return knots.back().value;
  auto hi = std::upper_bound(knots.begin(), knots.end(), x,
                             [](double v, const TestFunction::Knot& k) { return v < k.x; });
  auto lo = hi - 1;
  const double w = (x - lo->x) / (hi->x - lo->x);
  return (1.0 - w) * lo->value + w * hi->value;
}

TestFunction TestFunction::constant(double value) {
  TestFunction f;
  f.constant_ = true;
  f.constant_value_ = value;
  return f;
}

TestFunction TestFunction::profile(std::vector<Knot> s_knots, std::vector<Knot> angle_knots) {
  for (const auto* knots : {&s_knots, &angle_knots}) {
    for (std::size_t i = 0; i < knots->size(); ++i) {
      const Knot& k = (*knots)[i];
      if (k.value < 0.0 || k.value > 1.0) {
        throw Error(ErrorKind::InvalidArgument, "test function values must lie in [0, 1]");
      }
      if (i > 0 && !(k.x > (*knots)[i - 1].x)) {
        throw Error(ErrorKind::InvalidArgument, "test function knots must increase");
      }
    }
  }
  TestFunction f;
  f.s_knots_ = std::move(s_knots);
  f.angle_knots_ = std::move(angle_knots);
  return f;
}

TestFunction TestFunction::trapezoid(double ramp) {
  return profile({{0.0, 0.0}, {ramp, 1.0}, {1.0 - ramp, 1.0}, {1.0, 0.0}});
}

TestFunction TestFunction::with_segment(const GeodesicSegment& seg) const {
  TestFunction f = *this;
  f.segment_ = seg;
  return f;
}

double TestFunction::operator()(double s, double angle) const {
  if (constant_) return constant_value_;
  double v = piecewise_linear(s_knots_, s);
  if (!angle_knots_.empty()) v *= piecewise_linear(angle_knots_, angle);
  return v;
}

Complex integral_prime(const FiniteLamination& lam, const GeodesicSegment& seg, const TestFunction* f) {
  Complex sum{0.0, 0.0};
  for (const Crossing& c : crossings(lam, seg)) {
    const double value = f ? (*f)(c.s, c.angle) : 1.0;
    const double half = c.flag == EndpointFlag::None ? 1.0 : 0.5;
    sum += lam.leaves()[c.leaf].weight * (value * half);
  }
  return sum;
}

double lamination_norm(const FiniteLamination& lam) {
  double total = 0.0;
  for (const Leaf& l : lam.leaves()) total += std::abs(l.weight);
  return total;
}

Complex weak_eval(const FiniteLamination& lam, const TestFunction& f) {
  Complex sum{0.0, 0.0};
  if (f.is_constant()) {
    const double v = f(0.0, 0.0);
    for (const Leaf& l : lam.leaves()) sum += l.weight * v;
    return sum;
  }
  if (!f.segment()) throw Error(ErrorKind::InvalidArgument, "test function has no reference segment");
  for (const Crossing& c : crossings(lam, *f.segment())) {
    sum += lam.leaves()[c.leaf].weight * f(c.s, c.angle);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Orbit enumeration.
//
// A word of length > K is split as u v with |u| = K.  The matrices F rho(u)
// for all u of length K are precomputed once as a batch grouped by the last
// letter of u; a depth-first walk over v applies the batch to the endpoints
// rho(v) e, skipping the group whose last letter cancels the first letter of v.

namespace {

struct Real2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  Real2 operator*(const Real2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  std::array<double, 2> apply(const std::array<double, 2>& v) const {
    std::array<double, 2> out{a * v[0] + b * v[1], c * v[0] + d * v[1]};
    const double scale = std::abs(out[0]) + std::abs(out[1]);
    out[0] /= scale;
    out[1] /= scale;
    return out;
  }
};

Real2 to_real(const Unimodular& m) {
  return {m.a().real(), m.b().real(), m.c().real(), m.d().real()};
}

std::array<double, 2> real_homogeneous(const BoundaryPoint& p) {
  const auto h = p.homogeneous();
  return {h[0].real(), h[1].real()};
}

class CandidateFilter {
 public:
  CandidateFilter(TranslateFilter kind, const Geodesic& g, const OrbitTarget* target,
                  const Geodesic* against)
      : kind_(kind) {
    switch (kind) {
      case TranslateFilter::Segment: {
        const auto& seg = std::get<GeodesicSegment>(*target);
        frame_ = to_real(seg.frame().inverse());
        // Loose bounds; the exact crossing test runs on the survivors.
        const double slack = 1e-6;
        lo_ = std::exp(-2.0 * slack);
        hi_ = std::exp(2.0 * (seg.length() + slack));
        break;
      }
      case TranslateFilter::Window: {
        const auto& w = std::get<Window>(*target);
        const double sy = std::sqrt(w.center.imag());
        frame_ = {1.0 / sy, -w.center.real() / sy, 0.0, sy};
        threshold_ = std::sinh(w.radius) * (1.0 + 1e-6) + 1e-9;
        break;
      }
      case TranslateFilter::Interleave: {
        const Geodesic& fixed = against ? *against : g;
        fixed1_ = real_homogeneous(fixed.first());
        fixed2_ = real_homogeneous(fixed.second());
        break;
      }
    }
  }

  const Real2& frame() const { return frame_; }

  void run(const double* p1, const double* q1, const double* p2, const double* q2, std::size_t n,
           std::vector<std::uint8_t>& hit) {
    hit.resize(n);
    switch (kind_) {
      case TranslateFilter::Segment:
        kernels::segment_hit_batch(p1, q1, p2, q2, n, lo_, hi_, hit.data());
        return;
      case TranslateFilter::Window:
        scratch_.resize(n);
        kernels::sinh_distance_at_i_batch(p1, q1, p2, q2, n, scratch_.data());
        for (std::size_t i = 0; i < n; ++i) hit[i] = scratch_[i] <= threshold_ ? 1 : 0;
        return;
      case TranslateFilter::Interleave:
        scratch_.resize(n);
        kernels::interleave_batch(p1, q1, p2, q2, n, fixed1_[0], fixed1_[1], fixed2_[0], fixed2_[1],
                                  scratch_.data());
        for (std::size_t i = 0; i < n; ++i) hit[i] = scratch_[i] < 0.0 ? 1 : 0;
        return;
    }
  }

 private:
  TranslateFilter kind_;
  Real2 frame_;
  double lo_ = 0.0, hi_ = 0.0, threshold_ = 0.0;
  std::array<double, 2> fixed1_{}, fixed2_{};
  std::vector<double> scratch_;
};

struct Batch {
  kernels::MatrixBatch matrices;
  std::vector<std::size_t> words;  // indices into the prefix word list
  std::vector<double> p1, q1, p2, q2;

  void evaluate(const std::array<double, 2>& e1, const std::array<double, 2>& e2) {
    const std::size_t n = matrices.size();
    p1.resize(n);
    q1.resize(n);
    p2.resize(n);
    q2.resize(n);
    kernels::mobius_apply_batch(matrices, e1[0], e1[1], p1.data(), q1.data());
    kernels::mobius_apply_batch(matrices, e2[0], e2[1], p2.data(), q2.data());
  }
};

}  // namespace

std::vector<Word> translate_candidates(const Representation& rho, const Geodesic& g, int cap,
                                       TranslateFilter filter, const OrbitTarget* target,
                                       const Geodesic* against) {
  if (cap > kDefaultWordCap) {
    throw Error(ErrorKind::CapExceeded, "word cap " + std::to_string(cap) + " exceeds " +
                                            std::to_string(kDefaultWordCap));
  }
  if (cap < 0) throw Error(ErrorKind::InvalidArgument, "negative word cap");
  if (!rho.is_real(1e-9)) throw Error(ErrorKind::InvalidArgument, "orbit enumeration needs a real group");
  if (filter != TranslateFilter::Interleave && target == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "missing orbit target");
  }
  const int rank = static_cast<int>(rho.rank());
  CandidateFilter test(filter, g, target, against);
  const std::array<double, 2> e1 = real_homogeneous(g.first());
  const std::array<double, 2> e2 = real_homogeneous(g.second());

  std::vector<Real2> letters;
  for (int code = 0; code < 2 * rank; ++code) {
    const Unimodular& m = rho.image(code / 2);
    letters.push_back(to_real(code % 2 == 0 ? m : m.inverse()));
  }

  const int k = std::min(cap, 4);
  const std::vector<Word> prefixes = word_ball(rank, k, kDefaultWordCap);
  std::vector<Real2> prefix_matrix(prefixes.size());
  Batch short_batch;
  std::vector<Batch> by_last(static_cast<std::size_t>(2 * rank));
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    Real2 m = test.frame();
    for (const Letter& l : prefixes[i].letters()) m = m * letters[static_cast<std::size_t>(l.code())];
    prefix_matrix[i] = m;
    short_batch.matrices.push_back(m.a, m.b, m.c, m.d);
    short_batch.words.push_back(i);
    if (static_cast<int>(prefixes[i].size()) == k && k > 0) {
      Batch& b = by_last[static_cast<std::size_t>(prefixes[i].letters().back().code())];
      b.matrices.push_back(m.a, m.b, m.c, m.d);
      b.words.push_back(i);
    }
  }

  std::vector<Word> out;
  std::vector<std::uint8_t> hit;
  short_batch.evaluate(e1, e2);
  test.run(short_batch.p1.data(), short_batch.q1.data(), short_batch.p2.data(), short_batch.q2.data(),
           short_batch.matrices.size(), hit);
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(prefixes[short_batch.words[i]]);
  }

  const int inner_max = cap - k;
  if (inner_max <= 0) return out;

  std::vector<Letter> v;
  auto visit = [&](auto&& self, const Real2& mv) -> void {
    const std::array<double, 2> f1 = mv.apply(e1);
    const std::array<double, 2> f2 = mv.apply(e2);
    const int banned = v.front().inverse().code();
    for (int code = 0; code < 2 * rank; ++code) {
      if (code == banned) continue;
      Batch& b = by_last[static_cast<std::size_t>(code)];
      b.evaluate(f1, f2);
      test.run(b.p1.data(), b.q1.data(), b.p2.data(), b.q2.data(), b.matrices.size(), hit);
      for (std::size_t i = 0; i < hit.size(); ++i) {
        if (!hit[i]) continue;
        std::vector<Letter> w = prefixes[b.words[i]].letters();
        w.insert(w.end(), v.begin(), v.end());
        out.emplace_back(std::move(w));
      }
    }
    if (static_cast<int>(v.size()) == inner_max) return;
    for (int code = 0; code < 2 * rank; ++code) {
      const Letter next{code / 2, code % 2 == 0 ? 1 : -1};
      if (v.back() == next.inverse()) continue;
      v.push_back(next);
      self(self, mv * letters[static_cast<std::size_t>(code)]);
      v.pop_back();
    }
  };
  for (int code = 0; code < 2 * rank; ++code) {
    v.assign(1, Letter{code / 2, code % 2 == 0 ? 1 : -1});
    visit(visit, letters[static_cast<std::size_t>(code)]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Translate> orbit_translates(const OrbitSpec& spec, const OrbitTarget& target) {
  const bool on_segment = std::holds_alternative<GeodesicSegment>(target);
  std::vector<Translate> all;
  std::vector<double> slack;  // endpoint error grows like eps |M|^2 for long words
  for (std::size_t b = 0; b < spec.base.size(); ++b) {
    const Geodesic& base = spec.base[b].geodesic;
    const auto words = translate_candidates(
        spec.group, base, spec.cap, on_segment ? TranslateFilter::Segment : TranslateFilter::Window, &target);
    for (const Word& w : words) {
      const Unimodular m = evaluate_word(spec.group, w);
      const Geodesic leaf = apply(m, base);
      const bool keep = on_segment ? segment_crossing(leaf, std::get<GeodesicSegment>(target)).has_value()
                                   : std::get<Window>(target).meets(leaf);
      if (keep) {
        all.push_back({w, b, leaf});
        const double n = matrix_norm(m);
        slack.push_back(64.0 * std::numeric_limits<double>::epsilon() * n * n);
      }
    }
  }
  std::vector<std::size_t> order(all.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (all[i].word == all[j].word) return all[i].base_index < all[j].base_index;
    return all[i].word < all[j].word;
  });
  std::vector<Translate> out;
  std::vector<double> out_slack;
  const double tol = default_tolerances().geometry;
  for (std::size_t k : order) {
    bool dup = false;
    for (std::size_t o = 0; o < out.size() && !dup; ++o) {
      dup = out[o].leaf.approx_equal(all[k].leaf, std::max({tol, slack[k], out_slack[o]}));
    }
    if (!dup) {
      out.push_back(std::move(all[k]));
      out_slack.push_back(slack[k]);
    }
  }
  return out;
}

FiniteLamination orbit_instantiate(const OrbitSpec& spec, const OrbitTarget& target) {
  std::vector<Leaf> leaves;
  for (const Translate& t : orbit_translates(spec, target)) {
    leaves.push_back({t.leaf, spec.base[t.base_index].weight});
  }
  std::optional<Window> window;
  if (const auto* w = std::get_if<Window>(&target)) window = *w;
  return FiniteLamination(std::move(leaves), window);
}

bool g_prime_member(const Geodesic& g, const Representation& rho, int cap) {
  for (const Word& w : translate_candidates(rho, g, cap, TranslateFilter::Interleave)) {
    if (w.empty()) continue;
    const Geodesic image = apply(evaluate_word(rho, w), g);
    if (relate(g, image, default_tolerances().geometry) == Relation::Crossing) return false;
  }
  return true;
}

Word disjoint_simple_curve(const Representation& rho, const Word& avoid_word, int max_length, int cap) {
  const double tol = default_tolerances().geometry;
  const Displacement avoid_disp = complex_displacement(evaluate_word(rho, avoid_word));
  const Geodesic avoid(avoid_disp.axis);
  const double avoid_length = avoid_disp.z.real();
  for (const Word& w : word_ball(static_cast<int>(rho.rank()), max_length, kDefaultWordCap)) {
    if (w.empty()) continue;
    const auto& l = w.letters();
    if (l.front() == l.back().inverse()) continue;  // not cyclically reduced
    const Unimodular m = evaluate_word(rho, w);
    std::optional<Displacement> disp;
    try {
      disp = complex_displacement(m);
    } catch (const Error&) {
      continue;
    }
    const double ratio = disp->z.real() / avoid_length;
    if (std::abs(ratio - std::round(ratio)) < 1e-9) continue;
    const Geodesic axis(disp->axis);
    if (relate(axis, avoid, tol) != Relation::Disjoint) continue;
    if (!g_prime_member(axis, rho, cap)) continue;
    bool clean = true;
    for (const Word& u : translate_candidates(rho, avoid, cap, TranslateFilter::Interleave, nullptr, &axis)) {
      const Geodesic image = apply(evaluate_word(rho, u), avoid);
      const Relation rel = relate(image, axis, tol);
      if (rel == Relation::Crossing || rel == Relation::Equal) {
        clean = false;
        break;
      }
    }
    if (clean) return w;
  }
  throw Error(ErrorKind::NoDisjointCurveFound,
              "no simple closed curve of length <= " + std::to_string(max_length) +
                  " misses the orbit up to cap " + std::to_string(cap));
}

std::optional<double> min_crossing_angle(const FiniteLamination& lam, const GeodesicSegment& seg) {
  std::optional<double> best;
  for (const Crossing& c : crossings(lam, seg)) {
    if (!best || c.angle < *best) best = c.angle;
  }
  return best;
}

bool ml_pp_valid(const FiniteLamination& nu1, const FiniteLamination& nu2) {
  std::vector<const Geodesic*> all;
  for (const auto* lam : {&nu1, &nu2}) {
    for (const Leaf& l : lam->leaves()) all.push_back(&l.geodesic);
  }
  const double tol = default_tolerances().geometry;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (relate(*all[i], *all[j], tol) == Relation::Crossing) return false;
    }
  }
  return true;
}

}  // namespace bendlab
