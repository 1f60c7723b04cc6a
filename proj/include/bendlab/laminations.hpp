#pragma once

// Finite measured laminations: weighted leaves, crossings with segments,
// transverse integrals, test functions and group-orbit instantiation.

#include <optional>
#include <variant>
#include <vector>

#include "bendlab/fuchsian.hpp"
#include "bendlab/hypcore.hpp"

namespace bendlab {

struct Leaf {
  Geodesic geodesic;
  Complex weight{1.0, 0.0};
};

// Compact window K: a closed hyperbolic disc in H^2.
struct Window {
  Complex center{0.0, 1.0};
  double radius = 1.0;

  bool meets(const Geodesic& g) const { return distance_to_geodesic(center, g) <= radius; }
};

class FiniteLamination {
 public:
  FiniteLamination() = default;
  // Drops zero weights, merges equal geodesics by adding weights, and checks
  // that distinct leaves do not cross (InvalidArgument otherwise).  With a
  // window, every leaf must meet it.
  explicit FiniteLamination(std::vector<Leaf> leaves, std::optional<Window> window = std::nullopt,
                            double tol = default_tolerances().geometry);

  const std::vector<Leaf>& leaves() const { return leaves_; }
  const std::optional<Window>& window() const { return window_; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }

  FiniteLamination scaled(Complex c) const;
  // Union of supports with weights added on common leaves.
  FiniteLamination operator+(const FiniteLamination& o) const;

 private:
  std::vector<Leaf> leaves_;
  std::optional<Window> window_;
};

struct Crossing {
  std::size_t leaf = 0;
  double s = 0.0;
  EndpointFlag flag = EndpointFlag::None;
  Side side = Side::Left;
  double angle = 0.0;
  Complex point;
};

using CrossingList = std::vector<Crossing>;

// Leaves meeting the closed segment, ordered from start to end.
CrossingList crossings(const FiniteLamination& lam, const GeodesicSegment& seg);

// Piecewise-linear profile in the crossing parameter s of a reference segment,
// optionally multiplied by a piecewise-linear profile in the crossing angle.
// The constant kind is 1 on every leaf, crossing or not.
class TestFunction {
 public:
  struct Knot {
    double x;
    double value;
  };

  static TestFunction constant(double value = 1.0);
  // Knots sorted by x; values in [0, 1]; constant extrapolation.
  static TestFunction profile(std::vector<Knot> s_knots, std::vector<Knot> angle_knots = {});
  // Trapezoid 0 at s = 0 and 1, rising linearly to 1 over the given ramp.
  static TestFunction trapezoid(double ramp);

  TestFunction with_segment(const GeodesicSegment& seg) const;

  bool is_constant() const { return constant_; }
  const std::optional<GeodesicSegment>& segment() const { return segment_; }
  double operator()(double s, double angle) const;

 private:
  bool constant_ = false;
  double constant_value_ = 1.0;
  std::vector<Knot> s_knots_;
  std::vector<Knot> angle_knots_;
  std::optional<GeodesicSegment> segment_;
};

double piecewise_linear(const std::vector<TestFunction::Knot>& knots, double x);

// Sum of w_i f(s_i) over crossings, endpoint crossings at half weight.
Complex integral_prime(const FiniteLamination& lam, const GeodesicSegment& seg,
                       const TestFunction* f = nullptr);
// Total variation of the atomic measure.
double lamination_norm(const FiniteLamination& lam);
// Integral of f against the lamination; f must carry its reference segment
// unless it is constant.  Leaves missing the segment contribute 0.
Complex weak_eval(const FiniteLamination& lam, const TestFunction& f);

struct OrbitSpec {
  std::vector<Leaf> base;
  Representation group;  // real
  int cap = 6;
};

using OrbitTarget = std::variant<GeodesicSegment, Window>;

// Distinct translates w(base) with |w| <= cap meeting the target, ordered by
// the first word (length, lex) producing them.  Coincident translates are kept
// once with the base weight.
FiniteLamination orbit_instantiate(const OrbitSpec& spec, const OrbitTarget& target);

// Translates as a list of (word, leaf) before weights are attached.
struct Translate {
  Word word;
  std::size_t base_index = 0;
  Geodesic leaf;
};
std::vector<Translate> orbit_translates(const OrbitSpec& spec, const OrbitTarget& target);

// Words w with |w| <= cap whose translate w(g) passes the batched filter.
// Candidates for exact checks: the filter is conservative up to rounding.
// Interleave tests against `against`, or g itself when null.
enum class TranslateFilter { Segment, Window, Interleave };
std::vector<Word> translate_candidates(const Representation& rho, const Geodesic& g, int cap,
                                       TranslateFilter filter, const OrbitTarget* target = nullptr,
                                       const Geodesic* against = nullptr);

// Every translate by a nontrivial word of length <= cap is disjoint from g or
// equal to it.
bool g_prime_member(const Geodesic& g, const Representation& rho, int cap);

// First cyclically reduced word (by length, then lex, length <= max_length)
// whose axis is simple up to the cap and crosses no translate of axis(avoid)
// up to the cap.  Words whose translation length is a multiple of that of
// avoid are skipped, which rules out conjugates of its powers.  Throws
// NoDisjointCurveFound.
Word disjoint_simple_curve(const Representation& rho, const Word& avoid, int max_length, int cap);

std::optional<double> min_crossing_angle(const FiniteLamination& lam, const GeodesicSegment& seg);

// Union of both supports is a lamination (pairwise disjoint or equal).
bool ml_pp_valid(const FiniteLamination& nu1, const FiniteLamination& nu2);

}  // namespace bendlab
