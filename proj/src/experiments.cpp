#include "bendlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace bendlab {

using io::Column;
using io::ColumnKind;
using io::json;

bool CommandResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

namespace {

constexpr Complex kI{0.0, 1.0};

json assertions_json(const std::vector<Assertion>& list) {
  json out = json::array();
  for (const auto& a : list) out.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  return out;
}

std::string fmt(double v) { return io::format_real(v); }

template <typename T>
std::vector<T> get_list(const json& config, const char* key, std::vector<T> fallback) {
  if (!config.contains(key)) return fallback;
  auto out = config.at(key).get<std::vector<T>>();
  if (out.empty()) throw Error(ErrorKind::Config, std::string(key) + " must be nonempty");
  return out;
}

std::vector<Complex> complex_list(const json& config, const char* key, std::vector<Complex> fallback) {
  if (!config.contains(key)) return fallback;
  std::vector<Complex> out;
  for (const auto& v : config.at(key)) out.push_back(io::parse_complex(v));
  if (out.empty()) throw Error(ErrorKind::Config, std::string(key) + " must be nonempty");
  return out;
}

Representation config_representation(const json& config) {
  return io::parse_representation(config.value("representation", json("genus2_octagon")));
}

Complex config_basepoint(const json& config) {
  return config.contains("basepoint") ? io::parse_complex(config.at("basepoint")) : io::default_basepoint();
}

ContextOptions config_context(const json& config) {
  ContextOptions o;
  o.cap = config.value("context_cap", o.cap);
  return o;
}

std::vector<Word> default_words(const Representation& rho) {
  std::vector<Word> out;
  for (const Word& w : word_ball(static_cast<int>(rho.rank()), 2, kDefaultWordCap)) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

double max_abs(const std::vector<Complex>& a) {
  double out = 0.0;
  for (Complex z : a) out = std::max(out, std::abs(z));
  return out;
}

}  // namespace

FiniteLamination counterexample_lamination(double n) {
  return FiniteLamination({{Geodesic(1.0 / n, n), Complex(1.0)}, {Geodesic(-1.0 / n, -n), Complex(-1.0)}});
}

// ---------------------------------------------------------------------------

CommandResult cmd_counterexample(const json& config) {
  const double theta = config.value("theta", std::numbers::pi / 4.0);
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) throw Error(ErrorKind::Config, "theta must lie in (0, pi/2)");
  const auto ns = get_list<double>(config, "ns", {10.0, 100.0, 1000.0});
  const Complex t = config.contains("t") ? io::parse_complex(config.at("t")) : Complex(1.0);

  const Complex x = std::polar(1.0, theta);
  const Complex y = kI;
  // Test family: constant; the crossing parameter along the symmetric arc of
  // the unit circle; crossing angle above pi/4 on the same arc.
  const GeodesicSegment arc(std::polar(1.0, std::numbers::pi - theta), x);
  const TestFunction constant = TestFunction::constant();
  const TestFunction ramp = TestFunction::profile({{0.0, 0.0}, {1.0, 1.0}}).with_segment(arc);
  const TestFunction steep =
      TestFunction::profile({{0.0, 1.0}, {1.0, 1.0}}, {{std::numbers::pi / 4.0, 0.0}, {std::numbers::pi / 3.0, 1.0}})
          .with_segment(arc);
  const Unimodular target = Unimodular::diagonal(std::exp(0.5 * t));

  CommandResult res;
  res.table = io::ResultTable({{"n", ColumnKind::Real},
                               {"trace", ColumnKind::Complex},
                               {"translation_length", ColumnKind::Real},
                               {"rotation", ColumnKind::Real},
                               {"dist_to_axis_isometry", ColumnKind::Real},
                               {"weak_constant", ColumnKind::Complex},
                               {"weak_ramp", ColumnKind::Complex},
                               {"weak_angle", ColumnKind::Complex},
                               {"pass", ColumnKind::Flag}});
  bool all_length = true, all_dist = true, all_weak = true, all_cross = true;
  for (double n : ns) {
    if (n < 3.0) throw Error(ErrorKind::Config, "every n must be >= 3");
    const FiniteLamination lam = counterexample_lamination(n);
    const Unimodular c = bending_cocycle(GeodesicTransfer::identity(), lam, x, y, t);
    const Displacement disp = complex_displacement(c);
    const double dist = projective_distance(c, target);
    const Complex w_const = weak_eval(lam, constant);
    const Complex w_ramp = weak_eval(lam, ramp);
    const Complex w_angle = weak_eval(lam, steep);
    const bool crossing_ok = crossings(lam, GeodesicSegment(x, y)).size() == 1;
    const bool len_ok = std::abs(disp.z.real() - t.real()) <= 1e-12;
    const bool dist_ok = dist <= 2.0 / n;
    const bool weak_ok = w_const == Complex(0.0);
    all_length &= len_ok;
    all_dist &= dist_ok;
    all_weak &= weak_ok;
    all_cross &= crossing_ok;
    res.table.add_row({n, c.trace(), disp.z.real(), disp.z.imag(), dist, w_const, w_ramp, w_angle,
                       len_ok && dist_ok && weak_ok && crossing_ok});
  }
  res.assertions = {
      {"single crossing leaf (1/n, n)", all_cross, ""},
      {"translation length = Re t within 1e-12", all_length, ""},
      {"||C - diag(e^{t/2}, e^{-t/2})|| <= 2/n", all_dist, ""},
      {"weak_eval against constant = 0 exactly", all_weak, ""},
  };
  res.summary = {{"command", "counterexample"}, {"theta", theta}, {"assertions", assertions_json(res.assertions)}};
  return res;
}

// ---------------------------------------------------------------------------

namespace {

struct SequenceRun {
  std::string kind;
  std::function<LaminationSource(int)> family;  // n -> mu_n
  std::optional<LaminationSource> delta;        // mu_n = mu_0 + delta / n
};

}  // namespace

CommandResult cmd_converge(const json& config) {
  const Representation rho = config_representation(config);
  const Complex x = config_basepoint(config);
  const BendingContext ctx(rho, x, config_context(config));
  const LaminationSource mu0 = config.contains("lamination")
                                   ? io::parse_lamination(config.at("lamination"), rho)
                                   : io::parse_lamination(json::parse(R"({"kind": "orbit", "curves": [{"word": "a"}], "cap": 6})"), rho);
  const auto ts = complex_list(config, "ts", {Complex(0.0), Complex(0.0, 0.1)});
  const auto ns = get_list<int>(config, "ns", {2, 4, 8, 16, 32});
  const std::vector<Word> words = config.contains("words") ? io::parse_words(config.at("words"), rho) : default_words(rho);
  DerivativeOptions dopt;
  if (config.contains("derivative")) {
    dopt.h = config.at("derivative").value("h", dopt.h);
    dopt.tol = config.at("derivative").value("tol", dopt.tol);
  }
  const json added_cfg = config.value("added_curve", json::object());

  std::vector<SequenceRun> runs;
  runs.push_back({"weight-scaled", [&](int n) { return scaled(mu0, 1.0 + 1.0 / n); }, scaled(mu0, 1.0)});
  CommandResult res;
  std::optional<Word> added;
  std::string added_note;
  try {
    const Word avoid = Word::parse(added_cfg.value("avoid", std::string("a")), rho.presentation.names);
    added = disjoint_simple_curve(rho, avoid, added_cfg.value("max_length", 4), added_cfg.value("cap", 6));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoDisjointCurveFound) throw;
    added_note = e.what();
  }
  std::optional<OrbitSpec> nu;
  if (added) {
    const auto* orbit = std::get_if<OrbitSpec>(&mu0);
    if (!orbit) throw Error(ErrorKind::Config, "added-curve sequence needs an orbit lamination");
    nu = OrbitSpec{io::curve_leaves(rho, *added, 1.0), rho, added_cfg.value("cap", 6)};
    runs.push_back({"added-curve",
                    [&, orbit](int n) {
                      OrbitSpec s = *orbit;
                      for (Leaf l : nu->base) {
                        l.weight /= static_cast<double>(n);
                        s.base.push_back(l);
                      }
                      return LaminationSource(s);
                    },
                    LaminationSource(*nu)});
  }

  res.table = io::ResultTable({{"sequence", ColumnKind::Text},
                               {"n", ColumnKind::Integer},
                               {"t", ColumnKind::Complex},
                               {"rep_class_distance", ColumnKind::Real},
                               {"vf_distance", ColumnKind::Real},
                               {"vf_expected", ColumnKind::Real},
                               {"ml_pp_valid", ColumnKind::Flag},
                               {"pass", ColumnKind::Flag}});

  const auto t0 = bending_vector_field(ctx, mu0, words, dopt);
  std::vector<Representation> bent0;
  for (Complex t : ts) bent0.push_back(bend(ctx, mu0, t));

  for (const SequenceRun& run : runs) {
    const auto t_delta = bending_vector_field(ctx, *run.delta, words, dopt);
    const double delta_norm = max_abs(t_delta);
    std::vector<std::vector<double>> dist_by_t(ts.size());
    bool mlpp_all = true;
    for (int n : ns) {
      const LaminationSource mun = run.family(n);
      bool mlpp = true;
      if (run.kind == "added-curve") {
        for (std::size_t j = 0; j < ctx.rank(); ++j) {
          mlpp &= ml_pp_valid(lamination_near(mu0, ctx.segment(j)), lamination_near(*nu, ctx.segment(j)));
        }
      }
      mlpp_all &= mlpp;
      const auto tn = bending_vector_field(ctx, mun, words, dopt);
      const double vf = max_abs_diff(tn, t0);
      const double expected = delta_norm / n;
      const bool vf_ok = std::abs(vf - expected) <= 0.1 * expected;
      for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        const double d = rep_class_distance(bend(ctx, mun, ts[ti]), bent0[ti], words);
        dist_by_t[ti].push_back(d);
        const bool row_ok = vf_ok && (ts[ti] != Complex(0.0) || d == 0.0);
        res.table.add_row({run.kind, static_cast<long long>(n), ts[ti], d, vf, expected, mlpp, row_ok});
      }
      res.assertions.push_back({run.kind + ": vector-field distance within 10% of ||T_delta||/n at n=" +
                                    std::to_string(n),
                                vf_ok, "got " + fmt(vf) + ", expected " + fmt(expected)});
    }
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const auto& d = dist_by_t[ti];
      if (ts[ti] == Complex(0.0)) {
        const bool zero = std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; });
        res.assertions.push_back({run.kind + ": t = 0 distance is 0", zero, ""});
        continue;
      }
      bool monotone = true;
      for (std::size_t i = 1; i < d.size(); ++i) monotone &= d[i] < d[i - 1];
      const bool tenfold = d.back() <= 0.1 * d.front();
      const std::string tag = run.kind + " at t=(" + fmt(ts[ti].real()) + "," + fmt(ts[ti].imag()) + ")";
      res.assertions.push_back({tag + ": rep_class_distance decreasing in n", monotone, ""});
      res.assertions.push_back(
          {tag + ": final <= 0.1 x initial", tenfold, fmt(d.back()) + " vs " + fmt(d.front())});
    }
    if (run.kind == "added-curve") res.assertions.push_back({run.kind + ": ML++ validity", mlpp_all, ""});
  }

  // Central-difference order: errors against the Richardson estimate.
  const auto reference = bending_vector_field(ctx, mu0, words, {dopt.h * 0.25, 1e-4});
  const double h1 = config.value("order_step", 0.02);
  const double e1 = max_abs_diff(central_difference(ctx, mu0, words, h1), reference);
  const double e2 = max_abs_diff(central_difference(ctx, mu0, words, 0.5 * h1), reference);
  const double ratio = e1 / e2;
  res.assertions.push_back({"central difference order 2 (error ratio in [3, 5])", ratio >= 3.0 && ratio <= 5.0,
                            "ratio " + fmt(ratio)});

  res.summary = {{"command", "converge"},
                 {"added_curve", added ? json(added->to_string(rho.presentation.names)) : json(nullptr)},
                 {"added_curve_note", added_note},
                 {"vector_field_norm", max_abs(t0)},
                 {"order_ratio", ratio},
                 {"assertions", assertions_json(res.assertions)}};
  return res;
}

// ---------------------------------------------------------------------------

OrientedGeodesic cylinder_geodesic(double r, double u1, double u2, double u3, double u4) {
  const double rho_in = std::tanh(0.5 * r);
  const Complex source = rho_in * std::sqrt(u1) * std::polar(1.0, 2.0 * std::numbers::pi * u2);
  // |target| >= coth(r/2); sqrt(1 - u) keeps the modulus finite.
  const Complex target = std::polar(1.0, 2.0 * std::numbers::pi * u3) / (rho_in * std::sqrt(1.0 - u4));
  return {BoundaryPoint(source), BoundaryPoint(target)};
}

namespace {

struct BoundSample {
  double lhs = 0.0;
  double factor = 0.0;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double u() { return uni_(rng_); }
  Complex disc(double radius) { return radius * std::sqrt(u()) * std::polar(1.0, 2.0 * std::numbers::pi * u()); }
  // A bounded element: the perturbed identity, entries within 0.3.
  Unimodular bounded() {
    return Unimodular::from_entries(1.0 + box(0.3), box(0.3), box(0.3), 1.0 + box(0.3));
  }
  Complex box(double h) { return {h * (2.0 * u() - 1.0), h * (2.0 * u() - 1.0)}; }
  OrientedGeodesic in_cylinder(double r) { return cylinder_geodesic(r, u(), u(), u(), u()); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

OrientedGeodesic conj(const Unimodular& b, const OrientedGeodesic& g) { return apply(b, g); }

Unimodular pair_map(const OrientedGeodesic& g) {
  // [[1, p], [1/q, 1]] sends 0 to p and infinity to q.
  const Complex p = g.source.value(), q = g.target.value();
  return Unimodular::from_entries(1.0, p, 1.0 / q, 1.0);
}

BoundSample conjugate_bound(Sampler& s, double r, double z_max) {
  const Unimodular b = s.bounded();
  const Unimodular pert = Unimodular::from_entries(1.0 + r * s.box(1.0), r * s.box(1.0), r * s.box(1.0), 1.0);
  const Unimodular c = b * pert;
  const Complex z = s.disc(z_max);
  const OrientedGeodesic core{BoundaryPoint(0.0), BoundaryPoint::infinity()};
  const Unimodular a = axis_isometry(core, z);
  const Unimodular lhs_b = b * a * b.inverse(), lhs_c = c * a * c.inverse();
  Mat2 diff = b.matrix();
  diff.a -= c.a();
  diff.b -= c.b();
  diff.c -= c.c();
  diff.d -= c.d();
  const double bc = std::max(std::abs(diff.a) + std::abs(diff.b), std::abs(diff.c) + std::abs(diff.d));
  return {projective_distance(lhs_b, lhs_c), bc * std::abs(z)};
}

BoundSample pair_map_bound(Sampler& s, double r, bool equal) {
  const Unimodular b = s.bounded();
  const OrientedGeodesic alpha = s.in_cylinder(r);
  const OrientedGeodesic beta = equal ? alpha : s.in_cylinder(r);
  const Unimodular a = b * pair_map(beta) * pair_map(alpha).inverse() * b.inverse();
  if (!conj(a, conj(b, alpha)).target.approx_equal(conj(b, beta).target, 1e-8)) {
    throw Error(ErrorKind::InvalidArgument, "pair-map construction does not map alpha to beta");
  }
  return {projective_distance(a, Unimodular::identity()), r};
}

BoundSample axis_pair_bound(Sampler& s, double r, double z_max) {
  const Unimodular b = s.bounded();
  const OrientedGeodesic g1 = conj(b, s.in_cylinder(r));
  const OrientedGeodesic g2 = conj(b, s.in_cylinder(r));
  const Complex z1 = s.disc(z_max);
  const Complex z2 = z1 + r * s.disc(z_max);
  const double factor = r * std::min(std::abs(z1), std::abs(z2)) + std::abs(z1 - z2);
  return {projective_distance(axis_isometry(g1, z1), axis_isometry(g2, z2)), factor};
}

BoundSample product_bound(Sampler& s, double r, double z_max, int k) {
  const Unimodular b = s.bounded();
  Unimodular prod;
  Complex total = 0.0;
  double weight = 0.0;
  OrientedGeodesic first;
  for (int i = 0; i < k; ++i) {
    const OrientedGeodesic g = conj(b, s.in_cylinder(r));
    if (i == 0) first = g;
    const Complex z = s.disc(z_max / k);
    prod = prod * axis_isometry(g, z);
    total += z;
    weight += std::abs(z);
  }
  return {projective_distance(prod, axis_isometry(first, total)), r * weight};
}

}  // namespace

CommandResult cmd_bounds(const json& config, std::optional<std::uint64_t> seed) {
  const std::uint64_t base_seed = seed ? *seed : config.value("seed", std::uint64_t{20240601});
  const int samples = config.value("samples", 200);
  const auto rs = get_list<double>(config, "rs", {0.1, 0.05, 0.025});
  const double z_max = config.value("z_max", 1.0);
  const int k = config.value("k", 4);
  const double spread = config.value("max_spread", 2.0);
  if (samples <= 0 || k <= 0 || z_max <= 0.0) throw Error(ErrorKind::Config, "samples, k and z_max must be positive");

  CommandResult res;
  res.table = io::ResultTable({{"suite", ColumnKind::Text},
                               {"r", ColumnKind::Real},
                               {"sample", ColumnKind::Integer},
                               {"lhs", ColumnKind::Real},
                               {"factor", ColumnKind::Real},
                               {"ratio", ColumnKind::Real},
                               {"pass", ColumnKind::Flag}});
  const std::vector<std::string> suites{"conjugate", "pair_map", "axis_pair", "product"};
  json per_suite = json::object();
  for (std::size_t li = 0; li < suites.size(); ++li) {
    std::vector<double> maxima;
    for (double r : rs) {
      // Same stream for every r, so only the scale changes between radii.
      Sampler s(base_seed + 1000003 * li);
      double worst = 0.0;
      for (int i = 0; i < samples; ++i) {
        BoundSample ls;
        switch (li) {
          case 0: ls = conjugate_bound(s, r, z_max); break;
          case 1: ls = pair_map_bound(s, r, false); break;
          case 2: ls = axis_pair_bound(s, r, z_max); break;
          default: ls = product_bound(s, r, z_max, k); break;
        }
        const double ratio = ls.factor > 0.0 ? ls.lhs / ls.factor : 0.0;
        worst = std::max(worst, ratio);
        res.table.add_row({suites[li], r, static_cast<long long>(i), ls.lhs, ls.factor, ratio, std::isfinite(ratio)});
      }
      maxima.push_back(worst);
    }
    const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
    const bool ok = *lo > 0.0 && *hi / *lo <= spread;
    per_suite[suites[li]] = {{"max_ratio_by_r", maxima}, {"spread", *hi / *lo}};
    res.assertions.push_back({suites[li] + ": max ratio stable within factor " + fmt(spread) + " across r",
                              ok, "spread " + fmt(*hi / *lo)});
  }
  // Degenerate cases.
  {
    Sampler s(base_seed);
    bool zero_product = true, zero_pair = true;
    for (int i = 0; i < samples; ++i) {
      zero_product &= product_bound(s, rs.front(), z_max, 1).lhs == 0.0;
      zero_pair &= pair_map_bound(s, rs.front(), true).lhs <= 1e-12;
    }
    res.assertions.push_back({"product with k = 1: LHS = 0 exactly", zero_product, ""});
    res.assertions.push_back({"pair_map with alpha = beta: A = I", zero_pair, ""});
  }
  res.summary = {{"command", "bounds"},
                 {"seed", base_seed},
                 {"suites", per_suite},
                 {"assertions", assertions_json(res.assertions)}};
  return res;
}

// ---------------------------------------------------------------------------

CommandResult cmd_approx_sweep(const json& config) {
  const Representation rho = config_representation(config);
  const Complex x = config_basepoint(config);
  const BendingContext ctx(rho, x, config_context(config));
  const json default_lam = {{"kind", "orbit"}, {"christoffel", {{"p", 13}, {"q", 8}, {"letters", "ab"}}}, {"cap", 2}};
  const LaminationSource mu0 = io::parse_lamination(config.value("lamination", default_lam), rho);
  SweepOptions opt;
  opt.ms = get_list<int>(config, "ms", opt.ms);
  opt.ns = get_list<int>(config, "ns", opt.ns);
  opt.t = config.contains("t") ? io::parse_complex(config.at("t")) : Complex(0.0, 0.2);
  const std::string family = config.value("family", std::string("weight_scaled"));
  if (family != "weight_scaled") throw Error(ErrorKind::Config, "family must be weight_scaled");
  const auto slope_range = get_list<double>(config, "slope_range", {0.7, 1.3});
  const double fit_tol = config.value("fit_tolerance", 0.1);

  const SweepResult sw =
      sweep(ctx, [&](int n) { return n == 0 ? mu0 : scaled(mu0, 1.0 + 1.0 / n); }, opt);

  CommandResult res;
  res.table = io::ResultTable({{"m", ColumnKind::Integer},
                               {"n", ColumnKind::Integer},
                               {"dist", ColumnKind::Real},
                               {"r", ColumnKind::Real},
                               {"epsilon", ColumnKind::Real},
                               {"epsilon0", ColumnKind::Real},
                               {"epsilon1", ColumnKind::Real},
                               {"product_difference", ColumnKind::Real},
                               {"fitted", ColumnKind::Real},
                               {"pass", ColumnKind::Flag}});
  bool zero_column = true;
  for (const SweepCell& c : sw.cells) {
    const double fitted = sw.fit.n1 * c.r + sw.fit.n2 * c.epsilon;
    const bool ok = c.n != 0 || c.dist == 0.0;
    zero_column &= ok;
    res.table.add_row({static_cast<long long>(c.m), static_cast<long long>(c.n), c.dist, c.r, c.epsilon, c.epsilon0,
                       c.epsilon1, c.product_difference, fitted, ok});
  }
  const double rel = sw.fit.max_value > 0.0 ? sw.fit.max_residual / sw.fit.max_value : 0.0;
  std::optional<double> slope;
  const bool positive = std::all_of(sw.r_of_m.begin(), sw.r_of_m.end(), [](double v) { return v > 0.0; }) &&
                        std::all_of(sw.product_difference_of_m.begin(), sw.product_difference_of_m.end(),
                                    [](double v) { return v > 0.0; });
  if (positive) slope = loglog_slope(sw.r_of_m, sw.product_difference_of_m);
  const bool slope_ok = slope && *slope >= slope_range[0] && *slope <= slope_range[1];

  res.assertions = {
      {"dist = 0 exactly on the n = 0 column", zero_column, ""},
      {"two-term fit max residual <= " + fmt(fit_tol) + " x max distance", rel <= fit_tol, "ratio " + fmt(rel)},
      {"||E - B|| vs r(m) log-log slope in [" + fmt(slope_range[0]) + ", " + fmt(slope_range[1]) + "]", slope_ok,
       slope ? "slope " + fmt(*slope) : "degenerate: r(m) or ||E - B|| vanishes"},
  };
  json diag = json::array();
  for (const auto& d : sw.diagonal) diag.push_back(d ? json(*d) : json(nullptr));
  res.summary = {{"command", "approx-sweep"},
                 {"ms", opt.ms},
                 {"ns", opt.ns},
                 {"t", io::complex_to_json(opt.t)},
                 {"r_of_m", sw.r_of_m},
                 {"product_difference_of_m", sw.product_difference_of_m},
                 {"slope", slope ? json(*slope) : json(nullptr)},
                 {"fit", {{"N1", sw.fit.n1}, {"N2", sw.fit.n2}, {"max_residual", sw.fit.max_residual},
                          {"max_distance", sw.fit.max_value}, {"relative_residual", rel}}},
                 {"diagonal_n_of_m", diag},
                 {"theta", ctx.theta()},
                 {"d", ctx.d()},
                 {"d_prime", ctx.d_prime()},
                 {"assertions", assertions_json(res.assertions)}};
  return res;
}

// ---------------------------------------------------------------------------

CommandResult cmd_render(const json& config) {
  io::RenderScene scene;
  scene.size = config.value("size", 600);
  std::optional<Representation> rho;
  if (config.contains("representation")) rho = io::parse_representation(config.at("representation"));
  const Complex x = config_basepoint(config);

  if (config.contains("segments")) {
    for (const auto& s : config.at("segments")) {
      scene.segments.emplace_back(io::parse_complex(s.at(0)), io::parse_complex(s.at(1)));
    }
  }
  if (config.contains("generators")) {
    if (!rho) throw Error(ErrorKind::Config, "generators need a representation");
    for (int j : config.at("generators").get<std::vector<int>>()) {
      scene.segments.emplace_back(x, rho->image(static_cast<std::size_t>(j)).apply(x));
    }
  }
  if (config.contains("lamination")) {
    const Representation group = rho ? *rho : genus2_octagon();
    const LaminationSource src = io::parse_lamination(config.at("lamination"), group);
    FiniteLamination lam;
    if (const auto* f = std::get_if<FiniteLamination>(&src)) {
      lam = *f;
    } else {
      Window w;
      w.center = config.contains("window") ? io::parse_complex(config.at("window").value("center", json::array({0.0, 1.0})))
                                           : Complex(0.0, 1.0);
      w.radius = config.contains("window") ? config.at("window").value("radius", 3.0) : 3.0;
      lam = orbit_instantiate(std::get<OrbitSpec>(src), w);
    }
    for (const Leaf& l : lam.leaves()) scene.leaves.push_back(l.geodesic);
  }
  if (config.contains("orbit_words")) {
    if (!rho) throw Error(ErrorKind::Config, "orbit_words need a representation");
    for (const Word& w : io::parse_words(config.at("orbit_words"), *rho)) scene.points.push_back(evaluate_word(*rho, w).apply(x));
  }
  CommandResult res;
  res.svg = io::render_svg(scene);
  res.table = io::ResultTable({{"leaves", ColumnKind::Integer}, {"segments", ColumnKind::Integer}});
  res.table.add_row({static_cast<long long>(scene.leaves.size()), static_cast<long long>(scene.segments.size())});
  res.summary = {{"command", "render"}, {"leaves", scene.leaves.size()}};
  return res;
}

}  // namespace bendlab
