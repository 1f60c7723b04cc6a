#pragma once

// Bending cocycles, bent representations and the partition approximation
// scheme that compares the cocycle of a lamination with products over a
// subdivided segment.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "bendlab/fuchsian.hpp"
#include "bendlab/hypcore.hpp"
#include "bendlab/laminations.hpp"

namespace bendlab {

struct ContextOptions {
  int cap = 6;              // word cap for the conjugate-axis check
  double axis_tol = 1e-9;   // minimum distance from x to any conjugate axis
};

class BendingContext {
 public:
  // The reference (Fuchsian) representation supplies the generators g_j that
  // define the segments [x, g_j(x)]; the base representation is the one being
  // bent and carries the boundary transfer.  Throws InvalidContext when x lies
  // on a conjugate axis or the angle floor / minimal displacement vanish.
  BendingContext(Representation base, Complex x, ContextOptions options = {});
  BendingContext(Representation base, Representation reference, Complex x,
                 ContextOptions options = {});

  const Representation& base() const { return base_; }
  const Representation& reference() const { return reference_; }
  const GeodesicTransfer& transfer() const { return base_.transfer; }
  Complex x() const { return x_; }
  std::size_t rank() const { return base_.rank(); }
  const GeodesicSegment& segment(std::size_t j) const { return segments_.at(j); }
  const Unimodular& generator(std::size_t j) const { return reference_.images.at(j); }

  double theta() const { return theta_; }
  double d() const { return d_; }
  double d_prime() const { return d_prime_; }
  const ContextOptions& options() const { return options_; }

 private:
  void build();

  Representation base_;
  Representation reference_;
  Complex x_;
  ContextOptions options_;
  std::vector<GeodesicSegment> segments_;
  double theta_ = 0.0, d_ = 0.0, d_prime_ = 0.0;
};

// A lamination given either explicitly or as a group orbit instantiated on
// demand near the segment at hand.
using LaminationSource = std::variant<FiniteLamination, OrbitSpec>;

// Leaves of the source meeting the closed disc around the segment (plus a
// margin); for explicit laminations, all leaves.
FiniteLamination lamination_near(const LaminationSource& source, const GeodesicSegment& seg,
                                 double margin = 0.0);
LaminationSource scaled(const LaminationSource& source, Complex c);

// Ordered product over the leaves crossing [x, y] of A(phi(leaf), t w), the
// leaf oriented from the segment's left to its right and crossings at x or y
// taking half their weight.
Unimodular bending_cocycle(const GeodesicTransfer& phi, const FiniteLamination& lam, Complex x,
                           Complex y, Complex t);
Unimodular bending_cocycle(const BendingContext& ctx, const FiniteLamination& lam, Complex x,
                           Complex y, Complex t);

// rho_t(g_j) = C(x, g_j(x)) rho(g_j).
Representation bend(const BendingContext& ctx, const LaminationSource& lam, Complex t);

struct ApproxOptions {
  int m = 8;
  Complex t{1.0, 0.0};
  // Radius of the window bump chi; searched from the support when unset.
  std::optional<double> chi_radius;
};

struct ApproxBundle {
  std::size_t generator = 0;
  int m = 0;
  Complex t;
  Complex x;
  Unimodular g;  // base image rho(g_j)
  FiniteLamination lamination;
  std::vector<Complex> points;  // x_0 .. x_m

  // Index i - 1 holds the object with subscript i.
  std::vector<std::optional<std::size_t>> tilde_leaf;  // m entries
  std::vector<Complex> tilde_mass;                     // b_{i-1} + a_i
  std::vector<Complex> tilde_integral;                 // the integral' over [x_{i-1}, x_i]
  std::vector<std::optional<std::size_t>> prime_leaf;  // m - 1 entries
  std::vector<Complex> prime_mass;                     // a_i + b_i
  std::vector<Complex> a, b;
  Complex a_chi, a_rest, b_chi, b_rest;  // a', a'', b', b''
  Complex chi_total;                     // chi mu(G)

  std::vector<Unimodular> C, D, D_left, D_right;
  Unimodular P, Q, R, S;
  Unimodular B, E;

  double chi_radius = 0.0;
  double r = 0.0;                   // measured cylinder radius r(m)
  double product_difference = 0.0;  // ||E - B||

  // Masses entering the comparison terms of the convergence bound:
  // chi mu(G), then the non-chi part of each D_i.
  std::vector<Complex> epsilon_components() const;
};

// Clamped hat functions: lambda_i(u) for u = m * s in [0, m].
double partition_weight(int i, int m, double u);

ApproxBundle approx_bundle(const BendingContext& ctx, const LaminationSource& lam,
                           std::size_t generator, const ApproxOptions& options);
// Radius of the chi window from the crossing-window search.
double chi_window_radius(const BendingContext& ctx, const FiniteLamination& lam,
                         std::size_t generator, int m);

struct ConjugatedDistance {
  Unimodular H;
  double dist = 0.0;
};

// bundles_n[j] and bundles_0[j] for every generator j; generator 0 supplies H.
ConjugatedDistance conjugated_distance(const std::vector<ApproxBundle>& bundles_n,
                                       const std::vector<ApproxBundle>& bundles_0);

double rep_class_distance(const Representation& rho1, const Representation& rho2,
                          const std::vector<Word>& words);

struct DerivativeOptions {
  double h = 1e-3;
  double tol = 1e-6;  // allowed Richardson disagreement, relative to max(1, |value|)
};

// d/dt tr rho_{t mu}(w) at t = 0 for each word, by Richardson-extrapolated
// central differences.  Throws NonConvergentDifference.
std::vector<Complex> bending_vector_field(const BendingContext& ctx, const LaminationSource& lam,
                                          const std::vector<Word>& words,
                                          const DerivativeOptions& options = {});
// Plain central difference of tr rho_{t mu}(w) at t = 0 with step h.
std::vector<Complex> central_difference(const BendingContext& ctx, const LaminationSource& lam,
                                        const std::vector<Word>& words, double h);

double holomorphy_residual(const BendingContext& ctx, const LaminationSource& lam,
                           const std::vector<Word>& words, Complex t0, double h);

// Sweep over an (m, n) grid.  family(n) returns mu_n; family(0) is mu_0.  The
// n = 0 column compares mu_0 with itself, so its epsilon is 0.
struct SweepOptions {
  std::vector<int> ms{4, 8, 16, 32};
  std::vector<int> ns{0, 2, 4, 8, 16, 32};
  Complex t{1.0, 0.0};
};

struct SweepCell {
  int m = 0;
  int n = 0;
  double dist = 0.0;
  double r = 0.0;
  double epsilon = 0.0;
  double epsilon0 = 0.0;  // chi mu(G) term
  double epsilon1 = 0.0;  // first D term
  double product_difference = 0.0;  // ||E - B|| for mu_n, max over generators
};

struct LinearFit {
  double n1 = 0.0;
  double n2 = 0.0;
  double max_residual = 0.0;
  double max_value = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // m-major grid order
  // r(m): max over generators and the family, made nonincreasing in m.
  std::vector<double> r_of_m;
  std::vector<double> product_difference_of_m;  // ||E - B|| for mu_0
  LinearFit fit;
  // n(m): smallest grid n >= m with epsilon(m, n) <= 1/m, if any.
  std::vector<std::optional<int>> diagonal;
};

SweepResult sweep(const BendingContext& ctx, const std::function<LaminationSource(int)>& family,
                  const SweepOptions& options);

// Nonnegative least squares for y ~ n1 u + n2 v.
LinearFit fit_two_terms(const std::vector<double>& u, const std::vector<double>& v,
                        const std::vector<double>& y);
// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bendlab
