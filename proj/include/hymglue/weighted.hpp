// weighted.hpp
//
// Weighted Holder and Sobolev norms for U(n)-invariant endomorphism fields on
// the punctured space X_p, the model blowup Bl_0 C^n and the glued Bl_p X.
//
// A field is a RadialProfile: |z| -> m x m matrix, called with +infinity for
// the point at infinity of the compactifying chart. The supremum over scales r
// is taken on the dyadic ladder r = 1, 1/2, 1/4, ... (cut at eps; optionally
// subdivided within each octave), and every scale is measured on the reference
// annulus 1 <= x <= 2 after rescaling s_r^delta(x) = r^{-delta} s(r x). Pointwise sizes are Frobenius norms.

#pragma once

#include "hymglue/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hymglue {

using RadialProfile = std::function<Mat(double)>;

enum class Space { Xp, Bl0Cn, BlpX, AnnulusRestriction };

struct WeightedNormSpec {
  int k = 2;
  double alpha = 0.5;
  double delta = -0.5;
  std::optional<double> epsilon;
  Space space = Space::BlpX;
  // Ladder bounds. AnnulusRestriction: r = r_max, r_max/2, ... >= r_min.
  // Bl0Cn: R = 1, 2, 4, ... <= r_max. Xp: r = 1, 1/2, ... >= r_min (or 2^-30).
  double r_max = 1.0;
  double r_min = 0.0;
  bool include_outer = true;  // the C^{k,alpha} term on the complement of the unit ball
  int ref_points = 65;
  // Levels per octave of the ladder: r = 2^{-j / ladder_subdivisions}.
  int ladder_subdivisions = 1;

  void validate() const;
};

// C^{k,alpha} size of a profile sampled on [a, b]: the sup part sums the sup of
// the first k derivatives, the seminorm part is the Holder quotient of the k-th
// derivative over node pairs with separation in [h, (b - a)/2].
struct ReferenceNorm {
  double sup_part = 0.0;
  double seminorm_part = 0.0;
  double total() const { return sup_part + seminorm_part; }
};
ReferenceNorm reference_norm(const RadialProfile& s, double a, double b, int k, double alpha, int points);

struct LadderEntry {
  double r;
  ReferenceNorm norm;  // already scaled by r^{-delta}
};

struct NormReport {
  double outer = 0.0;
  double annulus = 0.0;
  double inner = 0.0;
  std::vector<LadderEntry> ladder;
  double total() const { return outer + annulus + inner; }
};

// s_r^delta on the reference annulus.
RadialProfile scaled_section(const RadialProfile& s, double r, double delta);

NormReport weighted_holder_norm(const RadialProfile& s, const WeightedNormSpec& spec);

struct SplitNorm {
  double three_region;
  double split;
  double ratio;
};
// ||gamma1 s||_{X_p} + eps^{-delta} ||gamma2 s||_{Bl_0 C^n} with cutoffs at r_eps
// built from `cutoff(|z| / r_eps)`, against the three-region norm.
SplitNorm split_norm_equivalence(const RadialProfile& s, const WeightedNormSpec& spec, int n,
                                 const std::function<double(double)>& cutoff);

struct WeightComparison {
  double lhs;  // ||s||_delta
  double mid;  // ||s||_delta'
  double rhs;  // eps^{delta - delta'} ||s||_delta
  bool pass;
};
WeightComparison weight_comparison_check(const RadialProfile& s, double delta, double delta_prime, double epsilon,
                                         int k = 2, double alpha = 0.5);

// rho: r on the unit ball, 2 outside the ball of radius 2 (min(r, 2)).
double rho_weight(double r);
// varrho_eps: 1 for r >= 1, r for eps <= r <= 1, eps for r <= eps.
double varrho_weight(double r, double epsilon);

// L^2_delta norm of a radial profile over r_min <= |z| <= r_max in C^n with
// weight rho^{-delta}, integrated in log r (trapezoid, `points` nodes).
double weighted_l2_norm(const RadialProfile& s, double delta, int n, double r_min, double r_max, int points = 4001);

// sum_{j <= k} ||d^j s / dr^j||_{L^2_{delta - j}}.
double weighted_sobolev_norm(const RadialProfile& s, int k, double delta, int n, double r_min, double r_max,
                             int points = 4001);

bool inclusion_predicate(double delta, double delta_prime, int n);

// Integers in [lo, hi] outside the open interval (2 - 2n, 0).
std::vector<int> indicial_roots(int n, int lo, int hi);

}  // namespace hymglue
