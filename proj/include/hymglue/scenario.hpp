// scenario.hpp
//
// The four bundled test problems and their discretizations.
//
//   flat-torus-line   line bundle on the flat 4-torus, h = exp(-phi) with phi a
//                     short Fourier series; no blowup, c = 0.
//   radial-ball-line  O(k) over CP^2 blown up at a point, Fubini-Study base and
//                     h = (1 + |z|^2)^{-k} in the affine chart; c0 = 2k.
//   rank2-diag        (1+|z|^2)^{-k} Id with the second block multiplied by
//                     exp(-b beta(|z|^2)) for a bump beta; equal slopes.
//   rank2-gauge-flat  trivial rank-2 bundle with h = exp(2 chi(|z|^2) B), B a
//                     fixed Hermitian matrix; gauge-equivalent to flat, c = 0.
//
// The three U(2)-invariant problems live on RadialGrid; the glued metrics
// omega_eps and h_eps are sampled at its cells.

#pragma once

#include "hymglue/bundle.hpp"
#include "hymglue/discretization.hpp"
#include "hymglue/geometry.hpp"
#include "hymglue/weighted.hpp"

#include <optional>
#include <string>

namespace hymglue {

enum class ScenarioId { FlatTorusLine, RadialBallLine, Rank2Diag, Rank2GaugeFlat };

ScenarioId parse_scenario(const std::string& s);
std::string to_string(ScenarioId id);

struct FourierMode {
  Point4 wavevector;  // integer entries
  double amplitude;
  double phase;
};

struct ScenarioConfig {
  ScenarioId id = ScenarioId::RadialBallLine;
  double epsilon = 1e-2;
  double dsigma = 0.02;
  int torus_nodes = 8;
  int degree = 1;              // k in O(k)
  double block_bump = 0.02;    // b in rank2-diag
  double gauge_amplitude = 0.02;
  std::vector<FourierMode> fourier = {{Point4(1, 0, 0, 0), 0.3, 0.0},
                                      {Point4(0, 1, 1, 0), 0.2, 0.5},
                                      {Point4(0, 0, 0, 2), 0.1, 1.0}};
  CutoffKind cutoff = CutoffKind::Smoothstep7;
  // Ladder levels per octave for weighted norms of grid fields; a plain
  // dyadic ladder aliases with eps sweeps that are not powers of 4.
  int ladder_subdivisions = 8;
};

// Smooth bump in log|z|^2 supported in |log w| < 1.5, equal to 1 at w = 1.
template <class T>
T log_bump(const T& w) {
  using std::exp;
  using std::log;
  const double t = std::log(value_of(w)) / 1.5;
  if (std::abs(t) >= 1.0) return 0.0 * w;
  const T s = log(w) / 1.5;
  return exp(1.0 - 1.0 / (1.0 - s * s));
}

struct Scenario {
  ScenarioConfig config;
  int n = 2;
  int rank = 1;
  std::optional<GluingParams> params;
  std::optional<RadialGrid> grid;
  std::optional<TorusGrid> torus;
  // Node metrics are h_eps with the scalar factor (1 + |z|^2)^{-k} divided out;
  // its flux sits in disc.source.
  FluxDiscretization disc;
  double c0 = 0.0;           // slope of the unglued problem
  double c_eps = 0.0;        // discrete average of tr iLambda F(h_eps) / m
  int q = 0;                 // node used by the trace pinning
  // Orthonormal traceless Hermitian values at q of the parallel endomorphisms
  // of the limiting solution (empty for a simple bundle).
  std::vector<Mat> parallel;
  KahlerPotential base;      // base potential correction (normal form at p)
  RadialPotential radial_base;
  BundleMetricFn h;          // unglued bundle metric in local coordinates
  std::function<Mat(double)> radial_h;  // the same as a function of |z|^2
  TopologicalData topology;

  bool radial() const { return grid.has_value(); }
  int nodes() const { return disc.nodes(); }

  // Weighted C^{k,alpha}_delta size of a field (radial problems), or the sup
  // norm on the torus where no weight applies.
  double field_norm(const EndoField& f, int k, double delta, double alpha = 0.5) const;
  NormReport field_norm_report(const EndoField& f, int k, double delta, double alpha = 0.5) const;
  RadialProfile profile(const EndoField& f) const;

  // The field iLambda F(h_eps) on the grid.
  EndoField curvature() const;
};

Scenario make_scenario(const ScenarioConfig& cfg);

}  // namespace hymglue
