// geometry.hpp
//
// Charts, cutoffs, the Burns-Simanca model, and the glued Kahler metric on the
// blowup of a point (or several points) of a complex surface.
//
// Conventions used everywhere in the library:
//   * omega = i g_{jk} dz_j ^ dzbar_k with g_{jk} = d_j dbar_k Phi for a Kahler
//     potential Phi; the Euclidean potential |z|^2 gives g = Id.
//   * metric components are always reported in the z-chart, including at
//     points of the inner region (there g(z) equals the Burns-Simanca metric
//     evaluated at zeta = z / eps).
//   * Lambda contracts a (1,1)-form with components beta_{jk} (coefficients of
//     i dz_j ^ dzbar_k) as sum g^{kj} beta_{jk}, so Lambda omega = n.

#pragma once

#include "hymglue/jet.hpp"
#include "hymglue/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace hymglue {

// Gluing radius r_eps = eps^((n-1)/n).
double r_epsilon(double epsilon, int n);

enum class CutoffKind { Smoothstep7, Smoothstep5 };

// Monotone profile gamma with gamma = 0 on (-inf, 1] and gamma = 1 on [2, inf).
class CutoffProfile {
public:
  explicit CutoffProfile(CutoffKind kind = CutoffKind::Smoothstep7) : kind_(kind) {}

  CutoffKind kind() const { return kind_; }

  // d^order gamma / dx^order at x, order in [0, 4].
  double derivative(double x, int order) const;
  double operator()(double x) const { return derivative(x, 0); }

  template <int N>
  Jet<N> operator()(const Jet<N>& x) const {
    return chain(x, derivative(x.v, 0), derivative(x.v, 1), derivative(x.v, 2));
  }

  // sum_{j<=4} sup_x |x^j gamma^{(j)}(x)| on a fixed sample of [1, 2]; this is
  // the scale-invariant C^4 size of gamma(|z|/r) and never depends on r.
  double sampled_c4_norm(int samples = 2001) const;

private:
  CutoffKind kind_;
};

struct BlowupPoint {
  CPoint center = CPoint::Zero();
  double weight = 1.0;  // a_i > 0, local gluing scale a_i * eps
};

struct GluingParams {
  double epsilon = 1e-2;
  int n = 2;
  double r_eps = 0.1;
  std::vector<BlowupPoint> points;
  CutoffProfile cutoff;

  // Validates eps in (0,1), n >= 2, weights > 0 and disjoint necks.
  static GluingParams make(double epsilon, int n, std::vector<BlowupPoint> points = {BlowupPoint{}},
                           CutoffProfile cutoff = CutoffProfile{});

  double local_epsilon(std::size_t i) const { return points[i].weight * epsilon; }
  double local_r(std::size_t i) const { return r_epsilon(local_epsilon(i), n); }
};

enum class Region { Outer, Neck, Inner };
enum class Chart { OuterZ, AnnulusZ, InnerZeta, BlowupInterior };

struct ChartPoint {
  CPoint coords = CPoint::Zero();  // z (OuterZ/AnnulusZ), zeta (InnerZeta) or (u, v)
  Chart chart = Chart::OuterZ;
  Region region = Region::Outer;
  std::size_t point_index = 0;  // which blowup point the local chart refers to
};

// Classify a point given in global z coordinates.
ChartPoint classify(const CPoint& z, const GluingParams& params);

// Global z coordinates of a chart point (not defined on the exceptional divisor).
CPoint to_global_z(const ChartPoint& p, const GluingParams& params);

// (gamma1, gamma2) = (gamma(|z|/r_eps), 1 - gamma1). Requires an outer or annulus chart.
std::pair<double, double> cutoffs(const ChartPoint& p, const GluingParams& params);

// Kahler potential correction phi with omega = i ddbar(|z|^2 + phi), evaluated in
// local coordinates centred at a blowup point. Carries a double path and an
// exact-derivative path built from one generic callable.
struct KahlerPotential {
  std::function<double(const Point4&)> value;
  std::function<Jet<4>(const Point4&)> jet;

  template <class F>
  static KahlerPotential from(F f) {
    KahlerPotential k;
    k.value = [f](const Point4& x) { return f(std::array<double, 4>{x[0], x[1], x[2], x[3]}); };
    k.jet = [f](const Point4& x) {
      std::array<Jet<4>, 4> v{Jet<4>::variable(x[0], 0), Jet<4>::variable(x[1], 1),
                              Jet<4>::variable(x[2], 2), Jet<4>::variable(x[3], 3)};
      return f(v);
    };
    return k;
  }
};

namespace base {
KahlerPotential flat();
// Fubini-Study on CP^2 in its affine chart: log(1 + |z|^2) - |z|^2.
KahlerPotential fubini_study();
// |z1|^2 |z2|^2 scaled by `c`.
KahlerPotential quartic(double c);
}  // namespace base

// Potential correction as a function of w = |z|^2 for U(n)-invariant bases.
struct RadialPotential {
  std::function<double(double)> value;
  std::function<Jet<1>(const Jet<1>&)> jet;
  // Limit of |z|^2 (1 + dphi/dw) as |z| -> infinity; 0 when the base is not compact.
  double p_infinity = 0.0;
  // Closed form of |z|^2 (1 + dphi/dw), if known; avoids cancellation at large |z|.
  std::function<double(double)> p_exact;

  template <class F>
  static RadialPotential from(F f, double p_infinity = 0.0) {
    return RadialPotential{[f](double w) { return f(w); }, [f](const Jet<1>& w) { return f(w); }, p_infinity, {}};
  }
};

namespace base {
RadialPotential radial_flat();
RadialPotential radial_fubini_study();
}  // namespace base

// Burns-Simanca potential. Exterior chart: |zeta|^2 + log|zeta|. Blowup-interior
// chart (u, v) with zeta = (u, u v): |u|^2 (1+|v|^2) + log|u| + log(1+|v|^2)/2.
double burns_simanca_potential(const ChartPoint& zeta, int n);

// Exterior Burns-Simanca metric at zeta (exact derivatives).
Mat burns_simanca_metric(const CPoint& zeta);

// Interior-chart metric in (u, v) with the pluriharmonic log|u| dropped; smooth
// across u = 0.
Mat burns_simanca_interior_metric(const CPoint& uv);

// Glued potential |z|^2 + gamma1 phi + eps^2 gamma2 psi(z/eps) at a neck point.
double glued_potential(const ChartPoint& p, const GluingParams& params, const KahlerPotential& phi);

// The same formula evaluated at local coordinates x (relative to blowup point
// `index`). It reduces to the outer and inner branches off the neck. `phi` maps
// the coordinate array to the base correction in the same scalar type.
template <class T, class F>
T glued_potential_local(const std::array<T, 4>& x, const GluingParams& params, std::size_t index, F&& phi) {
  using std::log;
  using std::sqrt;
  const double eps = params.local_epsilon(index);
  const double r = params.local_r(index);
  const T w = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  const double wv = value_of(w);
  const T g1 = params.cutoff(sqrt(w) / r);
  T out = w;
  if (wv >= r * r) out = out + g1 * phi(x);
  if (wv <= 4.0 * r * r) out = out + (1.0 - g1) * (0.5 * eps * eps) * log(w / (eps * eps));
  return out;
}

// Hermitian matrix d_j dbar_k of a potential sampled through `sampler` at `x`,
// by fourth-order central differences with step `h`. Throws PositivityError
// when the minimum eigenvalue is below `tol`.
Mat metric_from_potential(const std::function<double(const Point4&)>& sampler, const Point4& x,
                          double h = 1e-3, double tol = 1e-10);

// Exact variant from a jet-valued potential (the full potential, |z|^2 included).
Mat metric_from_potential(const std::function<Jet<4>(const Point4&)>& potential, const Point4& x,
                          double tol = 1e-10);

// Glued metric omega_eps at a chart point, z-chart components.
Mat glued_metric(const ChartPoint& p, const GluingParams& params, const KahlerPotential& phi);

// Lambda contraction of beta (beta[j*n + k] is the (j,k) component, an m x m
// matrix) against g. Throws SingularError on a singular metric.
Mat lambda_contract(const Mat& g, const std::vector<Mat>& beta);
Complex lambda_contract(const Mat& g, const Mat& beta_scalar);

// max |d_l g_{jk} - d_j g_{lk}| of the glued metric at global point z, by
// fourth-order differences of the exact metric.
double kahler_closure_residual(const CPoint& z, const GluingParams& params, const KahlerPotential& phi,
                               double h = 1e-3);

// Radial description of the glued metric for U(n)-invariant bases. With
// s = log|z|^2 the metric is determined by P = dPhi/ds and Q = d^2Phi/ds^2
// (eigenvalues Q/|z|^2 radially and P/|z|^2 tangentially).
struct RadialMetricData {
  double P;
  double Q;
};
RadialMetricData glued_radial(double w, const GluingParams& params, const RadialPotential& phi);

// Sample a chart on a uniform grid of the (x1, x2) plane (y = 0) for debug dumps.
struct ChartSample {
  Point4 x;
  double potential;
  double min_eig;
};
std::vector<ChartSample> sample_chart(const GluingParams& params, const KahlerPotential& phi, Chart chart,
                                      int resolution);

}  // namespace hymglue
