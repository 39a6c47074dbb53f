// bundle.hpp
//
// Hermitian bundle metrics in a holomorphic frame, their Chern connections and
// curvature, the glued metric h_eps, the complex gauge action, HYM residuals
// and the topological constant.
//
// A metric is a Hermitian matrix H with h(s, t) = t* H s. Its Chern connection
// is theta_j = H^{-1} d_j H (a (1,0)-form); curvature components F_{jk} are the
// coefficients of dz_j ^ dzbar_k, so iLambda F = sum g^{kj} F_{jk}. With this
// convention h = exp(-|z|^2) on C^2 has iLambda F = 2 for the Euclidean metric.

#pragma once

#include "hymglue/geometry.hpp"
#include "hymglue/jet.hpp"
#include "hymglue/types.hpp"

#include <functional>
#include <vector>

namespace hymglue {

// Metric field with exact first and second derivatives at a point (local coords).
using BundleMetricFn = std::function<MatJet(const Point4&)>;

// Connection given pointwise with the first derivatives the curvature needs.
// alpha[j]: (1,0) part, beta[k]: (0,1) part; dbar_alpha[j][k] = dbar_k alpha_j,
// d_beta[k][j] = d_j beta_k, dbar_beta[k][l] = dbar_l beta_k.
struct ConnectionJet {
  std::array<Mat, 2> alpha;
  std::array<Mat, 2> beta;
  std::array<std::array<Mat, 2>, 2> dbar_alpha;
  std::array<std::array<Mat, 2>, 2> d_beta;
  std::array<std::array<Mat, 2>, 2> dbar_beta;
};

// Curvature F_{jk} (component j*2 + k) plus the (0,2) part F_{kl} (k < l).
struct Curvature {
  std::vector<Mat> f11;
  Mat f02;
};

ConnectionJet chern_connection(const MatJet& h);
Curvature chern_curvature(const MatJet& h);
Curvature curvature(const ConnectionJet& a);

// Second antiholomorphic derivative dbar_l dbar_k of a matrix jet.
Mat dzbar_dzbar(const MatJet& m, int l, int k);

// Complex gauge action of an H-Hermitian f:
// d_{A^f} = f o d_A o f^{-1} on the (1,0) part and f^{-1} o dbar_A o f on the
// (0,1) part. For A the Chern connection of H, A^f is the Chern connection of
// h(f^{-1}., f^{-1}.) = H f^{-2} conjugated by f. Throws SingularError if f is
// not invertible.
ConnectionJet gauge_act(const MatJet& f, const ConnectionJet& a, double tol = 1e-12);
ConnectionJet gauge_act(const MatJet& f, const MatJet& h, double tol = 1e-12);

// iLambda_g F - c Id.
Mat hym_residual(const Curvature& F, const Mat& g, double c);
inline Mat contract_curvature(const Curvature& F, const Mat& g) { return hym_residual(F, g, 0.0); }

// || H K - (H K)^* ||_max, zero when K is Hermitian with respect to H.
double h_hermitian_defect(const Mat& K, const Mat& H);

// h_eps: H outside 2 r_eps, gamma1 H + gamma2 Id in the neck, Id inside r_eps.
// `h` must already be in normal frame at the blowup point. Coordinates are
// global z (outer and neck points).
MatJet glued_bundle_metric(const Point4& z, const GluingParams& params, const BundleMetricFn& h);

// Frame change G = H(p)^{-1/2} exp(-sum z_j L_j) making G* H G = Id + O(|z-p|^2).
BundleMetricFn normal_frame(const BundleMetricFn& h, const Point4& p);

// Elementwise matrix exponential of a matrix jet by its power series.
MatJet exp(const MatJet& m);

// exp(s(x) B) for a scalar jet s and constant matrix B.
MatJet exp_scaled(const Jet<4>& s, const Mat& B);

struct TopologicalData {
  double degree = 0.0;   // integral of c1(E) . [omega]^{n-1}
  double volume = 1.0;   // integral of [omega]^n
  int rank = 1;
  int n = 2;
  std::vector<double> weights;  // a_i per blowup point
};

// n deg / (m vol_eps) with vol_eps = vol - sum (a_i eps)^n.
double topological_constant(const TopologicalData& td, double epsilon);

}  // namespace hymglue
