#include "hymglue/bundle.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace hymglue {

namespace {

const char* kModule = "bundle";

Mat checked_inverse(const Mat& m, double tol, const char* what) {
  Eigen::FullPivLU<Mat> lu(m);
  const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!lu.isInvertible() || smallest <= tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw SingularError(kModule, what);
  return lu.inverse();
}

ConnectionJet zero_connection(int m) {
  ConnectionJet a;
  const Mat z = Mat::Zero(m, m);
  for (int j = 0; j < 2; ++j) {
    a.alpha[j] = z;
    a.beta[j] = z;
    for (int k = 0; k < 2; ++k) {
      a.dbar_alpha[j][k] = z;
      a.d_beta[j][k] = z;
      a.dbar_beta[j][k] = z;
    }
  }
  return a;
}

}  // namespace

Mat dzbar_dzbar(const MatJet& m, int l, int k) {
  return 0.25 * (m.h[2 * l][2 * k] + I_unit * m.h[2 * l][2 * k + 1] + I_unit * m.h[2 * l + 1][2 * k] -
                 m.h[2 * l + 1][2 * k + 1]);
}

ConnectionJet chern_connection(const MatJet& h) {
  const Mat hi = checked_inverse(h.v, 1e-14, "bundle metric is singular");
  ConnectionJet a = zero_connection(h.rows());
  for (int j = 0; j < 2; ++j) {
    const Mat dj = h.dz(j);
    a.alpha[j] = hi * dj;
    for (int k = 0; k < 2; ++k) a.dbar_alpha[j][k] = -hi * h.dzbar(k) * hi * dj + hi * h.dz_dzbar(j, k);
  }
  return a;
}

Curvature curvature(const ConnectionJet& a) {
  Curvature F;
  F.f11.resize(4);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      F.f11[j * 2 + k] = a.d_beta[k][j] - a.dbar_alpha[j][k] + a.alpha[j] * a.beta[k] - a.beta[k] * a.alpha[j];
  F.f02 = a.dbar_beta[1][0] - a.dbar_beta[0][1] + a.beta[0] * a.beta[1] - a.beta[1] * a.beta[0];
  return F;
}

Curvature chern_curvature(const MatJet& h) { return curvature(chern_connection(h)); }

ConnectionJet gauge_act(const MatJet& f, const ConnectionJet& a, double tol) {
  const Mat fi = checked_inverse(f.v, tol, "gauge transformation is not invertible");
  const Mat& fv = f.v;
  ConnectionJet out = zero_connection(f.rows());
  std::array<Mat, 2> df, dbf, d_fi, db_fi;
  for (int j = 0; j < 2; ++j) {
    df[j] = f.dz(j);
    dbf[j] = f.dzbar(j);
    d_fi[j] = -fi * df[j] * fi;
    db_fi[j] = -fi * dbf[j] * fi;
  }
  for (int j = 0; j < 2; ++j) {
    out.alpha[j] = fv * a.alpha[j] * fi - df[j] * fi;
    out.beta[j] = fi * a.beta[j] * fv + fi * dbf[j];
  }
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      out.dbar_alpha[j][k] = dbf[k] * a.alpha[j] * fi + fv * a.dbar_alpha[j][k] * fi + fv * a.alpha[j] * db_fi[k] -
                             f.dz_dzbar(j, k) * fi - df[j] * db_fi[k];
      // d_beta[k][j] = d_j beta'_k
      out.d_beta[k][j] = d_fi[j] * a.beta[k] * fv + fi * a.d_beta[k][j] * fv + fi * a.beta[k] * df[j] +
                         d_fi[j] * dbf[k] + fi * f.dz_dzbar(j, k);
    }
  }
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      out.dbar_beta[k][l] = db_fi[l] * a.beta[k] * fv + fi * a.dbar_beta[k][l] * fv + fi * a.beta[k] * dbf[l] +
                            db_fi[l] * dbf[k] + fi * dzbar_dzbar(f, l, k);
  return out;
}

ConnectionJet gauge_act(const MatJet& f, const MatJet& h, double tol) {
  return gauge_act(f, chern_connection(h), tol);
}

Mat hym_residual(const Curvature& F, const Mat& g, double c) {
  const Mat gi = checked_inverse(g, 1e-14, "Kahler metric is singular");
  const int m = static_cast<int>(F.f11[0].rows());
  Mat K = Mat::Zero(m, m);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) K += gi(k, j) * F.f11[j * 2 + k];
  return K - c * Mat::Identity(m, m);
}

double h_hermitian_defect(const Mat& K, const Mat& H) {
  const Mat hk = H * K;
  return (hk - hk.adjoint()).cwiseAbs().maxCoeff();
}

MatJet glued_bundle_metric(const Point4& z, const GluingParams& params, const BundleMetricFn& h) {
  const ChartPoint cp = classify(to_complex(z), params);
  const std::size_t i = cp.point_index;
  const Point4 local = z - to_real(params.points[i].center);
  const double r = params.local_r(i);
  if (cp.region == Region::Outer) return h(local);
  const MatJet probe = h(local);
  const Mat id = Mat::Identity(probe.rows(), probe.rows());
  if (cp.region == Region::Inner) return MatJet::constant(id);
  Jet<4> w(0.0);
  for (int a = 0; a < 4; ++a) {
    const Jet<4> xa = Jet<4>::variable(local[a], a);
    w = w + xa * xa;
  }
  const Jet<4> g1 = params.cutoff(sqrt(w) / r);
  const MatJet glued = MatJet::scaled(g1, id) * probe + MatJet::scaled(1.0 - g1, id);
  if (min_eigenvalue(glued.v) <= 1e-10) throw PositivityError(kModule, "glued bundle metric lost positivity in the neck");
  return glued;
}

MatJet exp(const MatJet& m) {
  double nrm = m.v.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  const MatJet x = Complex(std::ldexp(1.0, -squarings)) * m;
  const int k = m.rows();
  MatJet sum = MatJet::constant(Mat::Identity(k, k));
  MatJet term = sum;
  for (int p = 1; p <= 24; ++p) {
    term = Complex(1.0 / p) * (term * x);
    sum = sum + term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

MatJet exp_scaled(const Jet<4>& s, const Mat& B) {
  const Mat E = (s.v * B).exp();
  const int k = static_cast<int>(B.rows());
  MatJet out(k);
  out.v = E;
  const Mat BE = B * E;
  const Mat BBE = B * BE;
  for (int a = 0; a < 4; ++a) {
    out.g[a] = s.g[a] * BE;
    for (int b = 0; b < 4; ++b) out.h[a][b] = s.h(a, b) * BE + s.g[a] * s.g[b] * BBE;
  }
  return out;
}

BundleMetricFn normal_frame(const BundleMetricFn& h, const Point4& p) {
  const MatJet hp = h(p);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hp.v));
  if (es.eigenvalues().minCoeff() <= 1e-10) throw PositivityError(kModule, "bundle metric not positive at the blowup point");
  const Mat S = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  std::array<Mat, 2> L;
  for (int j = 0; j < 2; ++j) L[j] = S * hp.dz(j) * S;
  return [h, p, S, L](const Point4& x) {
    const int k = static_cast<int>(S.rows());
    // M = -sum (z_j - p_j) L_j as a matrix jet in the real coordinates.
    MatJet M(k);
    for (int j = 0; j < 2; ++j) {
      const Complex zj(x[2 * j] - p[2 * j], x[2 * j + 1] - p[2 * j + 1]);
      M.v -= zj * L[j];
      M.g[2 * j] -= L[j];
      M.g[2 * j + 1] -= I_unit * L[j];
    }
    const MatJet G = MatJet::constant(S) * exp(M);
    return adjoint(G) * h(x) * G;
  };
}

double topological_constant(const TopologicalData& td, double epsilon) {
  double vol = td.volume;
  if (epsilon > 0.0)
    for (double a : td.weights) vol -= std::pow(a * epsilon, td.n);
  if (!(std::abs(vol) > 0.0)) throw DomainError(kModule, "zero volume");
  if (td.rank < 1) throw DomainError(kModule, "rank must be positive");
  return td.n * td.degree / (td.rank * vol);
}

}  // namespace hymglue
