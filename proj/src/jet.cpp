#include "hymglue/jet.hpp"
#include "hymglue/types.hpp"

#include <Eigen/Eigenvalues>

namespace hymglue {

double min_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

MatJet operator+(const MatJet& a, const MatJet& b) {
  MatJet r(a.rows());
  r.v = a.v + b.v;
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i] + b.g[i];
    for (int j = 0; j < 4; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
  }
  return r;
}

MatJet operator-(const MatJet& a, const MatJet& b) { return a + std::complex<double>(-1.0) * b; }

MatJet operator*(std::complex<double> s, const MatJet& a) {
  MatJet r(a.rows());
  r.v = s * a.v;
  for (int i = 0; i < 4; ++i) {
    r.g[i] = s * a.g[i];
    for (int j = 0; j < 4; ++j) r.h[i][j] = s * a.h[i][j];
  }
  return r;
}

MatJet operator*(const MatJet& a, const MatJet& b) {
  MatJet r(a.rows());
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < 4; ++j)
      r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
  }
  return r;
}

MatJet inverse(const MatJet& a) {
  MatJet r(a.rows());
  const Eigen::MatrixXcd inv = a.v.inverse();
  r.v = inv;
  for (int i = 0; i < 4; ++i) r.g[i] = -inv * a.g[i] * inv;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r.h[i][j] = inv * (a.g[i] * inv * a.g[j] + a.g[j] * inv * a.g[i] - a.h[i][j]) * inv;
  return r;
}

MatJet adjoint(const MatJet& a) {
  MatJet r(a.rows());
  r.v = a.v.adjoint();
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i].adjoint();
    for (int j = 0; j < 4; ++j) r.h[i][j] = a.h[i][j].adjoint();
  }
  return r;
}

}  // namespace hymglue
