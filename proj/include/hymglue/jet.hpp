// jet.hpp
//
// Second-order forward-mode differentiation. Jet<N> carries a value together
// with its gradient and Hessian in N real variables; MatJet does the same for
// complex matrix-valued quantities (metrics, gauge transformations).
//
// Potentials and metrics are written as templates on the scalar type, so the
// same code evaluates plain doubles or exact derivatives.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>

namespace hymglue {

template <int N>
struct Jet {
  using Grad = Eigen::Matrix<double, N, 1>;
  using Hess = Eigen::Matrix<double, N, N>;

  double v = 0.0;
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit constants are intended
  Jet(double value, const Grad& grad, const Hess& hess) : v(value), g(grad), h(hess) {}

  static Jet variable(double value, int index) {
    Jet j(value);
    j.g[index] = 1.0;
    return j;
  }
};

// Chain rule for a scalar function with f, f', f'' at x.v
template <int N>
Jet<N> chain(const Jet<N>& x, double f0, double f1, double f2) {
  return Jet<N>(f0, f1 * x.g, f1 * x.h + f2 * x.g * x.g.transpose());
}

template <int N> Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
template <int N> Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }
template <int N> Jet<N> operator-(const Jet<N>& a) { return {-a.v, -a.g, -a.h}; }
template <int N> Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g,
          a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}
template <int N> Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  const double iv = 1.0 / b.v;
  return a * chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}
template <int N> Jet<N> operator+(const Jet<N>& a, double b) { return {a.v + b, a.g, a.h}; }
template <int N> Jet<N> operator+(double b, const Jet<N>& a) { return a + b; }
template <int N> Jet<N> operator-(const Jet<N>& a, double b) { return {a.v - b, a.g, a.h}; }
template <int N> Jet<N> operator-(double b, const Jet<N>& a) { return {b - a.v, -a.g, -a.h}; }
template <int N> Jet<N> operator*(const Jet<N>& a, double b) { return {a.v * b, a.g * b, a.h * b}; }
template <int N> Jet<N> operator*(double b, const Jet<N>& a) { return a * b; }
template <int N> Jet<N> operator/(const Jet<N>& a, double b) { return a * (1.0 / b); }
template <int N> Jet<N> operator/(double b, const Jet<N>& a) { return Jet<N>(b) / a; }

template <int N> Jet<N> sqrt(const Jet<N>& x) {
  const double s = std::sqrt(x.v);
  return chain(x, s, 0.5 / s, -0.25 / (s * x.v));
}
template <int N> Jet<N> log(const Jet<N>& x) { return chain(x, std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v)); }
template <int N> Jet<N> sin(const Jet<N>& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return chain(x, s, c, -s);
}
template <int N> Jet<N> cos(const Jet<N>& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return chain(x, c, -s, -c);
}
template <int N> Jet<N> exp(const Jet<N>& x) {
  const double e = std::exp(x.v);
  return chain(x, e, e, e);
}
template <int N> Jet<N> pow(const Jet<N>& x, double p) {
  const double f = std::pow(x.v, p);
  return chain(x, f, p * f / x.v, p * (p - 1.0) * f / (x.v * x.v));
}

inline double value_of(double x) { return x; }
template <int N> double value_of(const Jet<N>& x) { return x.v; }

// Complex matrix-valued jet in 4 real variables (x1, y1, x2, y2).
struct MatJet {
  Eigen::MatrixXcd v;
  std::array<Eigen::MatrixXcd, 4> g;
  std::array<std::array<Eigen::MatrixXcd, 4>, 4> h;

  explicit MatJet(int m = 1) : v(Eigen::MatrixXcd::Zero(m, m)) {
    for (int a = 0; a < 4; ++a) {
      g[a] = Eigen::MatrixXcd::Zero(m, m);
      for (int b = 0; b < 4; ++b) h[a][b] = Eigen::MatrixXcd::Zero(m, m);
    }
  }

  int rows() const { return static_cast<int>(v.rows()); }

  static MatJet constant(const Eigen::MatrixXcd& m) {
    MatJet j(static_cast<int>(m.rows()));
    j.v = m;
    return j;
  }

  // Scalar jet times a constant matrix.
  static MatJet scaled(const Jet<4>& s, const Eigen::MatrixXcd& m) {
    MatJet j(static_cast<int>(m.rows()));
    j.v = s.v * m;
    for (int a = 0; a < 4; ++a) {
      j.g[a] = s.g[a] * m;
      for (int b = 0; b < 4; ++b) j.h[a][b] = s.h(a, b) * m;
    }
    return j;
  }

  // Complex holomorphic / antiholomorphic derivative along z_j (j = 0, 1):
  // d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2.
  Eigen::MatrixXcd dz(int j) const { return 0.5 * (g[2 * j] - std::complex<double>(0, 1) * g[2 * j + 1]); }
  Eigen::MatrixXcd dzbar(int j) const { return 0.5 * (g[2 * j] + std::complex<double>(0, 1) * g[2 * j + 1]); }
  Eigen::MatrixXcd dz_dzbar(int j, int k) const {
    const std::complex<double> i(0, 1);
    return 0.25 * (h[2 * j][2 * k] + i * h[2 * j][2 * k + 1] - i * h[2 * j + 1][2 * k] + h[2 * j + 1][2 * k + 1]);
  }
  Eigen::MatrixXcd dz_dz(int j, int k) const {
    const std::complex<double> i(0, 1);
    return 0.25 * (h[2 * j][2 * k] - i * h[2 * j][2 * k + 1] - i * h[2 * j + 1][2 * k] - h[2 * j + 1][2 * k + 1]);
  }
};

MatJet operator+(const MatJet& a, const MatJet& b);
MatJet operator-(const MatJet& a, const MatJet& b);
MatJet operator*(const MatJet& a, const MatJet& b);
MatJet operator*(std::complex<double> s, const MatJet& a);
MatJet inverse(const MatJet& a);
MatJet adjoint(const MatJet& a);

}  // namespace hymglue
