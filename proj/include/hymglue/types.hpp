// types.hpp
//
// Common aliases and error types shared by every module.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hymglue {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Point4 = Eigen::Vector4d;    // (x1, y1, x2, y2) real coordinates on C^2
using CPoint = Eigen::Vector2cd;   // (z1, z2)

inline constexpr Complex I_unit{0.0, 1.0};

// Base of all library errors. `module` names where the failure was raised so
// the CLI can report provenance.
class Error : public std::runtime_error {
public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

private:
  std::string module_;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class PositivityError : public Error {
public:
  using Error::Error;
};

class UnsupportedDimensionError : public Error {
public:
  using Error::Error;
};

class RegionError : public Error {
public:
  using Error::Error;
};

class SingularError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

inline CPoint to_complex(const Point4& x) {
  return CPoint(Complex(x[0], x[1]), Complex(x[2], x[3]));
}

inline Point4 to_real(const CPoint& z) {
  return Point4(z[0].real(), z[0].imag(), z[1].real(), z[1].imag());
}

// Hermitian part (M + M*)/2.
inline Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Mat& m);

}  // namespace hymglue
