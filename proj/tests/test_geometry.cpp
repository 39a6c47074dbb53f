#include "hymglue/geometry.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

using namespace hymglue;

namespace {

CPoint along(double r, double angle = 0.4) {
  return CPoint(Complex(r * std::cos(angle), 0.0), Complex(0.0, r * std::sin(angle)));
}

double min_eig(const Mat& g) { return Eigen::SelfAdjointEigenSolver<Mat>(g).eigenvalues().minCoeff(); }

}  // namespace

TEST_CASE("gluing radius") {
  CHECK(r_epsilon(1e-2, 2) == doctest::Approx(0.1));
  CHECK(r_epsilon(1e-3, 3) == doctest::Approx(std::pow(1e-3, 2.0 / 3.0)));
}

TEST_CASE("cutoff profile is a monotone step from 1 to 2") {
  for (CutoffKind kind : {CutoffKind::Smoothstep7, CutoffKind::Smoothstep5}) {
    const CutoffProfile g(kind);
    CHECK(g(0.5) == 0.0);
    CHECK(g(1.0) == 0.0);
    CHECK(g(2.0) == doctest::Approx(1.0));
    CHECK(g(3.0) == 1.0);
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double v = g(1.0 + i / 100.0);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
    // derivative against a central difference
    const double h = 1e-5, x = 1.37;
    CHECK(g.derivative(x, 1) == doctest::Approx((g(x + h) - g(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(std::isfinite(g.sampled_c4_norm()));
  }
}

TEST_CASE("smoothstep7 vanishes to third order at both ends") {
  const CutoffProfile g;
  for (int k = 1; k <= 3; ++k) {
    CHECK(std::abs(g.derivative(1.0, k)) < 1e-12);
    CHECK(std::abs(g.derivative(2.0, k)) < 1e-12);
  }
}

TEST_CASE("gluing parameters are validated") {
  CHECK_THROWS_AS(GluingParams::make(0.0, 2), DomainError);
  CHECK_THROWS_AS(GluingParams::make(1.5, 2), DomainError);
  CHECK_THROWS_AS(GluingParams::make(1e-2, 2, {BlowupPoint{CPoint::Zero(), -1.0}}), DomainError);
  CHECK_NOTHROW(GluingParams::make(1e-2, 2));
}

TEST_CASE("regions follow r_eps and 2 r_eps") {
  const GluingParams p = GluingParams::make(1e-2, 2);
  CHECK(classify(along(0.05), p).region == Region::Inner);
  CHECK(classify(along(0.15), p).region == Region::Neck);
  CHECK(classify(along(0.5), p).region == Region::Outer);
  const ChartPoint c = classify(along(0.15), p);
  CHECK((to_global_z(c, p) - along(0.15)).norm() < 1e-14);
  const auto [g1, g2] = cutoffs(c, p);
  CHECK(g1 + g2 == doctest::Approx(1.0));
}

TEST_CASE("glued potential branches meet at the interfaces") {
  const GluingParams p = GluingParams::make(1e-2, 2);
  const auto fs = [](const std::array<double, 4>& x) {
    const double w = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    return std::log1p(w) - w;
  };
  const CPoint zi = along(p.r_eps), zo = along(2.0 * p.r_eps);
  const std::array<double, 4> xi = {zi[0].real(), zi[0].imag(), zi[1].real(), zi[1].imag()};
  const std::array<double, 4> xo = {zo[0].real(), zo[0].imag(), zo[1].real(), zo[1].imag()};
  ChartPoint zeta;
  zeta.chart = Chart::InnerZeta;
  zeta.coords = zi / p.epsilon;
  CHECK(std::abs(glued_potential_local(xi, p, 0, fs) - p.epsilon * p.epsilon * burns_simanca_potential(zeta, 2)) <
        1e-15);
  CHECK(std::abs(glued_potential_local(xo, p, 0, fs) - (zo.squaredNorm() + fs(xo))) < 1e-15);
}

TEST_CASE("Burns-Simanca metric approaches the identity like |zeta|^-2") {
  const double d1 = (burns_simanca_metric(along(10.0)) - Mat::Identity(2, 2)).norm();
  const double d2 = (burns_simanca_metric(along(20.0)) - Mat::Identity(2, 2)).norm();
  CHECK(std::log2(d1 / d2) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(min_eig(burns_simanca_interior_metric(CPoint(Complex(0.0, 0.0), Complex(0.3, 0.1)))) > 0.0);
  CHECK_THROWS_AS(burns_simanca_metric(CPoint::Zero()), DomainError);
}

TEST_CASE("glued metric is Kahler and positive across the neck") {
  const GluingParams p = GluingParams::make(1e-2, 2);
  const KahlerPotential fs = base::fubini_study();
  for (double r : {0.03, 0.1, 0.13, 0.17, 0.2, 0.5}) {
    const Mat g = glued_metric(classify(along(r), p), p, fs);
    CHECK((g - g.adjoint()).norm() < 1e-12);
    CHECK(min_eig(g) > 0.0);
  }
  CHECK(kahler_closure_residual(along(0.15), p, fs) < 1e-6);
}

TEST_CASE("exact and sampled metrics agree") {
  const KahlerPotential fs = base::fubini_study();
  const Point4 x(0.3, -0.1, 0.2, 0.05);
  const std::function<Jet<4>(const Point4&)> full_jet = [&fs](const Point4& y) {
    Jet<4> w = fs.jet(y);
    for (int i = 0; i < 4; ++i) w = w + Jet<4>::variable(y[i], i) * Jet<4>::variable(y[i], i);
    return w;
  };
  const std::function<double(const Point4&)> full = [&fs](const Point4& y) { return fs.value(y) + y.squaredNorm(); };
  CHECK((metric_from_potential(full_jet, x) - metric_from_potential(full, x)).norm() < 1e-8);
}

TEST_CASE("Lambda of the Kahler form is n") {
  const GluingParams p = GluingParams::make(1e-2, 2);
  const Mat g = glued_metric(classify(along(0.15), p), p, base::fubini_study());
  std::vector<Mat> beta;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) beta.push_back(Mat::Constant(1, 1, g(j, k)));
  CHECK(std::abs(lambda_contract(g, beta)(0, 0) - 2.0) < 1e-12);
}
