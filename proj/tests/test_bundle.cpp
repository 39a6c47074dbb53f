#include "hymglue/bundle.hpp"

#include <doctest.h>

using namespace hymglue;

namespace {

Jet<4> radius_squared(const Point4& x) {
  Jet<4> w = 0.0;
  for (int i = 0; i < 4; ++i) w = w + Jet<4>::variable(x[i], i) * Jet<4>::variable(x[i], i);
  return w;
}

Mat pauli(int k) {
  Mat m(2, 2);
  if (k == 1) m << 0, 1, 1, 0;
  if (k == 2) m << 0, Complex(0, -1), Complex(0, 1), 0;
  if (k == 3) m << 1, 0, 0, -1;
  return m;
}

// exp of a non-commuting Hermitian combination, so the curvature is genuinely
// nonabelian.
MatJet twisted(const Point4& x) {
  const Jet<4> s1 = 0.3 * sin(Jet<4>::variable(x[0], 0)) + 0.2 * Jet<4>::variable(x[3], 3);
  const Jet<4> s2 = 0.25 * cos(Jet<4>::variable(x[1], 1) + Jet<4>::variable(x[2], 2));
  return exp(MatJet::scaled(s1, pauli(1)) + MatJet::scaled(s2, pauli(3)));
}

const Mat kEuclid = Mat::Identity(2, 2);

}  // namespace

TEST_CASE("constant metrics are flat") {
  Mat H(2, 2);
  H << 2.0, Complex(0.3, 0.1), Complex(0.3, -0.1), 1.0;
  const Curvature F = chern_curvature(MatJet::constant(H));
  for (const Mat& f : F.f11) CHECK(f.norm() < 1e-14);
  CHECK(F.f02.norm() < 1e-14);
}

TEST_CASE("exp(-|z|^2) has constant curvature 2") {
  const Point4 x(0.3, -0.2, 0.1, 0.4);
  const MatJet h = exp_scaled(-1.0 * radius_squared(x), Mat::Identity(1, 1));
  CHECK(hym_residual(chern_curvature(h), kEuclid, 2.0).norm() < 1e-12);
}

TEST_CASE("Chern curvature has no (0,2) part and is H-Hermitian") {
  const Point4 x(0.2, 0.1, -0.3, 0.25);
  const MatJet h = twisted(x);
  const Curvature F = chern_curvature(h);
  CHECK(F.f02.norm() < 1e-12);
  const Mat K = contract_curvature(F, kEuclid);
  CHECK(h_hermitian_defect(K, h.v) < 1e-12);
  // the nonabelian part is present
  CHECK((K * h.v - h.v * K).norm() > 1e-6);
}

TEST_CASE("gauge action by a scalar preserves the trace of the curvature") {
  const Point4 x(0.2, 0.1, -0.3, 0.25);
  const Jet<4> s = 0.4 * sin(Jet<4>::variable(x[0], 0) + 2.0 * Jet<4>::variable(x[3], 3));
  const MatJet H = twisted(x);
  const MatJet f = exp_scaled(s, Mat::Identity(2, 2));
  const Mat a = contract_curvature(curvature(gauge_act(f, H)), kEuclid);
  const Mat b = contract_curvature(chern_curvature(H * exp_scaled(-2.0 * s, Mat::Identity(2, 2))), kEuclid);
  CHECK(std::abs(a.trace() - b.trace()) < 1e-10);
}

TEST_CASE("normal frame kills the first derivatives at the centre") {
  const Point4 p(0.1, -0.05, 0.2, 0.0);
  const BundleMetricFn h = twisted;
  const MatJet n = normal_frame(h, p)(p);
  CHECK((n.v - Mat::Identity(2, 2)).norm() < 1e-12);
  for (const Mat& g : n.g) CHECK(g.norm() < 1e-12);
}

TEST_CASE("glued bundle metric matches H outside the neck") {
  const GluingParams p = GluingParams::make(1e-2, 2);
  const Point4 centre = Point4::Zero();
  const BundleMetricFn h = normal_frame(twisted, centre);
  const Point4 outer(0.3, 0.1, 0.0, 0.2);
  CHECK((glued_bundle_metric(outer, p, h).v - h(outer).v).norm() < 1e-14);
}

TEST_CASE("topological constant") {
  TopologicalData td;
  td.degree = 3.0;
  td.volume = 0.5;
  td.rank = 2;
  td.weights = {1.0};
  CHECK(topological_constant(td, 0.0) == doctest::Approx(2 * 3.0 / (2 * 0.5)));
  CHECK(topological_constant(td, 0.1) == doctest::Approx(2 * 3.0 / (2 * (0.5 - 0.01))));
  td.volume = 0.0;
  CHECK_THROWS_AS(topological_constant(td, 0.0), DomainError);
}
