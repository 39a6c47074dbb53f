#include "hymglue/linear.hpp"

#include <doctest.h>

using namespace hymglue;

namespace {

Jet<4> var(const Point4& x, int i) { return Jet<4>::variable(x[i], i); }

Mat pauli1() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli3() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

double max_diff(const EndoField& a, const EndoField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace

TEST_CASE("flat Laplacian of |z|^2 Id is 4 Id") {
  const Point4 x(0.1, 0.2, -0.3, 0.4);
  Jet<4> w = 0.0;
  for (int i = 0; i < 4; ++i) w = w + var(x, i) * var(x, i);
  const MatJet psi = MatJet::scaled(w, Mat::Identity(2, 2));
  const MatJet h = MatJet::constant(Mat::Identity(2, 2));
  // 2 d dbar |z|^2 = 2 per direction, two directions
  CHECK((laplacian_pointwise(psi, h, Mat::Identity(2, 2)) - 4.0 * Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("full and local forms agree at the centre of a normal frame") {
  const Point4 p = Point4::Zero();
  const BundleMetricFn raw = [](const Point4& y) {
    return exp(MatJet::scaled(0.3 * var(y, 0) + 0.2 * var(y, 0) * var(y, 2), pauli1()) +
               MatJet::scaled(0.2 * var(y, 3) * var(y, 3) - 0.1 * var(y, 1), pauli3()));
  };
  const MatJet h = normal_frame(raw, p)(p);
  const MatJet psi = MatJet::scaled(sin(var(p, 0) + 0.5) * cos(var(p, 2) - 0.3), pauli1()) +
                     MatJet::scaled(var(p, 1) * var(p, 3) + 0.7, pauli3());
  Mat g(2, 2);
  g << 1.2, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.9;
  CHECK((laplacian_pointwise(psi, h, g) - laplacian_local_form(psi, h, g)).norm() < 1e-10);
}

TEST_CASE("modified operator is invertible and the solve inverts apply") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::Rank2Diag;
  cfg.epsilon = 1e-2;
  const Scenario s = make_scenario(cfg);
  const ModifiedOperator op = assemble_modified(s);
  CHECK(op.kernel.size() == 3);
  const EndoField g = probe_fields(s, -0.5, 3).back();
  const EndoField x = solve_modified(op, g);
  CHECK(max_diff(op.apply(x), g) < 1e-6 * max_diff(g, EndoField(g.size(), Mat::Zero(2, 2))));
  CHECK(smallest_singular_value(op) > 0.1);
}

TEST_CASE("parallel constants of a line bundle are empty") {
  ScenarioConfig cfg;
  const Scenario s = make_scenario(cfg);
  CHECK(s.parallel.empty());
  CHECK(parallel_constants(s.disc, linearization(s.disc)).empty());
}

TEST_CASE("inverse bound is finite and positive") {
  ScenarioConfig cfg;
  const Scenario s = make_scenario(cfg);
  const InverseBound b = inverse_bound(s, assemble_modified(s), -0.5, 8);
  CHECK(b.estimate > 0.0);
  CHECK(std::isfinite(b.estimate));
  CHECK(b.sigma_min > 0.0);
}

TEST_CASE("triplet dump lists every nonzero") {
  SparseMat m(2, 2);
  m.insert(0, 1) = Complex(1.5, 0.0);
  m.insert(1, 0) = Complex(0.0, -2.0);
  const std::string t = triplets_text(m);
  CHECK(t.find("1.5") != std::string::npos);
  CHECK(t.find("-2") != std::string::npos);
}
