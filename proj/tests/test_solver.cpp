#include "hymglue/solver.hpp"

#include <doctest.h>

using namespace hymglue;

namespace {

Scenario scenario(ScenarioId id, double eps = 1e-2) {
  ScenarioConfig cfg;
  cfg.id = id;
  cfg.epsilon = eps;
  return make_scenario(cfg);
}

}  // namespace

TEST_CASE("slope fit") {
  CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
}

TEST_CASE("Phi at zero is the curvature of the glued metric") {
  const Scenario s = scenario(ScenarioId::RadialBallLine);
  const Solver solver(s);
  const EndoField p = solver.phi(solver.zero());
  const EndoField k = s.curvature();
  for (std::size_t i = 0; i < p.size(); ++i) CHECK((p[i] - k[i]).norm() < 1e-12 * (1.0 + k[i].norm()));
}

TEST_CASE("linearization remainder is quadratic") {
  for (ScenarioId id : {ScenarioId::RadialBallLine, ScenarioId::Rank2GaugeFlat}) {
    const Scenario s = scenario(id);
    const Solver solver(s);
    const Solver::FdCheck fd = solver.linearization_fd_check(random_direction(s, 7), {1e-1, 1e-2, 1e-3});
    CHECK(fd.slope == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("fixed-point iteration converges on the line bundle") {
  const Scenario s = scenario(ScenarioId::RadialBallLine);
  const Solver solver(s);
  SolverOptions o;
  const SolverState st = solver.iterate(o);
  CHECK(st.converged);
  CHECK(st.final_residual < 1e-9);
  CHECK(st.monotone_residual);
  CHECK(std::abs(st.trace_q.real() - (s.c_eps - s.c0)) < 1e-8);
  // a* is a fixed point of N
  const EndoField n = solver.n_map(st.a, st.target);
  for (std::size_t i = 0; i < n.size(); ++i) CHECK((n[i] - st.a[i]).norm() < 1e-8);
}

TEST_CASE("rank-2 direct sum stays block diagonal") {
  const Scenario s = scenario(ScenarioId::Rank2Diag);
  const Solver solver(s);
  const SolverState st = solver.iterate(SolverOptions{});
  CHECK(st.converged);
  for (const Mat& a : st.a) {
    CHECK(std::abs(a(0, 1)) < 1e-12);
    CHECK(std::abs(a(1, 0)) < 1e-12);
  }
}

TEST_CASE("contraction ratio is small near zero") {
  const Scenario s = scenario(ScenarioId::RadialBallLine);
  const Solver solver(s);
  const double radius = 0.5 * std::pow(1e-2, 0.5);
  EndoField a1 = random_direction(s, 1), a2 = random_direction(s, 2);
  a1 = (radius / s.field_norm(a1, 2, -0.5)) * a1;
  a2 = (radius / s.field_norm(a2, 2, -0.5)) * a2;
  CHECK(solver.contraction_ratio(a1, a2, SolverOptions{}) < 0.5);
}

TEST_CASE("residual sweep reports every eps") {
  ScenarioConfig cfg;
  const ResidualSweep sw = residual_sweep(cfg, {1e-2, 0.0031622776601683794, 1e-3}, -0.5);
  REQUIRE(sw.rows.size() == 3);
  CHECK(sw.rows[2].n0_norm < sw.rows[0].n0_norm);
  CHECK(sw.rows[0].r_eps == doctest::Approx(0.1));
}

TEST_CASE("random directions are reproducible") {
  const Scenario s = scenario(ScenarioId::Rank2Diag);
  const EndoField a = random_direction(s, 3), b = random_direction(s, 3), c = random_direction(s, 4);
  double same = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = std::max(same, (a[i] - b[i]).norm());
    diff = std::max(diff, (a[i] - c[i]).norm());
    CHECK(h_hermitian_defect(a[i], s.disc.reference[i]) < 1e-12);
  }
  CHECK(same == 0.0);
  CHECK(diff > 0.0);
}
