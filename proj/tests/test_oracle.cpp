#include "hymglue/oracle.hpp"

#include "hymglue/weighted.hpp"

#include <doctest.h>

using namespace hymglue;

TEST_CASE("harmonic degrees reproduce the indicial set") {
  for (int n : {2, 3, 4}) {
    std::vector<int> h;
    for (int k : harmonic_degree_oracle(n, 20))
      if (k >= -10 && k <= 10) h.push_back(k);
    CHECK(h == indicial_roots(n, -10, 10));
  }
}

TEST_CASE("line-bundle solve matches the Poisson oracle") {
  ScenarioConfig cfg;
  const Scenario s = make_scenario(cfg);
  const Solver solver(s);
  const SolverState st = solver.iterate(SolverOptions{});
  const OracleReport r = compare_line(solver, st);
  CHECK(r.pass());
  CHECK(r.absolute_deviation() < 1e-10);
  CHECK(r.main_size() > 1e-3);
}

TEST_CASE("direct sum matches per-block oracles") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::Rank2Diag;
  const Scenario s = make_scenario(cfg);
  const Solver solver(s);
  const SolverState st = solver.iterate(SolverOptions{});
  const std::vector<OracleReport> r = compare_blocks(solver, st);
  REQUIRE(r.size() == 3);
  for (const OracleReport& x : r) CHECK(x.pass());
}

TEST_CASE("gauge-flat solve returns a flat metric") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::Rank2GaugeFlat;
  const Scenario s = make_scenario(cfg);
  const Solver solver(s);
  const OracleReport r = compare_flat(solver, solver.iterate(SolverOptions{}));
  CHECK(r.pass());
}

TEST_CASE("abelian solve on flat data returns zero") {
  ScenarioConfig cfg;
  cfg.id = ScenarioId::FlatTorusLine;
  cfg.fourier.clear();
  const Scenario s = make_scenario(cfg);
  const AbelianSolution a = abelian_solve(s.disc, RealVec::Zero(s.nodes()), s.q, 0.0);
  CHECK(a.u.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("oracle converges at second order under refinement") {
  ScenarioConfig cfg;
  cfg.dsigma = 0.08;
  const RefinementStudy rs = refinement_study(cfg, 3);
  REQUIRE(rs.ratios.size() == 1);
  CHECK(rs.ratios[0] > 3.5);
  CHECK_THROWS_AS(refinement_study(cfg, 2), DomainError);
}

TEST_CASE("report deviations") {
  OracleReport r;
  r.main = {1.0, -2.0};
  r.oracle = {1.0, -2.5};
  r.tolerance = 0.1;
  CHECK(r.main_size() == 2.0);
  CHECK(r.oracle_size() == 2.5);
  CHECK(r.absolute_deviation() == doctest::Approx(0.5));
  CHECK_FALSE(r.pass());
}
