#include "config.hpp"

#include "hymglue/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace hymglue;
using namespace hymglue::cli;

namespace {

std::string write_temp(const std::string& text) {
  const std::string path = "test_cli_config.ini";
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("numbers with fractional exponents") {
  CHECK(parse_number("1e-2") == 1e-2);
  CHECK(parse_number("0.5") == 0.5);
  CHECK(parse_number("1e-1.5") == doctest::Approx(std::pow(10.0, -1.5)));
  CHECK(parse_number("2E-2.5") == doctest::Approx(2 * std::pow(10.0, -2.5)));
  CHECK_THROWS_AS(parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(parse_number("1e"), ConfigError);
  CHECK(parse_number_list("1e-1.5, 1e-2,1e-2.5").size() == 3);
}

TEST_CASE("windows") {
  CHECK(parse_window("-4..3") == std::pair<int, int>{-4, 3});
  CHECK_THROWS_AS(parse_window("3..-4"), ConfigError);
  CHECK_THROWS_AS(parse_window("3"), ConfigError);
}

TEST_CASE("delta must lie strictly inside (2 - 2n, 0)") {
  RunConfig c;
  CHECK_NOTHROW(validate(c));
  c.delta = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.delta = -2.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.delta = -1.9;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("eps lists must be strictly decreasing and small enough") {
  RunConfig c;
  c.epsilons = {1e-2, 1e-2};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.epsilons = {1e-3, 1e-2};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.epsilons = {0.5};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.epsilons = {1e-2, 1e-3};
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("overrides by full and short key") {
  RunConfig c;
  apply_override(c, "scenario", "rank2-diag");
  apply_override(c, "eps", "1e-1.5,1e-2");
  apply_override(c, "solver.tol", "1e-8");
  apply_override(c, "ball-constant", "2");
  CHECK(c.scenario.id == ScenarioId::Rank2Diag);
  CHECK(c.epsilons.size() == 2);
  CHECK(c.tol == 1e-8);
  CHECK(c.ball_constant == 2.0);
  CHECK_THROWS_AS(apply_override(c, "nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "scenario", "mobius-strip"), ConfigError);
}

TEST_CASE("ini sections") {
  RunConfig c;
  load_ini(c, write_temp("[scenario]\nid = rank2-gauge-flat\ndsigma = 0.04\n[sweep]\neps = 1e-2, 1e-3\ndelta = -1\n"));
  CHECK(c.scenario.id == ScenarioId::Rank2GaugeFlat);
  CHECK(c.scenario.dsigma == 0.04);
  CHECK(c.epsilons == std::vector<double>{1e-2, 1e-3});
  CHECK(c.delta == -1.0);
  CHECK_THROWS_AS(load_ini(c, write_temp("[sweep]\nbogus = 1\n")), ConfigError);
  CHECK_THROWS_AS(load_ini(c, write_temp("[sweep]\ndelta = x\n")), ConfigError);
  CHECK_THROWS_AS(load_ini(c, write_temp("[sweep\n")), ConfigError);
  std::remove("test_cli_config.ini");
}

TEST_CASE("CSV quoting") {
  Table t;
  t.columns = {"a", "b"};
  t.add({"1,5", "say \"hi\""});
  CHECK(to_csv(t) == "a,b\r\n\"1,5\",\"say \"\"hi\"\"\"\r\n");
  CHECK_THROWS_AS(t.add({"only one"}), DomainError);
  CHECK(cell(0.1) == "0.1");
  CHECK(cell(true) == "true");
}

TEST_CASE("SHA-256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
