// config.hpp
//
// Run configuration for the hymglue command line: an ini file with one section
// per module, overridden by `--key value` flags (key = section.name or name).

#pragma once

#include "hymglue/acceptance.hpp"
#include "hymglue/scenario.hpp"
#include "hymglue/solver.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hymglue::cli {

// Thrown for anything that should exit with code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ScenarioConfig scenario;
  int n = 2;
  int rank = 1;  // derived from the scenario, checked if given
  std::vector<double> epsilons = {0.031622776601683791, 1e-2, 0.0031622776601683794, 1e-3};
  double delta = -0.5;
  int k = 2;
  double alpha = 0.5;
  double ball_constant = 1.0;
  double tol = 1e-9;
  int max_iter = 200;
  unsigned seed = 20240601;
  int probes = 32;
  int pairs = 20;
  int directions = 5;
  int indicial_lo = -10;
  int indicial_hi = 10;
  std::vector<int> criteria;  // accept: empty means all
  std::string output = "hymglue-out";

  SolverOptions solver_options() const;
  AcceptanceConfig acceptance() const;
};

// "1e-2", "0.01" and fractional exponents such as "1e-1.5" (= 10^-1.5).
double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);
// "a..b" with integers a <= b.
std::pair<int, int> parse_window(const std::string& text);

// Section "scenario", "sweep", "solver", "acceptance", "indicial" or "output".
void load_ini(RunConfig& c, const std::string& path);
void apply_override(RunConfig& c, const std::string& key, const std::string& value);
void validate(const RunConfig& c);

}  // namespace hymglue::cli
