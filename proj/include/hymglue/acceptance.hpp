// acceptance.hpp
//
// The acceptance suite: nine property checks at desk scale, each producing a
// verdict, a one-line summary and a table of the measured values.

#pragma once

#include "hymglue/report.hpp"
#include "hymglue/scenario.hpp"

#include <string>
#include <vector>

namespace hymglue {

struct AcceptanceConfig {
  std::vector<double> epsilons = {0.031622776601683791, 1e-2, 0.0031622776601683794, 1e-3};
  double delta = -0.5;
  double alpha = 0.5;
  double dsigma = 0.02;
  double ball_constant = 1.0;
  int probes = 32;
  int contraction_pairs = 20;
  int fd_directions = 5;
  int random_fields = 20;
  int tensor_pairs = 10;
  unsigned seed = 20240601;
  std::vector<int> indicial_dimensions = {2, 3, 4};
  int indicial_window = 10;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  Table table;
};

CriterionResult check_indicial_roots(const AcceptanceConfig& c);
CriterionResult check_linearization(const AcceptanceConfig& c);
CriterionResult check_approximate_solution(const AcceptanceConfig& c);
CriterionResult check_uniform_invertibility(const AcceptanceConfig& c);
CriterionResult check_contraction(const AcceptanceConfig& c);
CriterionResult check_oracles(const AcceptanceConfig& c);
CriterionResult check_weighted_calculus(const AcceptanceConfig& c);
CriterionResult check_geometry(const AcceptanceConfig& c);
CriterionResult check_fixed_points(const AcceptanceConfig& c);

// Criteria by number (1..9); all of them when `which` is empty.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& c, const std::vector<int>& which = {});

// "[PASS] 3 approximate-solution scaling: ..."
std::string verdict_line(const CriterionResult& r);

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hymglue
