// oracle.hpp
//
// Reference solutions computed along separate code paths from the solver.
//
// For a line bundle the rescaling h -> h e^{-2u} is the gauge increment
// a = e^u - 1, and the discrete modified equation becomes linear in u:
//
//   L u = c_bar - K(h),  (L u)_i = (2 / V_i) sum_e c_e (u_o - u_i),
//
// with c_bar the volume average of K(h) and u(q) fixed by the trace pinning.
// It is assembled as a symmetric graph Laplacian and solved by LDL^T.

#pragma once

#include "hymglue/scenario.hpp"
#include "hymglue/solver.hpp"

#include <string>
#include <vector>

namespace hymglue {

// Stores both sides of a comparison; deviations are always recomputed from them.
struct OracleReport {
  std::string id;
  std::string quantity;
  std::vector<double> main;
  std::vector<double> oracle;
  double tolerance = 0.0;

  double main_size() const;    // max |main|
  double oracle_size() const;  // max |oracle|
  double absolute_deviation() const;
  double relative_deviation() const;
  bool pass() const { return absolute_deviation() <= tolerance; }
};

struct AbelianSolution {
  RealVec u;
  RealVec a;          // e^u - 1
  double c_bar = 0;   // volume average of K(h)
  double pin = 0;     // u(q)
};

// Line metric given by log h_i on d's cells; u(q) = pin.
AbelianSolution abelian_solve(const FluxDiscretization& d, const RealVec& log_h, int q, double pin);

// Rank-1 scenario: pins tr a(q) = c_bar - target, the value forced by the modified equation.
AbelianSolution poisson_oracle(const Scenario& s, double target);

// Each diagonal block solved on its own. With M(a) = a + tr(a) Id / 2 on a
// diagonal a(q), block j carries x_j = kappa_j - (kappa_1 + kappa_2) / 4 at q.
std::vector<AbelianSolution> block_oracles(const Scenario& s, double target);

struct RefinementStudy {
  std::vector<int> cells;
  std::vector<double> self_deviation;  // sup |u_h - restrict(u_{h/2})| per level
  std::vector<double> ratios;          // successive self-deviation ratios
};
// Oracle solutions on 1, 2, 4, ... times the scenario's cell count.
RefinementStudy refinement_study(const ScenarioConfig& cfg, int levels = 3);

// {k : 0 <= k <= k_max} and {2 - 2n - k : 0 <= k <= k_max}, sorted.
std::vector<int> harmonic_degree_oracle(int n, int k_max);

// Solver vs oracle comparisons at a converged state.
OracleReport compare_line(const Solver& solver, const SolverState& st, double tol = 1e-6);
std::vector<OracleReport> compare_blocks(const Solver& solver, const SolverState& st, double block_tol = 1e-8,
                                         double tol = 1e-6);
OracleReport compare_flat(const Solver& solver, const SolverState& st, double tol = 1e-6);

}  // namespace hymglue
