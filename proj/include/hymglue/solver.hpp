// solver.hpp
//
// Fixed-point solution of the modified HYM equation on a scenario grid. The
// iteration variable is the increment a with gauge transformation f = Id + a:
//
//   Phi(a)  = f^{-1} K(H f^{-2}) f
//   Q(a)    = Phi(a) - Phi(0) - Delta a
//   N(a)    = Delta~^{-1}(c Id - Phi(0) - Q(a))
//
// so that fixed points satisfy Phi(a) = c Id + M(a).

#pragma once

#include "hymglue/linear.hpp"
#include "hymglue/scenario.hpp"

#include <string>
#include <vector>

namespace hymglue {

struct SolverOptions {
  double delta = -0.5;
  double alpha = 0.5;
  double tol = 1e-9;
  int max_iter = 200;
  double ball_constant = 1.0;
  bool abort_on_ball_exit = false;  // otherwise ball membership is only recorded
  bool target_c_eps = false;  // target c_eps instead of c0
  double min_eigenvalue = 1e-6;
};

struct SolverState {
  EndoField a;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;    // weighted C^{0,alpha}_{delta-2}
  std::vector<double> difference_history;  // weighted C^{2,alpha}_delta
  std::vector<double> ratio_estimates;     // successive difference ratios
  double ball_radius = 0.0;
  std::vector<double> increment_norms;     // ||a||_{C^{2,alpha}_delta} per iterate
  int ball_exits = 0;
  double target = 0.0;
  Mat trace_pin;             // M(a) at q
  Complex trace_q = 0.0;     // tr a(q)
  double min_eig = 1.0;      // min eigenvalue of Id + a over nodes
  int damping_events = 0;
  bool monotone_residual = true;
  double residual_floor = 0.0;  // 10 x smallest weighted residual seen
  double final_residual = 0.0;  // sup |Phi(a) - c Id - M(a)|
};

class Solver {
 public:
  explicit Solver(const Scenario& s);

  const Scenario& scenario() const { return *scenario_; }
  const ModifiedOperator& op() const { return op_; }
  double target(const SolverOptions& o) const;

  EndoField phi(const EndoField& a) const;
  EndoField quadratic_remainder(const EndoField& a) const;
  EndoField n_map(const EndoField& a, double target) const;
  // Phi(a) - c Id - M(a) at every node.
  EndoField modified_residual(const EndoField& a, double target) const;

  SolverState iterate(const SolverOptions& o) const;

  double contraction_ratio(const EndoField& a1, const EndoField& a2, const SolverOptions& o) const;

  // Log-log slope of ||Phi(t a) - Phi(0) - t Delta a||_inf against t.
  struct FdCheck {
    std::vector<double> steps;
    std::vector<double> errors;
    double slope;
  };
  FdCheck linearization_fd_check(const EndoField& direction, const std::vector<double>& steps) const;

  EndoField zero() const;

 private:
  const Scenario* scenario_;
  ModifiedOperator op_;
  EndoField phi0_;
};

// Fixed-seed H-self-adjoint direction with unit sup norm: low cosine modes in
// sigma on radial grids, low Fourier modes on the torus.
EndoField random_direction(const Scenario& s, unsigned seed);

double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ResidualRow {
  double epsilon;
  double r_eps;
  double residual_norm;  // ||c0 Id - Phi(0)||_{C^{0,alpha}_{delta-2}}
  double n0_norm;        // ||N(0)||_{C^{2,alpha}_delta}
  // Weighted sups varrho^{2 - delta} |residual| by region.
  double inner;          // |z| <= eps, where varrho = eps
  double transition;     // eps < |z| < r_eps
  double neck;           // r_eps <= |z| <= 2 r_eps
  double outer;          // |z| > 2 r_eps
};
struct ResidualSweep {
  std::vector<ResidualRow> rows;
  double residual_exponent;
  double n0_exponent;
  double neck_exponent;
};
ResidualSweep residual_sweep(const ScenarioConfig& base, const std::vector<double>& epsilons, double delta,
                             double alpha = 0.5);

}  // namespace hymglue
