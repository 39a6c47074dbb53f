#include "hymglue/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace hymglue {

namespace {

const char* kModule = "solver";

double min_eigenvalue_shifted(const EndoField& a) {
  double m = std::numeric_limits<double>::infinity();
  for (const Mat& x : a) {
    const Mat f = Mat::Identity(x.rows(), x.cols()) + x;
    m = std::min(m, Eigen::ComplexEigenSolver<Mat>(f, false).eigenvalues().real().minCoeff());
  }
  return m;
}

}  // namespace

Solver::Solver(const Scenario& s) : scenario_(&s), op_(assemble_modified(s)) { phi0_ = phi_field(s.disc, zero()); }

EndoField Solver::zero() const { return EndoField(op_.nodes, Mat::Zero(op_.rank, op_.rank)); }

double Solver::target(const SolverOptions& o) const { return o.target_c_eps ? scenario_->c_eps : scenario_->c0; }

EndoField Solver::phi(const EndoField& a) const { return phi_field(scenario_->disc, a); }

EndoField Solver::quadratic_remainder(const EndoField& a) const {
  return phi(a) - phi0_ - op_.apply_unmodified(a);
}

EndoField Solver::n_map(const EndoField& a, double target) const {
  const Mat id = Mat::Identity(op_.rank, op_.rank);
  EndoField rhs = quadratic_remainder(a);
  for (int i = 0; i < op_.nodes; ++i) rhs[i] = target * id - phi0_[i] - rhs[i];
  return h_hermitian_part(solve_modified(op_, rhs), op_.reference);
}

EndoField Solver::modified_residual(const EndoField& a, double target) const {
  EndoField r = phi(a);
  const Mat shift = target * Mat::Identity(op_.rank, op_.rank) + op_.modification(a[op_.q]);
  for (Mat& x : r) x -= shift;
  return r;
}

SolverState Solver::iterate(const SolverOptions& o) const {
  const Scenario& s = *scenario_;
  if (!(o.delta > 2.0 - 2.0 * s.n && o.delta < 0.0))
    throw DomainError(kModule, "delta must lie in (2 - 2n, 0)");
  SolverState st;
  st.target = target(o);
  st.ball_radius = o.ball_constant * std::pow(s.config.epsilon, -o.delta);
  st.a = zero();
  double previous_diff = 0.0;
  for (int it = 1; it <= o.max_iter; ++it) {
    EndoField next = n_map(st.a, st.target);
    double lam = min_eigenvalue_shifted(next);
    while (lam < o.min_eigenvalue) {
      ++st.damping_events;
      next = st.a + 0.5 * (next - st.a);
      lam = min_eigenvalue_shifted(next);
      if (st.damping_events > 60) throw PositivityError(kModule, "damping could not keep Id + a positive");
    }
    const double diff = s.field_norm(next - st.a, 2, o.delta, o.alpha);
    st.a = next;
    st.iterations = it;
    st.min_eig = lam;
    st.increment_norms.push_back(s.field_norm(st.a, 2, o.delta, o.alpha));
    if (s.radial() && st.increment_norms.back() > st.ball_radius) {
      ++st.ball_exits;
      if (o.abort_on_ball_exit)
        throw ConvergenceError(kModule, "iterate left the ball of radius " + std::to_string(st.ball_radius) +
                                            " after " + std::to_string(it) + " iterations");
    }
    const double res = s.field_norm(modified_residual(st.a, st.target), 0, o.delta - 2.0, o.alpha);
    st.residual_history.push_back(res);
    st.difference_history.push_back(diff);
    if (previous_diff > 0.0) st.ratio_estimates.push_back(diff / previous_diff);
    previous_diff = diff;
    if (!std::isfinite(diff)) throw ConvergenceError(kModule, "iteration diverged");
    if (diff < o.tol) {
      st.converged = true;
      break;
    }
  }
  if (!st.converged)
    throw ConvergenceError(kModule, "no convergence after " + std::to_string(o.max_iter) + " iterations");
  // Increases once the history sits at its roundoff plateau are not counted.
  const auto& h = st.residual_history;
  st.residual_floor = 10.0 * *std::min_element(h.begin(), h.end());
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] * (1.0 + 1e-6) && h[i - 1] > st.residual_floor) st.monotone_residual = false;
  st.trace_q = st.a[op_.q].trace();
  st.trace_pin = op_.modification(st.a[op_.q]);
  st.final_residual = sup_norm(modified_residual(st.a, st.target));
  return st;
}

double Solver::contraction_ratio(const EndoField& a1, const EndoField& a2, const SolverOptions& o) const {
  const Scenario& s = *scenario_;
  const double den = s.field_norm(a1 - a2, 2, o.delta, o.alpha);
  if (!(den > 0.0)) throw DomainError(kModule, "contraction ratio needs two distinct increments");
  const double t = target(o);
  return s.field_norm(n_map(a1, t) - n_map(a2, t), 2, o.delta, o.alpha) / den;
}

Solver::FdCheck Solver::linearization_fd_check(const EndoField& direction, const std::vector<double>& steps) const {
  if (steps.size() < 2) throw DomainError(kModule, "need at least two steps");
  FdCheck out;
  out.steps = steps;
  const EndoField lin = op_.apply_unmodified(direction);
  std::vector<double> lx, ly;
  for (double t : steps) {
    if (!(t > 1e-12)) throw DomainError(kModule, "step underflow");
    const double e = sup_norm(phi(t * direction) - phi0_ - t * lin);
    out.errors.push_back(e);
    lx.push_back(std::log(t));
    ly.push_back(std::log(std::max(e, 1e-300)));
  }
  out.slope = fit_slope(lx, ly);
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError(kModule, "slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

EndoField random_direction(const Scenario& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  const int m = s.rank;
  auto herm = [&]() {
    Mat r(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r(i, j) = Complex(nd(rng), nd(rng));
    return Mat(0.5 * (r + r.adjoint()));
  };
  EndoField f(s.nodes(), Mat::Zero(m, m));
  if (s.grid) {
    std::vector<Mat> c(7);
    for (Mat& x : c) x = herm();
    for (int i = 0; i < s.nodes(); ++i)
      for (int k = 0; k <= 6; ++k) f[i] += std::cos(k * M_PI * s.grid->sigma[i] / s.grid->L) * c[k];
  } else {
    std::vector<std::pair<Point4, Mat>> modes;
    for (int k = 0; k < 4; ++k) {
      Point4 v;
      for (int a = 0; a < 4; ++a) v[a] = std::floor(3.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng)) - 1.0;
      modes.emplace_back(v, herm());
    }
    for (int i = 0; i < s.nodes(); ++i) {
      const Point4 x = s.torus->node(i);
      for (const auto& [v, c] : modes) f[i] += std::cos(v.dot(x)) * c;
    }
  }
  f = h_hermitian_part(f, s.disc.reference);
  return (1.0 / sup_norm(f)) * f;
}

ResidualSweep residual_sweep(const ScenarioConfig& base, const std::vector<double>& epsilons, double delta,
                             double alpha) {
  if (epsilons.size() < 3) throw DomainError(kModule, "residual sweep needs at least three epsilons");
  ResidualSweep out;
  for (double eps : epsilons) {
    ScenarioConfig cfg = base;
    cfg.epsilon = eps;
    const Scenario s = make_scenario(cfg);
    if (!s.radial()) throw DomainError(kModule, "residual sweep needs a glued scenario");
    if (!(delta > 2.0 - 2.0 * s.n && delta < 0.0)) throw DomainError(kModule, "delta must lie in (2 - 2n, 0)");
    const Solver solver(s);
    const Mat id = Mat::Identity(s.rank, s.rank);
    EndoField R = solver.phi(solver.zero());
    for (Mat& x : R) x = s.c0 * id - x;
    ResidualRow row{};
    row.epsilon = eps;
    row.r_eps = s.params->local_r(0);
    row.residual_norm = s.field_norm(R, 0, delta - 2.0, alpha);
    row.n0_norm = s.field_norm(solver.n_map(solver.zero(), s.c0), 2, delta, alpha);
    const double r = row.r_eps;
    for (int i = 0; i < s.nodes(); ++i) {
      const double rho = std::sqrt(s.grid->w[i]);
      const double v = std::pow(varrho_weight(rho, s.grid->epsilon), 2.0 - delta) * R[i].norm();
      if (rho <= s.grid->epsilon)
        row.inner = std::max(row.inner, v);
      else if (rho < r)
        row.transition = std::max(row.transition, v);
      else if (rho <= 2.0 * r)
        row.neck = std::max(row.neck, v);
      else
        row.outer = std::max(row.outer, v);
    }
    out.rows.push_back(row);
  }
  std::vector<double> lr, lres, ln0, lneck;
  for (const ResidualRow& r : out.rows) {
    lr.push_back(std::log(r.r_eps));
    lres.push_back(std::log(r.residual_norm));
    ln0.push_back(std::log(r.n0_norm));
    lneck.push_back(std::log(r.neck));
  }
  out.residual_exponent = fit_slope(lr, lres);
  out.n0_exponent = fit_slope(lr, ln0);
  out.neck_exponent = fit_slope(lr, lneck);
  return out;
}

}  // namespace hymglue
