#include "hymglue/oracle.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

namespace hymglue {

namespace {

const char* kModule = "oracle";

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// From log h, whose differences carry no cancellation near h = 1.
RealVec scalar_curvature(const FluxDiscretization& d, const RealVec& log_h) {
  RealVec K = RealVec::Zero(d.nodes());
  for (const Face& f : d.faces) {
    const double l = log_h[f.b] - log_h[f.a];
    K[f.a] -= f.conductance * l / d.volume[f.a];
    K[f.b] += f.conductance * l / d.volume[f.b];
  }
  if (d.source.size() > 0) K += d.source;
  return K;
}

double average_curvature(const FluxDiscretization& d, const RealVec& log_h) {
  return d.volume.dot(scalar_curvature(d, log_h)) / d.volume.sum();
}

RealVec log_diagonal(const EndoField& deviation, int j) {
  RealVec v(deviation.size());
  for (std::size_t i = 0; i < deviation.size(); ++i) {
    const double x = deviation[i](j, j).real();
    if (!(x > -1.0)) throw PositivityError(kModule, "line metric is not positive");
    v[i] = std::log1p(x);
  }
  return v;
}

RealVec diagonal_entry(const EndoField& f, int j) {
  RealVec v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i](j, j).real();
  return v;
}

std::vector<double> to_std(const RealVec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double OracleReport::main_size() const { return max_abs(main); }
double OracleReport::oracle_size() const { return max_abs(oracle); }

double OracleReport::absolute_deviation() const {
  if (main.size() != oracle.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < main.size(); ++i) m = std::max(m, std::abs(main[i] - oracle[i]));
  return m;
}

double OracleReport::relative_deviation() const {
  const double s = oracle_size();
  return s > 0.0 ? absolute_deviation() / s : absolute_deviation();
}

AbelianSolution abelian_solve(const FluxDiscretization& d, const RealVec& log_h, int q, double pin) {
  const int N = d.nodes();
  if (log_h.size() != N) throw DomainError(kModule, "metric does not match the grid");
  if (q < 0 || q >= N) throw DomainError(kModule, "pinned node out of range");
  AbelianSolution out;
  if (!log_h.allFinite()) throw DomainError(kModule, "line metric is not finite");
  const RealVec K = scalar_curvature(d, log_h);
  out.c_bar = average_curvature(d, log_h);
  out.pin = pin;
  // S u = V (K - c_bar), S the graph Laplacian with weights 2 c_e; u(q) eliminated.
  auto index = [q](int i) { return i < q ? i : i - 1; };
  std::vector<Eigen::Triplet<double>> t;
  RealVec b(N - 1);
  for (int i = 0; i < N; ++i)
    if (i != q) b[index(i)] = d.volume[i] * (K[i] - out.c_bar);
  for (const Face& f : d.faces) {
    const double w = 2.0 * f.conductance;
    for (auto [i, o] : {std::pair{f.a, f.b}, std::pair{f.b, f.a}}) {
      if (i == q) continue;
      t.emplace_back(index(i), index(i), w);
      if (o == q)
        b[index(i)] += w * pin;
      else
        t.emplace_back(index(i), index(o), -w);
    }
  }
  Eigen::SparseMatrix<double> S(N - 1, N - 1);
  S.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw SingularError(kModule, "graph Laplacian factorization failed");
  const RealVec x = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success || !x.allFinite()) throw SingularError(kModule, "graph Laplacian solve failed");
  out.u.resize(N);
  for (int i = 0; i < N; ++i) out.u[i] = i == q ? pin : x[index(i)];
  out.a = out.u.unaryExpr([](double x) { return std::expm1(x); });
  return out;
}

AbelianSolution poisson_oracle(const Scenario& s, double target) {
  if (s.rank != 1) throw DomainError(kModule, "the Poisson oracle needs a line bundle");
  const RealVec h = log_diagonal(s.disc.deviation, 0);
  const double kappa = average_curvature(s.disc, h) - target;
  if (!(kappa > -1.0)) throw PositivityError(kModule, "pinned value leaves the gauge group");
  return abelian_solve(s.disc, h, s.q, std::log1p(kappa));
}

std::vector<AbelianSolution> block_oracles(const Scenario& s, double target) {
  if (s.rank != 2) throw DomainError(kModule, "block oracles need a rank-2 bundle");
  for (const Mat& H : s.disc.reference)
    if (std::abs(H(0, 1)) > 0.0 || std::abs(H(1, 0)) > 0.0)
      throw DomainError(kModule, "block oracles need a diagonal metric");
  std::vector<RealVec> h;
  double kappa[2];
  for (int j = 0; j < 2; ++j) {
    h.push_back(log_diagonal(s.disc.deviation, j));
    kappa[j] = average_curvature(s.disc, h[j]) - target;
  }
  std::vector<AbelianSolution> out;
  for (int j = 0; j < 2; ++j) {
    const double x = kappa[j] - 0.25 * (kappa[0] + kappa[1]);
    if (!(x > -1.0)) throw PositivityError(kModule, "pinned value leaves the gauge group");
    out.push_back(abelian_solve(s.disc, h[j], s.q, std::log1p(x)));
  }
  return out;
}

RefinementStudy refinement_study(const ScenarioConfig& cfg, int levels) {
  if (levels < 3) throw DomainError(kModule, "a refinement study needs at least three levels");
  const Scenario coarse = make_scenario(cfg);
  if (!coarse.radial() || coarse.rank != 1) throw DomainError(kModule, "refinement study needs a radial line bundle");
  RefinementStudy out;
  std::vector<RealVec> u;
  for (int l = 0; l < levels; ++l) {
    ScenarioConfig c = cfg;
    const int cells = coarse.grid->cells << l;
    c.dsigma = coarse.grid->L / cells;
    const Scenario s = l == 0 ? coarse : make_scenario(c);
    if (s.grid->cells != cells) throw DomainError(kModule, "refined grid did not double");
    out.cells.push_back(cells);
    u.push_back(poisson_oracle(s, s.c0).u);
  }
  for (int l = 0; l + 1 < levels; ++l) {
    double d = 0.0;
    for (int i = 0; i < u[l].size(); ++i)
      d = std::max(d, std::abs(u[l][i] - 0.5 * (u[l + 1][2 * i] + u[l + 1][2 * i + 1])));
    out.self_deviation.push_back(d);
  }
  for (std::size_t l = 0; l + 1 < out.self_deviation.size(); ++l)
    out.ratios.push_back(out.self_deviation[l] / out.self_deviation[l + 1]);
  return out;
}

std::vector<int> harmonic_degree_oracle(int n, int k_max) {
  if (n < 2 || k_max < 0) throw DomainError(kModule, "need n >= 2 and k_max >= 0");
  std::vector<int> out;
  for (int k = 0; k <= k_max; ++k) {
    out.push_back(k);
    out.push_back(2 - 2 * n - k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OracleReport compare_line(const Solver& solver, const SolverState& st, double tol) {
  const Scenario& s = solver.scenario();
  OracleReport r;
  r.id = "poisson";
  r.quantity = "increment a";
  r.main = to_std(diagonal_entry(st.a, 0));
  r.oracle = to_std(poisson_oracle(s, st.target).a);
  r.tolerance = tol;
  return r;
}

std::vector<OracleReport> compare_blocks(const Solver& solver, const SolverState& st, double block_tol, double tol) {
  const Scenario& s = solver.scenario();
  std::vector<OracleReport> out;
  OracleReport off;
  off.id = "direct-sum";
  off.quantity = "off-diagonal |a_01|, |a_10|";
  for (const Mat& a : st.a) {
    off.main.push_back(std::abs(a(0, 1)));
    off.main.push_back(std::abs(a(1, 0)));
  }
  off.oracle.assign(off.main.size(), 0.0);
  off.tolerance = block_tol;
  out.push_back(off);
  const std::vector<AbelianSolution> blocks = block_oracles(s, st.target);
  for (int j = 0; j < 2; ++j) {
    OracleReport r;
    r.id = "direct-sum";
    r.quantity = "block " + std::to_string(j) + " increment";
    r.main = to_std(diagonal_entry(st.a, j));
    r.oracle = to_std(blocks[j].a);
    r.tolerance = tol;
    out.push_back(r);
  }
  return out;
}

OracleReport compare_flat(const Solver& solver, const SolverState& st, double tol) {
  const FluxDiscretization& d = solver.scenario().disc;
  const int m = d.rank;
  EndoField D(d.nodes());
  for (int i = 0; i < d.nodes(); ++i) {
    const Mat finv = (Mat::Identity(m, m) + st.a[i]).inverse();
    D[i] = hermitian_part(d.reference[i] * finv * finv) - Mat::Identity(m, m);
  }
  OracleReport r;
  r.id = "gauge-flat";
  r.quantity = "|iLambda F| of the corrected metric";
  for (const Mat& K : curvature_field(d, D)) r.main.push_back(K.norm());
  r.oracle.assign(r.main.size(), 0.0);
  r.tolerance = tol;
  return r;
}

}  // namespace hymglue
