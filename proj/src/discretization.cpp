#include "hymglue/discretization.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <memory>

namespace hymglue {

namespace {

const char* kModule = "discretization";

// (log a - log b) / (a - b), continuous across a = b.
double log_divided_difference(double a, double b) {
  const double d = (a - b) / b;
  if (std::abs(d) < 1e-8) return (1.0 - 0.5 * d + d * d / 3.0) / b;
  return std::log1p(d) / (a - b);
}

Mat inverse(const Mat& m) {
  if (m.rows() == 1) {
    if (std::abs(m(0, 0)) == 0.0) throw SingularError(kModule, "singular 1x1 matrix");
    return Mat::Constant(1, 1, 1.0 / m(0, 0));
  }
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw SingularError(kModule, "singular matrix");
  return lu.inverse();
}

void add_block(std::vector<Eigen::Triplet<Complex>>& t, int row_node, int col_node, const Mat& block) {
  const int b = static_cast<int>(block.rows());
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      if (block(i, j) != Complex(0.0)) t.emplace_back(row_node * b + i, col_node * b + j, block(i, j));
}

}  // namespace

FaceLog face_log(const Mat& Da, const Mat& Db) {
  FaceLog fl;
  const int m = static_cast<int>(Da.rows());
  const Mat Ga = Mat::Identity(m, m) + Da;
  if (m == 1) {
    const double ga = Ga(0, 0).real();
    const double y = (Db(0, 0).real() - Da(0, 0).real()) / ga;
    if (!(ga > 0.0) || !(y > -1.0)) throw PositivityError(kModule, "metric ratio is not positive");
    fl.V = Mat::Identity(1, 1);
    fl.Vinv = fl.V;
    fl.lambda = RealVec::Constant(1, 1.0 + y);
    fl.log = Mat::Constant(1, 1, std::log1p(y));
    return fl;
  }
  const Mat Gb = Mat::Identity(m, m) + Db;
  Eigen::SelfAdjointEigenSolver<Mat> ea(hermitian_part(Ga));
  if (ea.eigenvalues().minCoeff() <= 0.0) throw PositivityError(kModule, "node metric is not positive");
  const RealVec sq = ea.eigenvalues().cwiseSqrt();
  const Mat S = ea.eigenvectors() * sq.cwiseInverse().asDiagonal() * ea.eigenvectors().adjoint();
  const Mat Sinv = ea.eigenvectors() * sq.asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> ey(hermitian_part(S * Gb * S));
  if (ey.eigenvalues().minCoeff() <= 0.0) throw PositivityError(kModule, "node metric is not positive");
  fl.lambda = ey.eigenvalues();
  fl.V = S * ey.eigenvectors();
  fl.Vinv = ey.eigenvectors().adjoint() * Sinv;
  // Close neighbours: the series of log(Id + Y), Y = Ga^{-1}(Gb - Ga), keeps
  // the absolute error at the level of the difference Gb - Ga.
  const Mat Y = Ga.partialPivLu().solve(Db - Da);
  const double ny = Y.norm();
  if (ny < 0.1) {
    Mat term = Y;
    fl.log = Y;
    for (int k = 2; std::pow(ny, k) / k > 1e-20; ++k) {
      term = term * Y;
      fl.log += ((k % 2 == 0) ? -1.0 : 1.0) / k * term;
    }
    return fl;
  }
  fl.log = fl.V * fl.lambda.array().log().matrix().cast<Complex>().asDiagonal() * fl.Vinv;
  return fl;
}

Mat dlog(const FaceLog& fl, const Mat& E) {
  const int m = static_cast<int>(fl.lambda.size());
  Mat M = fl.Vinv * E * fl.V;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) *= log_divided_difference(fl.lambda[i], fl.lambda[j]);
  return fl.V * M * fl.Vinv;
}

Mat dlog_matrix(const FaceLog& fl) {
  const int m = static_cast<int>(fl.lambda.size());
  Eigen::VectorXcd gamma(m * m);
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p) gamma[p + q * m] = log_divided_difference(fl.lambda[p], fl.lambda[q]);
  const Mat right = Eigen::kroneckerProduct(fl.V.transpose(), fl.Vinv).eval();
  const Mat left = Eigen::kroneckerProduct(fl.Vinv.transpose(), fl.V).eval();
  return left * gamma.asDiagonal() * right;
}

EndoField curvature_field(const FluxDiscretization& d, const EndoField& D) {
  const int N = d.nodes();
  const int m = d.rank;
  EndoField K(N, Mat::Zero(m, m));
  for (const Face& f : d.faces) {
    const Mat lab = face_log(D[f.a], D[f.b]).log;
    K[f.a] -= (f.conductance / d.volume[f.a]) * lab;
    // log(G_b^{-1} G_a) = -log(G_a^{-1} G_b)
    K[f.b] += (f.conductance / d.volume[f.b]) * lab;
  }
  if (d.source.size() > 0)
    for (int i = 0; i < N; ++i) K[i].diagonal().array() += d.source[i];
  return K;
}

EndoField phi_field(const FluxDiscretization& d, const EndoField& a) {
  const int N = d.nodes();
  const int m = d.rank;
  const Mat id = Mat::Identity(m, m);
  // f^{-1} = Id - b with b = a f^{-1}, so H f^{-2} - Id = D + H (b^2 - 2 b).
  EndoField D(N), finv(N);
  for (int i = 0; i < N; ++i) {
    finv[i] = inverse(id + a[i]);
    const Mat b = a[i] * finv[i];
    D[i] = hermitian_part(d.deviation[i] + d.reference[i] * (b * b - 2.0 * b));
  }
  EndoField K = curvature_field(d, D);
  for (int i = 0; i < N; ++i) K[i] = finv[i] * K[i] * (id + a[i]);
  return K;
}

SparseMat linearization(const FluxDiscretization& d) {
  const int N = d.nodes();
  const int m = d.rank;
  const int m2 = m * m;
  const Mat I = Mat::Identity(m, m);
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(d.faces.size()) * 4 * m2 * m2 + N * m2 * m2);
  auto face_blocks = [&](int self, int other, double c) {
    const FaceLog fl = face_log(d.deviation[self], d.deviation[other]);
    const Mat X = fl.V * fl.lambda.cast<Complex>().asDiagonal() * fl.Vinv;
    const Mat D = dlog_matrix(fl);
    const double s = 2.0 * c / d.volume[self];
    add_block(t, self, self, -s * D * Eigen::kroneckerProduct(X.transpose(), I).eval());
    add_block(t, self, other, s * D * Eigen::kroneckerProduct(I, X).eval());
  };
  for (const Face& f : d.faces) {
    face_blocks(f.a, f.b, f.conductance);
    face_blocks(f.b, f.a, f.conductance);
  }
  if (m > 1) {
    const EndoField K0 = curvature_field(d, d.deviation);
    for (int i = 0; i < N; ++i)
      add_block(t, i, i, Eigen::kroneckerProduct(I, K0[i]).eval() - Eigen::kroneckerProduct(K0[i].transpose(), I).eval());
  }
  SparseMat A(N * m2, N * m2);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

void FluxDiscretization::set_deviation(EndoField D) {
  if (static_cast<int>(D.size()) != nodes()) throw DomainError(kModule, "deviation does not match the grid");
  reference.resize(D.size());
  for (std::size_t i = 0; i < D.size(); ++i) reference[i] = Mat::Identity(rank, rank) + D[i];
  deviation = std::move(D);
}

double average_trace(const FluxDiscretization& d, const EndoField& K) {
  double acc = 0.0;
  for (int i = 0; i < d.nodes(); ++i) acc += d.volume[i] * K[i].trace().real();
  return acc / (d.rank * d.total_volume());
}

Vec to_vec(const EndoField& f) {
  if (f.empty()) return Vec();
  const int m2 = static_cast<int>(f[0].size());
  Vec v(static_cast<int>(f.size()) * m2);
  for (std::size_t i = 0; i < f.size(); ++i) v.segment(static_cast<int>(i) * m2, m2) = f[i].reshaped();
  return v;
}

EndoField from_vec(const Vec& v, int nodes, int rank) {
  const int m2 = rank * rank;
  EndoField f(nodes);
  for (int i = 0; i < nodes; ++i) f[i] = v.segment(i * m2, m2).reshaped(rank, rank);
  return f;
}

EndoField constant_field(int nodes, const Mat& m) { return EndoField(nodes, m); }

double sup_norm(const EndoField& f) {
  double s = 0.0;
  for (const Mat& m : f) s = std::max(s, m.norm());
  return s;
}

EndoField operator-(const EndoField& a, const EndoField& b) {
  EndoField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

EndoField operator+(const EndoField& a, const EndoField& b) {
  EndoField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

EndoField operator*(double s, const EndoField& a) {
  EndoField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

EndoField h_hermitian_part(const EndoField& a, const EndoField& H) {
  EndoField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + H[i].lu().solve(a[i].adjoint() * H[i]));
  return out;
}

double RadialGrid::w_of_sigma(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= L) return std::numeric_limits<double>::infinity();
  const double q = std::sinh(s) / std::sinh(L - s);
  return q * q;
}

double RadialGrid::sigma_of_rho(double rho) const {
  if (!(rho > 0.0)) return 0.0;
  if (std::isinf(rho)) return L;
  return std::atanh(rho * std::sinh(L) / (1.0 + rho * std::cosh(L)));
}

RadialGrid RadialGrid::build(const GluingParams& params, const RadialPotential& phi, double dsigma_target) {
  if (params.points.size() != 1) throw DomainError(kModule, "radial grid supports a single blowup point");
  if (!(dsigma_target > 0.0)) throw DomainError(kModule, "grid step must be positive");
  if (!(phi.p_infinity > 0.0)) throw DomainError(kModule, "radial grid needs a compact base");
  RadialGrid g;
  g.epsilon = params.local_epsilon(0);
  g.n = params.n;
  g.L = std::asinh(1.0 / g.epsilon);
  g.cells = std::max(16, static_cast<int>(std::lround(g.L / dsigma_target)));
  g.dsigma = g.L / g.cells;
  g.sigma.resize(g.cells);
  g.w.resize(g.cells);
  for (int i = 0; i < g.cells; ++i) {
    g.sigma[i] = (i + 0.5) * g.dsigma;
    g.w[i] = g.w_of_sigma(g.sigma[i]);
  }
  g.face_P.resize(g.cells + 1);
  g.face_kappa.resize(g.cells + 1);
  g.face_P[0] = 0.5 * g.epsilon * g.epsilon;
  g.face_P[g.cells] = phi.p_infinity;
  g.face_kappa[0] = 0.0;
  g.face_kappa[g.cells] = 0.0;
  for (int f = 1; f < g.cells; ++f) {
    const double s = f * g.dsigma;
    const double P = glued_radial(g.w_of_sigma(s), params, phi).P;
    const double ds = 2.0 / std::tanh(s) + 2.0 / std::tanh(g.L - s);
    g.face_P[f] = P;
    g.face_kappa[f] = std::pow(P, g.n - 1) / ds;
  }
  g.volume.resize(g.cells);
  for (int i = 0; i < g.cells; ++i) {
    g.volume[i] = (std::pow(g.face_P[i + 1], g.n) - std::pow(g.face_P[i], g.n)) / g.n;
    if (!(g.volume[i] > 0.0)) throw PositivityError(kModule, "glued metric is not positive on the radial grid");
  }
  return g;
}

FluxDiscretization RadialGrid::skeleton(int rank) const {
  FluxDiscretization d;
  d.rank = rank;
  d.volume = volume;
  for (int i = 0; i + 1 < cells; ++i) d.faces.push_back({i, i + 1, face_kappa[i + 1] / dsigma});
  return d;
}

RadialProfile RadialGrid::profile(const EndoField& values) const {
  if (static_cast<int>(values.size()) != cells) throw DomainError(kModule, "field does not match the grid");
  const int ghosts = 4;
  const int M = cells + 2 * ghosts;
  const int rows = static_cast<int>(values[0].rows());
  const int m2 = static_cast<int>(values[0].size());
  auto data = std::make_shared<std::vector<Vec>>(M);
  std::vector<Vec>& y = *data;
  for (int k = 0; k < M; ++k) {
    int src = k - ghosts;
    if (src < 0) src = -src - 1;
    if (src >= cells) src = 2 * cells - src - 1;
    y[k] = values[src].reshaped();
  }
  // natural cubic spline second derivatives (Thomas algorithm)
  const double h = dsigma;
  auto second = std::make_shared<std::vector<Vec>>(M, Vec::Zero(m2));
  std::vector<Vec>& Ms = *second;
  std::vector<double> cp(M, 0.0);
  std::vector<Vec> dp(M, Vec::Zero(m2));
  for (int k = 1; k < M - 1; ++k) {
    const Vec rhs = (6.0 / (h * h)) * (y[k + 1] - 2.0 * y[k] + y[k - 1]);
    const double denom = 4.0 - (k > 1 ? cp[k - 1] : 0.0);
    cp[k] = 1.0 / denom;
    dp[k] = (rhs - (k > 1 ? dp[k - 1] : Vec::Zero(m2))) / denom;
  }
  for (int k = M - 2; k >= 1; --k) Ms[k] = dp[k] - cp[k] * (k + 1 < M - 1 ? Ms[k + 1] : Vec::Zero(m2));
  const double x0 = sigma[0] - ghosts * h;
  const RadialGrid self = *this;
  return [data, second, x0, h, M, rows, self](double rho) {
    const double s = self.sigma_of_rho(rho);
    int k = static_cast<int>(std::floor((s - x0) / h));
    k = std::clamp(k, 0, M - 2);
    const double a = (x0 + (k + 1) * h - s) / h;
    const double b = 1.0 - a;
    const std::vector<Vec>& y = *data;
    const std::vector<Vec>& Ms = *second;
    const Vec v = a * y[k] + b * y[k + 1] + ((a * a * a - a) * Ms[k] + (b * b * b - b) * Ms[k + 1]) * (h * h / 6.0);
    return Mat(v.reshaped(rows, rows));
  };
}

TorusGrid TorusGrid::build(int N) {
  if (N < 4) throw DomainError(kModule, "torus grid needs at least 4 nodes per direction");
  TorusGrid t;
  t.N = N;
  t.h = 2.0 * M_PI / N;
  return t;
}

int TorusGrid::index(int i, int j, int k, int l) const {
  auto wrap = [this](int x) { return ((x % N) + N) % N; };
  return ((wrap(i) * N + wrap(j)) * N + wrap(k)) * N + wrap(l);
}

Point4 TorusGrid::node(int idx) const {
  const int l = idx % N;
  const int k = (idx / N) % N;
  const int j = (idx / (N * N)) % N;
  const int i = idx / (N * N * N);
  return Point4(i * h, j * h, k * h, l * h);
}

FluxDiscretization TorusGrid::skeleton(int rank) const {
  if (rank != 1) throw UnsupportedDimensionError(kModule, "the torus discretization carries line bundles only");
  FluxDiscretization d;
  d.rank = rank;
  const int total = N * N * N * N;
  d.volume = RealVec::Constant(total, h * h * h * h);
  const double c = 0.25 * h * h;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          const int a = index(i, j, k, l);
          d.faces.push_back({a, index(i + 1, j, k, l), c});
          d.faces.push_back({a, index(i, j + 1, k, l), c});
          d.faces.push_back({a, index(i, j, k + 1, l), c});
          d.faces.push_back({a, index(i, j, k, l + 1), c});
        }
  return d;
}

}  // namespace hymglue
