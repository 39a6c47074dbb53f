#include "hymglue/linear.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace hymglue {

namespace {

const char* kModule = "linear";

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

struct PointData {
  Mat gi;
  ConnectionJet theta;
  Mat K;
};

PointData point_data(const MatJet& h, const Mat& g) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw SingularError(kModule, "Kahler metric is singular");
  PointData p;
  p.gi = lu.inverse();
  p.theta = chern_connection(h);
  p.K = hym_residual(curvature(p.theta), g, 0.0);
  return p;
}

Vec weights(const ModifiedOperator& op) {
  const int m2 = op.rank * op.rank;
  Vec w(op.nodes * m2);
  for (int i = 0; i < op.nodes; ++i) w.segment(i * m2, m2).setConstant(op.volume[i]);
  return w;
}

}  // namespace

Mat laplacian_local_form(const MatJet& psi, const MatJet& h, const Mat& g) {
  const PointData p = point_data(h, g);
  Mat out = commutator(psi.v, p.K);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) out += p.gi(k, j) * 2.0 * psi.dz_dzbar(j, k);
  return out;
}

Mat laplacian_pointwise(const MatJet& psi, const MatJet& h, const Mat& g) {
  const PointData p = point_data(h, g);
  Mat out = commutator(psi.v, p.K);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      out += p.gi(k, j) * 2.0 * (psi.dz_dzbar(j, k) + commutator(p.theta.alpha[j], psi.dzbar(k)));
  return out;
}

EuclideanComparison euclidean_comparison(const std::function<Jet<1>(const Jet<1>&)>& f,
                                         const RadialPotential& phi, const CutoffProfile& cutoff, double r_cut,
                                         double delta, double r_min) {
  if (!(r_cut > 0.0) || !(r_min > 0.0) || r_min >= 1.0) throw DomainError(kModule, "bad comparison radii");
  const int n = 2;
  // Laplacian of f(w) for the potential w + phi(w), and for |z|^2.
  auto curved = [f, phi](double w) {
    const Jet<1> W = Jet<1>::variable(w, 0);
    const Jet<1> pot = W + phi.jet(W);
    const double d1 = pot.g[0], d2 = pot.h(0, 0);
    const double P = w * d1, Pw = d1 + w * d2, Q = w * Pw;
    const Jet<1> F = f(W);
    const double fw = F.g[0], fww = F.h(0, 0);
    const double inner = (n - 1) * std::pow(P, n - 2) * Pw * w * fw + std::pow(P, n - 1) * (fw + w * fww);
    return 2.0 * w * inner / (std::pow(P, n - 1) * Q);
  };
  auto flat = [f, cutoff, r_cut](double w) {
    const Jet<1> W = Jet<1>::variable(w, 0);
    const Jet<1> G = (1.0 - cutoff(sqrt(W) / r_cut)) * f(W);
    return 2.0 * (n * G.g[0] + w * G.h(0, 0));
  };
  const RadialProfile diff = [curved, flat](double r) {
    return Mat(Mat::Constant(1, 1, curved(r * r) - flat(r * r)));
  };
  const RadialProfile naive = [curved](double r) { return Mat(Mat::Constant(1, 1, curved(r * r))); };
  WeightedNormSpec spec;
  spec.k = 0;
  spec.space = Space::Xp;
  spec.r_min = r_min;
  spec.include_outer = false;
  spec.delta = delta;
  EuclideanComparison out;
  out.difference = weighted_holder_norm(diff, spec).total();
  spec.delta = delta - 2.0;
  out.naive = weighted_holder_norm(naive, spec).total();
  return out;
}

std::vector<Mat> parallel_constants(const FluxDiscretization& d, const SparseMat& laplacian, double tol) {
  const int m = d.rank;
  if (m == 1) return {};
  const int N = d.nodes();
  // rows weighted by volume so that tiny cells do not dominate the scale
  Vec w(laplacian.rows());
  for (int i = 0; i < N; ++i) w.segment(i * m * m, m * m).setConstant(d.volume[i]);
  Mat C(laplacian.rows(), m * m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r) {
      Mat E = Mat::Zero(m, m);
      E(r, c) = 1.0;
      C.col(c * m + r) = w.cwiseProduct(laplacian * to_vec(constant_field(N, E)));
    }
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
  const RealVec sv = svd.singularValues();
  const double scale = std::max(1.0, sv.maxCoeff());
  std::vector<Mat> basis;
  auto add = [&](Mat X) {
    for (const Mat& b : basis) X -= (b.adjoint() * X).trace() * b;
    const double nrm = X.norm();
    if (nrm > 1e-8) basis.push_back(X / nrm);
  };
  for (int k = 0; k < m * m; ++k) {
    if (sv[k] > tol * scale) continue;
    Mat N0 = svd.matrixV().col(k).reshaped(m, m);
    N0 -= (N0.trace() / static_cast<double>(m)) * Mat::Identity(m, m);
    add(0.5 * (N0 + N0.adjoint()));
    add(Complex(0.0, -0.5) * (N0 - N0.adjoint()));
  }
  return basis;
}

Mat ModifiedOperator::modification(const Mat& s_q) const {
  Mat out = s_q.trace() * Mat::Identity(rank, rank);
  for (const Mat& k : kernel) out += (k.adjoint() * s_q).trace() * k;
  return out;
}

EndoField ModifiedOperator::apply(const EndoField& s) const {
  return from_vec(modified * to_vec(s), nodes, rank);
}

EndoField ModifiedOperator::apply_unmodified(const EndoField& s) const {
  return from_vec(laplacian * to_vec(s), nodes, rank);
}

ModifiedOperator assemble_modified(const FluxDiscretization& d, int q, const std::vector<Mat>& kernel) {
  if (q < 0 || q >= d.nodes()) throw DomainError(kModule, "marked node out of range");
  ModifiedOperator op;
  op.rank = d.rank;
  op.nodes = d.nodes();
  op.q = q;
  op.kernel = kernel;
  op.reference = d.reference;
  op.volume = d.volume;
  op.laplacian = linearization(d);
  const int m = d.rank, m2 = m * m;
  // vec(M(s)) = Mv vec(s(q))
  Mat Mv(m2, m2);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r) {
      Mat E = Mat::Zero(m, m);
      E(r, c) = 1.0;
      Mv.col(c * m + r) = op.modification(E).reshaped();
    }
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(op.nodes) * m2 * m2);
  for (int i = 0; i < op.nodes; ++i)
    for (int a = 0; a < m2; ++a)
      for (int b = 0; b < m2; ++b)
        if (Mv(a, b) != Complex(0.0)) t.emplace_back(i * m2 + a, q * m2 + b, -Mv(a, b));
  SparseMat M(op.laplacian.rows(), op.laplacian.cols());
  M.setFromTriplets(t.begin(), t.end());
  op.modified = op.laplacian + M;
  op.modified.makeCompressed();

  // Factor the volume-weighted system, which is far better scaled.
  const Vec w = weights(op);
  SparseMat A = w.asDiagonal() * op.modified;
  A.makeCompressed();
  op.lu = std::make_shared<Eigen::SparseLU<SparseMat>>();
  op.lu->compute(A);
  if (op.lu->info() != Eigen::Success) throw SingularError(kModule, "modified operator is singular");
  SparseMat At = A.adjoint();
  At.makeCompressed();
  op.lu_adjoint = std::make_shared<Eigen::SparseLU<SparseMat>>();
  op.lu_adjoint->compute(At);
  if (op.lu_adjoint->info() != Eigen::Success) throw SingularError(kModule, "modified operator is singular");
  return op;
}

EndoField solve_modified(const ModifiedOperator& op, const EndoField& g, double tol) {
  if (static_cast<int>(g.size()) != op.nodes) throw DomainError(kModule, "right-hand side does not match the grid");
  const Vec w = weights(op);
  const Vec b = w.cwiseProduct(to_vec(g));
  const double bn = b.norm();
  if (bn == 0.0) return EndoField(op.nodes, Mat::Zero(op.rank, op.rank));
  Vec x = op.lu->solve(b);
  double rel = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 8; ++step) {
    const Vec r = b - w.cwiseProduct(op.modified * x);
    const double next = r.norm() / bn;
    if (!(next < 0.5 * rel)) {
      rel = std::min(rel, next);
      break;
    }
    rel = next;
    x += op.lu->solve(r);
  }
  if (!std::isfinite(rel)) throw SingularError(kModule, "modified operator is singular");
  if (rel > tol) throw ConvergenceError(kModule, "linear solve residual " + std::to_string(rel) + " above tolerance");
  EndoField s = from_vec(x, op.nodes, op.rank);
  double defect = 0.0, size = 0.0;
  for (int i = 0; i < op.nodes; ++i) {
    defect = std::max(defect, h_hermitian_defect(g[i], op.reference[i]));
    size = std::max(size, (op.reference[i] * g[i]).cwiseAbs().maxCoeff());
  }
  if (defect <= 1e-12 * std::max(size, 1e-300)) s = h_hermitian_part(s, op.reference);
  return s;
}

double smallest_singular_value(const ModifiedOperator& op, int iterations, double tol) {
  // C = W^{1/2} A W^{-1/2}; C^{-1} = W^{1/2} (W A)^{-1} W^{1/2}.
  const Vec w = weights(op);
  const Vec sw = w.cwiseSqrt();
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  Vec x(w.size());
  for (int i = 0; i < x.size(); ++i) x[i] = Complex(nd(rng), nd(rng));
  x.normalize();
  double mu = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vec y = sw.cwiseProduct(op.lu_adjoint->solve(sw.cwiseProduct(x)));
    const Vec z = sw.cwiseProduct(op.lu->solve(sw.cwiseProduct(y)));
    const double next = z.norm();
    x = z / next;
    if (std::abs(next - mu) <= tol * next) {
      mu = next;
      break;
    }
    mu = next;
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw SingularError(kModule, "inverse iteration failed");
  return 1.0 / std::sqrt(mu);
}

std::vector<EndoField> probe_fields(const Scenario& s, double delta, int count, unsigned seed) {
  if (!s.grid) throw DomainError(kModule, "probes are defined for radial scenarios");
  const RadialGrid& g = *s.grid;
  const int m = s.rank;
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<EndoField> out;
  for (int p = 0; p < count; ++p) {
    std::vector<Mat> coeff(7);
    for (Mat& c : coeff) {
      Mat r(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = Complex(nd(rng), nd(rng));
      c = 0.5 * (r + r.adjoint());
    }
    EndoField f(g.cells, Mat::Zero(m, m));
    for (int i = 0; i < g.cells; ++i) {
      const double weight = std::pow(varrho_weight(std::sqrt(g.w[i]), g.epsilon), delta - 2.0);
      const double t = 0.5 + std::atan(0.25 * std::log(g.w[i])) / M_PI;
      for (int k = 0; k <= 6; ++k) f[i] += std::cos(k * M_PI * t) * coeff[k];
      f[i] *= weight;
    }
    out.push_back(h_hermitian_part(f, s.disc.reference));
  }
  return out;
}

InverseBound inverse_bound(const Scenario& s, const ModifiedOperator& op, double delta, int probes) {
  InverseBound b;
  b.epsilon = s.config.epsilon;
  b.sigma_min = smallest_singular_value(op);
  b.estimate = 0.0;
  for (const EndoField& g : probe_fields(s, delta, probes)) {
    const EndoField x = solve_modified(op, g);
    b.estimate = std::max(b.estimate, s.field_norm(x, 2, delta) / s.field_norm(g, 0, delta - 2.0));
  }
  return b;
}

std::string triplets_text(const SparseMat& m) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  return os.str();
}

}  // namespace hymglue
