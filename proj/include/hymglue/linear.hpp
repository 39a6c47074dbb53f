// linear.hpp
//
// The linearized operator Delta a = d/dt Phi(t a) at t = 0, its modification
// by the trace at a marked point q (plus the traceless parallel endomorphisms
// when the bundle is not simple), and the inverse bounds.
//
//   Delta~ s = Delta s - M(s),  M(s) = tr(s(q)) Id + sum_l <s(q), kappa_l> kappa_l
//
// with <A, B> = tr(B^* A) and kappa_l an orthonormal basis of the traceless
// parallel directions (detected as constant fields in the kernel of Delta).

#pragma once

#include "hymglue/bundle.hpp"
#include "hymglue/discretization.hpp"
#include "hymglue/scenario.hpp"

#include <Eigen/SparseLU>
#include <memory>
#include <random>

namespace hymglue {

// Pointwise continuum operator on a section jet psi with bundle metric jet h
// and Kahler metric g at the same point:
//   full:   sum g^{kj} (2 d_j dbar_k psi + 2 [theta_j, dbar_k psi]) + [psi, K]
//   local:  sum g^{kj}  2 d_j dbar_k psi + [psi, K]
// with theta = h^{-1} dh and K = iLambda F(h). They agree where theta vanishes
// or commutes with dbar psi (in a normal frame at its centre, for example).
Mat laplacian_pointwise(const MatJet& psi, const MatJet& h, const Mat& g);
Mat laplacian_local_form(const MatJet& psi, const MatJet& h, const Mat& g);

// Radial comparison with the flat Laplacian outside a cutoff: for s = f(|z|^2) Id
// returns ||Delta_omega s - Delta_euc(gamma s)||_{C^{0,alpha}_delta} against
// the naive ||Delta_omega s||_{C^{0,alpha}_{delta - 2}} on the ball r_min <= |z| <= 1,
// gamma = 1 - cutoff(|z| / r_cut).
struct EuclideanComparison {
  double difference;
  double naive;
};
EuclideanComparison euclidean_comparison(const std::function<Jet<1>(const Jet<1>&)>& f,
                                         const RadialPotential& phi, const CutoffProfile& cutoff, double r_cut,
                                         double delta, double r_min);

// Orthonormal traceless Hermitian constants c with Delta(c) = 0 (up to `tol`
// relative to the volume-weighted operator).
std::vector<Mat> parallel_constants(const FluxDiscretization& d, const SparseMat& laplacian, double tol = 1e-8);

struct ModifiedOperator {
  int rank = 1;
  int nodes = 0;
  int q = 0;
  SparseMat laplacian;
  SparseMat modified;
  std::vector<Mat> kernel;  // kappa_l
  EndoField reference;
  std::shared_ptr<Eigen::SparseLU<SparseMat>> lu;
  std::shared_ptr<Eigen::SparseLU<SparseMat>> lu_adjoint;
  RealVec volume;

  Mat modification(const Mat& s_q) const;  // M(s)
  EndoField apply(const EndoField& s) const;
  EndoField apply_unmodified(const EndoField& s) const;
};

ModifiedOperator assemble_modified(const FluxDiscretization& d, int q, const std::vector<Mat>& kernel);
inline ModifiedOperator assemble_modified(const Scenario& s) { return assemble_modified(s.disc, s.q, s.parallel); }

// Solves Delta~ s = g. The result is symmetrized to its H-self-adjoint part
// when g is H-self-adjoint. Throws SingularError when the factorization fails
// and ConvergenceError when the relative residual stays above `tol`.
EndoField solve_modified(const ModifiedOperator& op, const EndoField& g, double tol = 1e-10);

// Smallest singular value of Delta~ in the volume-weighted l^2 norm.
double smallest_singular_value(const ModifiedOperator& op, int iterations = 300, double tol = 1e-10);

// Fixed-seed random right-hand sides: varrho^{delta - 2} times a random
// combination of cos(k pi t), k <= 6, with random Hermitian coefficients and
// t = 1/2 + atan(log(|z|^2) / 4) / pi, so the family does not depend on eps.
std::vector<EndoField> probe_fields(const Scenario& s, double delta, int count, unsigned seed = 12345);

struct InverseBound {
  double epsilon;
  double sigma_min;
  double estimate;  // max over probes of ||s||_{2, delta} / ||g||_{0, delta - 2}
};
InverseBound inverse_bound(const Scenario& s, const ModifiedOperator& op, double delta, int probes = 32);

// (row, col, value) triplets of a sparse matrix, one per line.
std::string triplets_text(const SparseMat& m);

}  // namespace hymglue
