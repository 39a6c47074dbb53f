// discretization.hpp
//
// Finite-volume discretization of the mean curvature iLambda F of a Hermitian
// metric on a cell complex: nodes carry a metric G_i, faces carry a
// conductance, and
//
//   K_i(G) = -(1/V_i) sum_{faces (i, o)} c_e log(G_i^{-1} G_o) + s_i Id,
//
// where s_i is a fixed source carrying the exact flux of a scalar factor that
// was divided out of the metric (a factor singular at the edge of the grid is
// treated this way). For a line bundle this is the usual two-point flux of
// -log h, and the rescaling G -> G e^{-2u} adds exactly the discrete Laplacian of u.
//
// The HYM map on gauge increments is Phi(a) = f^{-1} K(H f^{-2}) f with
// f = Id + a, and `linearization` assembles its exact Jacobian at a = 0.
//
// Metrics are carried as deviations D = G - Id. Near the exceptional divisor
// c_e / V_i grows like eps^{-4}, and differences of metrics stored as
// Id + O(eps^2) would lose everything below machine epsilon.

#pragma once

#include "hymglue/geometry.hpp"
#include "hymglue/types.hpp"
#include "hymglue/weighted.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace hymglue {

using EndoField = std::vector<Mat>;
using SparseMat = Eigen::SparseMatrix<Complex>;

struct Face {
  int a;
  int b;
  double conductance;
};

struct FluxDiscretization {
  int rank = 1;
  RealVec volume;
  std::vector<Face> faces;
  RealVec source;       // s_i, empty for none
  EndoField reference;  // H_i
  EndoField deviation;  // H_i - Id, computed without cancellation

  // Sets both the deviation and the reference H = Id + D.
  void set_deviation(EndoField D);

  int nodes() const { return static_cast<int>(volume.size()); }
  int dofs() const { return nodes() * rank * rank; }
  double total_volume() const { return volume.sum(); }
};

// Spectral data of X = G_a^{-1} G_b (diagonalizable with positive spectrum),
// from the deviations D_a, D_b.
struct FaceLog {
  Mat V;
  Mat Vinv;
  RealVec lambda;
  Mat log;
};
FaceLog face_log(const Mat& Da, const Mat& Db);
// Frechet derivative of the matrix logarithm at X applied to E.
Mat dlog(const FaceLog& fl, const Mat& E);
// The same map acting on column-major vec(E).
Mat dlog_matrix(const FaceLog& fl);

// K(Id + D) for node deviations D.
EndoField curvature_field(const FluxDiscretization& d, const EndoField& D);
EndoField phi_field(const FluxDiscretization& d, const EndoField& a);
SparseMat linearization(const FluxDiscretization& d);

// sum V_i tr(K_i) / (m sum V_i)
double average_trace(const FluxDiscretization& d, const EndoField& K);

Vec to_vec(const EndoField& f);
EndoField from_vec(const Vec& v, int nodes, int rank);
EndoField constant_field(int nodes, const Mat& m);
double sup_norm(const EndoField& f);
EndoField operator-(const EndoField& a, const EndoField& b);
EndoField operator+(const EndoField& a, const EndoField& b);
EndoField operator*(double s, const EndoField& a);
// a <- (a + H^{-1} a^* H)/2 nodewise, the H-self-adjoint part.
EndoField h_hermitian_part(const EndoField& a, const EndoField& H);

// U(2)-invariant grid on the blowup of a U(2)-invariant compact surface. The
// coordinate sigma in [0, L], L = asinh(1/eps), has |z|^2 = sinh^2 s / sinh^2(L - s),
// so sigma ~ |zeta| near the exceptional divisor and sigma = L at infinity.
struct RadialGrid {
  double epsilon = 0.0;
  int n = 2;
  double L = 0.0;
  double dsigma = 0.0;
  int cells = 0;
  RealVec sigma;        // cell centres
  RealVec w;            // |z|^2 at centres
  RealVec face_P;       // dPhi/ds at faces 0..cells
  RealVec face_kappa;   // P^{n-1} / (ds/dsigma) at faces
  RealVec volume;

  static RadialGrid build(const GluingParams& params, const RadialPotential& phi, double dsigma_target);

  double w_of_sigma(double s) const;
  double sigma_of_rho(double rho) const;

  // Faces and volumes without bundle data.
  FluxDiscretization skeleton(int rank) const;

  // Natural cubic spline through the cell values (mirrored at both ends),
  // as a function of |z|.
  RadialProfile profile(const EndoField& values) const;
};

// Flat 4-torus (period 2 pi in each real coordinate), N^4 nodes.
struct TorusGrid {
  int N = 8;
  double h = 0.0;
  static TorusGrid build(int N);
  int index(int i, int j, int k, int l) const;
  Point4 node(int idx) const;
  FluxDiscretization skeleton(int rank) const;
};

}  // namespace hymglue
