#include "hymglue/scenario.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace hymglue {

namespace {

const char* kModule = "scenario";

Jet<4> radius_squared(const Point4& x) {
  Jet<4> w(0.0);
  for (int a = 0; a < 4; ++a) {
    const Jet<4> xa = Jet<4>::variable(x[a], a);
    w = w + xa * xa;
  }
  return w;
}

Mat gauge_direction(double amplitude) {
  Mat B(2, 2);
  B << 1.0, 0.5, 0.5, -1.0;
  return amplitude * B;
}

// Pauli matrices scaled to unit Frobenius norm.
Mat pauli(int which) {
  Mat p = Mat::Zero(2, 2);
  if (which == 1) p << 0.0, 1.0, 1.0, 0.0;
  if (which == 2) p << 0.0, -I_unit, I_unit, 0.0;
  if (which == 3) p << 1.0, 0.0, 0.0, -1.0;
  return p / std::sqrt(2.0);
}

template <class T>
T fourier_potential(const std::vector<FourierMode>& modes, const std::array<T, 4>& x) {
  using std::cos;
  T phi = 0.0 * x[0];
  for (const FourierMode& f : modes) {
    T arg = f.phase + 0.0 * x[0];
    for (int a = 0; a < 4; ++a) arg = arg + f.wavevector[a] * x[a];
    phi = phi + f.amplitude * cos(arg);
  }
  return phi;
}

// Exact flux of the divided-out factor (1 + |z|^2)^{-k}: through a face it
// is P^{n-1} w d/dw log (1 + w)^{-k}, and -k at infinity.
void add_line_factor(Scenario& s, double k) {
  const RadialGrid& g = *s.grid;
  RealVec flux(g.cells + 1);
  for (int f = 0; f <= g.cells; ++f) {
    if (f == 0) {
      flux[f] = 0.0;
    } else if (f == g.cells) {
      flux[f] = -k * std::pow(g.face_P[f], g.n - 1);
    } else {
      const double w = g.w_of_sigma(f * g.dsigma);
      flux[f] = -k * std::pow(g.face_P[f], g.n - 1) * w / (1.0 + w);
    }
  }
  s.disc.source.resize(g.cells);
  for (int i = 0; i < g.cells; ++i) {
    s.disc.source[i] = -(flux[i + 1] - flux[i]) / g.volume[i];
  }
}


// `scaled` is H(w) (1 + w)^k - Id for the unglued metric H. The node metrics
// are h_eps = gamma H + (1 - gamma) Id with (1 + w)^{-k} divided out, whose
// deviation gamma scaled + (1 - gamma)((1 + w)^k - 1) Id has no cancellation.
void fill_radial(Scenario& s, double k, const std::function<Mat(double)>& scaled) {
  const ScenarioConfig& cfg = s.config;
  s.params = GluingParams::make(cfg.epsilon, s.n, {BlowupPoint{}}, CutoffProfile{cfg.cutoff});
  s.base = base::fubini_study();
  s.radial_base = base::radial_fubini_study();
  s.grid = RadialGrid::build(*s.params, s.radial_base, cfg.dsigma);
  s.disc = s.grid->skeleton(s.rank);
  const GluingParams& params = *s.params;
  const double r = params.local_r(0);
  const Mat id = Mat::Identity(s.rank, s.rank);
  EndoField D(s.grid->cells);
  for (int i = 0; i < s.grid->cells; ++i) {
    const double w = s.grid->w[i];
    const double g1 = params.cutoff(std::sqrt(w) / r);
    D[i] = (1.0 - g1) * std::expm1(k * std::log1p(w)) * id;
    if (g1 > 0.0) D[i] += g1 * scaled(w);
  }
  s.disc.set_deviation(std::move(D));
  for (const Mat& H : s.disc.reference)
    if (min_eigenvalue(H) <= 0.0) throw PositivityError(kModule, "glued bundle metric lost positivity");
  s.q = s.grid->cells - 1;
  if (k != 0.0) add_line_factor(s, k);
}

}  // namespace

ScenarioId parse_scenario(const std::string& s) {
  if (s == "flat-torus-line") return ScenarioId::FlatTorusLine;
  if (s == "radial-ball-line") return ScenarioId::RadialBallLine;
  if (s == "rank2-diag") return ScenarioId::Rank2Diag;
  if (s == "rank2-gauge-flat") return ScenarioId::Rank2GaugeFlat;
  throw DomainError(kModule, "unknown scenario '" + s + "'");
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::FlatTorusLine: return "flat-torus-line";
    case ScenarioId::RadialBallLine: return "radial-ball-line";
    case ScenarioId::Rank2Diag: return "rank2-diag";
    case ScenarioId::Rank2GaugeFlat: return "rank2-gauge-flat";
  }
  return "unknown";
}

Scenario make_scenario(const ScenarioConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw DomainError(kModule, "epsilon must lie in (0, 1)");
  if (cfg.degree < 0) throw DomainError(kModule, "degree must be non-negative");
  Scenario s;
  s.config = cfg;
  const double k = cfg.degree;
  switch (cfg.id) {
    case ScenarioId::FlatTorusLine: {
      s.rank = 1;
      s.torus = TorusGrid::build(cfg.torus_nodes);
      s.disc = s.torus->skeleton(1);
      const auto modes = cfg.fourier;
      s.base = base::flat();
      s.radial_base = base::radial_flat();
      s.h = [modes](const Point4& x) {
        std::array<Jet<4>, 4> v{Jet<4>::variable(x[0], 0), Jet<4>::variable(x[1], 1), Jet<4>::variable(x[2], 2),
                                Jet<4>::variable(x[3], 3)};
        return MatJet::scaled(exp(-fourier_potential(modes, v)), Mat::Identity(1, 1));
      };
      EndoField D(s.disc.nodes());
      for (int i = 0; i < s.disc.nodes(); ++i) {
        const Point4 x = s.torus->node(i);
        const std::array<double, 4> v{x[0], x[1], x[2], x[3]};
        D[i] = Mat::Constant(1, 1, std::expm1(-fourier_potential(modes, v)));
      }
      s.disc.set_deviation(std::move(D));
      s.c0 = 0.0;
      s.q = 0;
      s.topology = TopologicalData{0.0, std::pow(2.0 * M_PI, 4), 1, 2, {}};
      break;
    }
    case ScenarioId::RadialBallLine: {
      s.rank = 1;
      s.radial_h = [k](double w) { return Mat(Mat::Constant(1, 1, std::pow(1.0 + w, -k))); };
      s.h = [k](const Point4& x) { return MatJet::scaled(pow(1.0 + radius_squared(x), -k), Mat::Identity(1, 1)); };
      fill_radial(s, k, [](double) { return Mat(Mat::Zero(1, 1)); });
      s.c0 = 2.0 * k;
      s.topology = TopologicalData{k, 1.0, 1, 2, {1.0}};
      break;
    }
    case ScenarioId::Rank2Diag: {
      s.rank = 2;
      const double b = cfg.block_bump;
      s.radial_h = [k, b](double w) {
        Mat H = Mat::Zero(2, 2);
        H(0, 0) = std::pow(1.0 + w, -k);
        H(1, 1) = std::pow(1.0 + w, -k) * std::exp(-b * log_bump(w));
        return H;
      };
      s.h = [k, b](const Point4& x) {
        const Jet<4> w = radius_squared(x);
        const Jet<4> base = pow(1.0 + w, -k);
        Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2);
        e0(0, 0) = 1.0;
        e1(1, 1) = 1.0;
        return MatJet::scaled(base, e0) + MatJet::scaled(base * exp(-b * log_bump(w)), e1);
      };
      fill_radial(s, k, [b](double w) {
        Mat D = Mat::Zero(2, 2);
        D(1, 1) = std::expm1(-b * log_bump(w));
        return D;
      });
      s.c0 = 2.0 * k;
      s.topology = TopologicalData{2.0 * k, 1.0, 2, 2, {1.0}};
      s.parallel = {pauli(1), pauli(2), pauli(3)};
      break;
    }
    case ScenarioId::Rank2GaugeFlat: {
      s.rank = 2;
      const Mat B = gauge_direction(cfg.gauge_amplitude);
      s.radial_h = [B](double w) { return Mat((2.0 * log_bump(w) * B).exp()); };
      s.h = [B](const Point4& x) { return exp_scaled(2.0 * log_bump(radius_squared(x)), B); };
      const Eigen::SelfAdjointEigenSolver<Mat> eb(B);
      fill_radial(s, 0.0, [eb](double w) {
        const RealVec d = (2.0 * log_bump(w) * eb.eigenvalues()).array().unaryExpr([](double x) { return std::expm1(x); });
        return Mat(eb.eigenvectors() * d.cast<Complex>().asDiagonal() * eb.eigenvectors().adjoint());
      });
      s.c0 = 0.0;
      s.topology = TopologicalData{0.0, 1.0, 2, 2, {1.0}};
      s.parallel = {pauli(1), pauli(2), pauli(3)};
      break;
    }
  }
  s.c_eps = average_trace(s.disc, s.curvature());
  return s;
}

EndoField Scenario::curvature() const { return curvature_field(disc, disc.deviation); }

RadialProfile Scenario::profile(const EndoField& f) const {
  if (!grid) throw DomainError(kModule, "profiles exist for radial scenarios only");
  return grid->profile(f);
}

NormReport Scenario::field_norm_report(const EndoField& f, int k, double delta, double alpha) const {
  if (!grid) throw DomainError(kModule, "weighted norms exist for radial scenarios only");
  WeightedNormSpec spec;
  spec.k = k;
  spec.alpha = alpha;
  spec.delta = delta;
  spec.epsilon = grid->epsilon;
  spec.space = Space::BlpX;
  spec.ladder_subdivisions = config.ladder_subdivisions;
  return weighted_holder_norm(profile(f), spec);
}

double Scenario::field_norm(const EndoField& f, int k, double delta, double alpha) const {
  if (!grid) return sup_norm(f);
  return field_norm_report(f, k, delta, alpha).total();
}

}  // namespace hymglue
