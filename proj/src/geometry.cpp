#include "hymglue/geometry.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace hymglue {

namespace {

const char* kModule = "geometry";

// Polynomial coefficients (ascending powers of t) of the profile on [0, 1].
std::vector<double> profile_coefficients(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::Smoothstep5: return {0, 0, 0, 10, -15, 6};
    case CutoffKind::Smoothstep7:
    default: return {0, 0, 0, 0, 35, -84, 70, -20};
  }
}

double poly_derivative(const std::vector<double>& c, double t, int order) {
  double out = 0.0;
  for (int p = static_cast<int>(c.size()) - 1; p >= order; --p) {
    double f = c[p];
    for (int q = 0; q < order; ++q) f *= (p - q);
    out = out * t + f;
  }
  return out;
}

template <class T>
T bs_exterior(const std::array<T, 4>& x) {
  using std::log;
  const T w = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  return w + 0.5 * log(w);
}

template <class T>
T bs_interior(const std::array<T, 4>& x) {
  using std::log;
  const T uu = x[0] * x[0] + x[1] * x[1];
  const T vv = x[2] * x[2] + x[3] * x[3];
  return uu * (1.0 + vv) + 0.5 * log(1.0 + vv);
}

std::array<Jet<4>, 4> jet_variables(const Point4& x) {
  return {Jet<4>::variable(x[0], 0), Jet<4>::variable(x[1], 1), Jet<4>::variable(x[2], 2),
          Jet<4>::variable(x[3], 3)};
}

Mat metric_from_hessian(const Eigen::Matrix4d& h) {
  Mat g(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      g(j, k) = 0.25 * Complex(h(2 * j, 2 * k) + h(2 * j + 1, 2 * k + 1),
                               h(2 * j, 2 * k + 1) - h(2 * j + 1, 2 * k));
  return hermitian_part(g);
}

void check_positive(const Mat& g, double tol) {
  const double lo = min_eigenvalue(g);
  if (!(lo > tol)) throw PositivityError(kModule, "metric not positive definite (min eigenvalue " + std::to_string(lo) + ")");
}

std::size_t nearest_point(const CPoint& z, const GluingParams& params) {
  std::size_t best = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.points.size(); ++i) {
    const double ratio = (z - params.points[i].center).norm() / params.local_r(i);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return best;
}

void require_dimension(int n) {
  if (n != 2) throw UnsupportedDimensionError(kModule, "Burns-Simanca model is implemented for n = 2 only");
}

}  // namespace

double r_epsilon(double epsilon, int n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError(kModule, "epsilon must lie in (0, 1)");
  if (n < 2) throw DomainError(kModule, "complex dimension must be at least 2");
  return std::pow(epsilon, static_cast<double>(n - 1) / n);
}

double CutoffProfile::derivative(double x, int order) const {
  if (order < 0 || order > 4) throw DomainError(kModule, "cutoff derivatives are available up to order 4");
  const double t = x - 1.0;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return order == 0 ? 1.0 : 0.0;
  return poly_derivative(profile_coefficients(kind_), t, order);
}

double CutoffProfile::sampled_c4_norm(int samples) const {
  double total = 0.0;
  for (int j = 0; j <= 4; ++j) {
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double x = 1.0 + static_cast<double>(i) / (samples - 1);
      sup = std::max(sup, std::abs(std::pow(x, j) * derivative(x, j)));
    }
    total += sup;
  }
  return total;
}

GluingParams GluingParams::make(double epsilon, int n, std::vector<BlowupPoint> points, CutoffProfile cutoff) {
  GluingParams p;
  p.epsilon = epsilon;
  p.n = n;
  p.r_eps = r_epsilon(epsilon, n);
  if (points.empty()) throw DomainError(kModule, "at least one blowup point is required");
  p.points = std::move(points);
  p.cutoff = cutoff;
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    if (!(p.points[i].weight > 0.0)) throw DomainError(kModule, "blowup weights must be positive");
    if (!(p.local_epsilon(i) < 1.0)) throw DomainError(kModule, "weighted gluing scale must be below 1");
  }
  for (std::size_t i = 0; i < p.points.size(); ++i)
    for (std::size_t j = i + 1; j < p.points.size(); ++j) {
      const double d = (p.points[i].center - p.points[j].center).norm();
      if (d <= 2.0 * (p.local_r(i) + p.local_r(j)))
        throw DomainError(kModule, "necks of distinct blowup points overlap");
    }
  return p;
}

ChartPoint classify(const CPoint& z, const GluingParams& params) {
  ChartPoint out;
  out.point_index = nearest_point(z, params);
  const std::size_t i = out.point_index;
  const CPoint local = z - params.points[i].center;
  const double rho = local.norm();
  const double r = params.local_r(i);
  if (rho > 2.0 * r) {
    out.region = Region::Outer;
    out.chart = Chart::OuterZ;
    out.coords = z;
  } else if (rho >= r) {
    out.region = Region::Neck;
    out.chart = Chart::AnnulusZ;
    out.coords = z;
  } else {
    out.region = Region::Inner;
    out.chart = Chart::InnerZeta;
    out.coords = local / params.local_epsilon(i);
  }
  return out;
}

CPoint to_global_z(const ChartPoint& p, const GluingParams& params) {
  const CPoint& c = params.points.at(p.point_index).center;
  const double e = params.local_epsilon(p.point_index);
  switch (p.chart) {
    case Chart::OuterZ:
    case Chart::AnnulusZ: return p.coords;
    case Chart::InnerZeta: return c + e * p.coords;
    case Chart::BlowupInterior:
    default: {
      if (std::abs(p.coords[0]) == 0.0) throw DomainError(kModule, "point lies on the exceptional divisor");
      return c + e * CPoint(p.coords[0], p.coords[0] * p.coords[1]);
    }
  }
}

std::pair<double, double> cutoffs(const ChartPoint& p, const GluingParams& params) {
  if (p.chart != Chart::OuterZ && p.chart != Chart::AnnulusZ)
    throw RegionError(kModule, "cutoffs are defined on the outer and annulus charts");
  const std::size_t i = nearest_point(p.coords, params);
  const double rho = (p.coords - params.points[i].center).norm();
  const double g1 = params.cutoff(rho / params.local_r(i));
  return {g1, 1.0 - g1};
}

namespace base {

KahlerPotential flat() {
  return KahlerPotential::from([](const auto& x) { return 0.0 * x[0]; });
}

KahlerPotential fubini_study() {
  return KahlerPotential::from([](const auto& x) {
    using std::log;
    const auto w = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    return log(1.0 + w) - w;
  });
}

KahlerPotential quartic(double c) {
  return KahlerPotential::from([c](const auto& x) {
    return c * (x[0] * x[0] + x[1] * x[1]) * (x[2] * x[2] + x[3] * x[3]);
  });
}

RadialPotential radial_flat() {
  return RadialPotential::from([](const auto& w) { return 0.0 * w; });
}

RadialPotential radial_fubini_study() {
  RadialPotential p = RadialPotential::from([](const auto& w) {
    using std::log;
    return log(1.0 + w) - w;
  }, 1.0);
  p.p_exact = [](double w) { return w / (1.0 + w); };
  return p;
}

}  // namespace base

double burns_simanca_potential(const ChartPoint& zeta, int n) {
  require_dimension(n);
  if (zeta.chart == Chart::InnerZeta) {
    const double r = zeta.coords.norm();
    if (!(r > 0.0)) throw DomainError(kModule, "exterior chart excludes zeta = 0");
    return r * r + std::log(r);
  }
  if (zeta.chart == Chart::BlowupInterior) {
    const double u = std::abs(zeta.coords[0]);
    const double v2 = std::norm(zeta.coords[1]);
    if (!(u > 0.0)) throw DomainError(kModule, "log|u| is singular on the exceptional divisor");
    return u * u * (1.0 + v2) + std::log(u) + 0.5 * std::log(1.0 + v2);
  }
  throw RegionError(kModule, "Burns-Simanca potential needs a zeta or blowup-interior chart");
}

Mat burns_simanca_metric(const CPoint& zeta) {
  if (!(zeta.norm() > 0.0)) throw DomainError(kModule, "exterior chart excludes zeta = 0");
  return metric_from_potential([](const Point4& x) { return bs_exterior(jet_variables(x)); }, to_real(zeta));
}

Mat burns_simanca_interior_metric(const CPoint& uv) {
  return metric_from_potential([](const Point4& x) { return bs_interior(jet_variables(x)); }, to_real(uv));
}

double glued_potential(const ChartPoint& p, const GluingParams& params, const KahlerPotential& phi) {
  if (p.region != Region::Neck || p.chart != Chart::AnnulusZ)
    throw RegionError(kModule, "glued potential is evaluated in the annulus r_eps <= |z| <= 2 r_eps");
  const Point4 x = to_real(p.coords - params.points[p.point_index].center);
  const std::array<double, 4> xa{x[0], x[1], x[2], x[3]};
  return glued_potential_local(xa, params, p.point_index, [&](const std::array<double, 4>&) { return phi.value(x); });
}

Mat metric_from_potential(const std::function<double(const Point4&)>& sampler, const Point4& x, double h,
                          double tol) {
  static const double w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  const double f0 = sampler(x);
  Eigen::Matrix4d hess;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      double acc = 0.0;
      if (a == b) {
        static const double c[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
        for (int i = 0; i < 5; ++i) {
          Point4 y = x;
          y[a] += (i - 2) * h;
          acc += c[i] * (i == 2 ? f0 : sampler(y));
        }
        acc /= 12.0 * h * h;
      } else {
        for (int i = 0; i < 5; ++i) {
          if (w[i] == 0.0) continue;
          for (int j = 0; j < 5; ++j) {
            if (w[j] == 0.0) continue;
            Point4 y = x;
            y[a] += (i - 2) * h;
            y[b] += (j - 2) * h;
            acc += w[i] * w[j] * sampler(y);
          }
        }
        acc /= 144.0 * h * h;
      }
      hess(a, b) = hess(b, a) = acc;
    }
  }
  const Mat g = metric_from_hessian(hess);
  check_positive(g, tol);
  return g;
}

Mat metric_from_potential(const std::function<Jet<4>(const Point4&)>& potential, const Point4& x, double tol) {
  const Jet<4> j = potential(x);
  const Mat g = metric_from_hessian(j.h);
  check_positive(g, tol);
  return g;
}

Mat glued_metric(const ChartPoint& p, const GluingParams& params, const KahlerPotential& phi) {
  require_dimension(params.n);
  const std::size_t i = p.point_index;
  const double e = params.local_epsilon(i);
  if (p.chart == Chart::BlowupInterior) return e * e * burns_simanca_interior_metric(p.coords);
  if (p.region == Region::Inner) return burns_simanca_metric(p.coords);
  const Point4 x = to_real(p.coords - params.points[i].center);
  if (p.region == Region::Outer) {
    return metric_from_potential(
        [&](const Point4& y) {
          const auto v = jet_variables(y);
          return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3] + phi.jet(y);
        },
        x);
  }
  return metric_from_potential(
      [&](const Point4& y) { return glued_potential_local(jet_variables(y), params, i, [&](const auto&) { return phi.jet(y); }); },
      x);
}

Mat lambda_contract(const Mat& g, const std::vector<Mat>& beta) {
  const int n = static_cast<int>(g.rows());
  if (static_cast<int>(beta.size()) != n * n) throw DomainError(kModule, "beta must carry n*n components");
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw SingularError(kModule, "metric is singular");
  const Mat gi = lu.inverse();
  Mat out = Mat::Zero(beta[0].rows(), beta[0].cols());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out += gi(k, j) * beta[j * n + k];
  return out;
}

Complex lambda_contract(const Mat& g, const Mat& beta_scalar) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw SingularError(kModule, "metric is singular");
  return (beta_scalar * lu.inverse()).trace();
}

double kahler_closure_residual(const CPoint& z, const GluingParams& params, const KahlerPotential& phi, double h) {
  auto metric_at = [&](const Point4& x) { return glued_metric(classify(to_complex(x), params), params, phi); };
  const Point4 x0 = to_real(z);
  static const double w[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  std::array<Mat, 4> d;
  for (int a = 0; a < 4; ++a) {
    d[a] = Mat::Zero(2, 2);
    for (int i = 0; i < 5; ++i) {
      if (w[i] == 0.0) continue;
      Point4 y = x0;
      y[a] += (i - 2) * h;
      d[a] += w[i] * metric_at(y);
    }
    d[a] /= 12.0 * h;
  }
  std::array<Mat, 2> dz;
  for (int l = 0; l < 2; ++l) dz[l] = 0.5 * (d[2 * l] - I_unit * d[2 * l + 1]);
  double res = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) res = std::max(res, std::abs(dz[l](j, k) - dz[j](l, k)));
  return res;
}

RadialMetricData glued_radial(double w, const GluingParams& params, const RadialPotential& phi) {
  const double e = params.local_epsilon(0);
  const double r = params.local_r(0);
  Jet<1> W = Jet<1>::variable(w, 0);
  const Jet<1> g1 = params.cutoff(sqrt(W) / r);
  Jet<1> f = W;
  if (w >= r * r) f = f + g1 * phi.jet(W);
  if (w <= 4.0 * r * r) f = f + (1.0 - g1) * (0.5 * e * e) * log(W / (e * e));
  const double d1 = f.g[0];
  const double d2 = f.h(0, 0);
  if (w > 4.0 * r * r && phi.p_exact) return {phi.p_exact(w), w * (d1 + w * d2)};
  return {w * d1, w * (d1 + w * d2)};
}

std::vector<ChartSample> sample_chart(const GluingParams& params, const KahlerPotential& phi, Chart chart,
                                      int resolution) {
  std::vector<ChartSample> out;
  const double r = params.local_r(0);
  const double e = params.local_epsilon(0);
  const CPoint c = params.points[0].center;
  for (int a = 0; a < resolution; ++a) {
    for (int b = 0; b < resolution; ++b) {
      const double s = (a + 0.5) / resolution;
      const double t = (b + 0.5) / resolution;
      ChartPoint p;
      p.point_index = 0;
      double pot = 0.0;
      if (chart == Chart::OuterZ) {
        const CPoint z = c + CPoint(Complex(-1.0 + 2.0 * s, 0.0), Complex(-1.0 + 2.0 * t, 0.0));
        p = classify(z, params);
        if (p.region != Region::Outer) continue;
        pot = (z - c).squaredNorm() + phi.value(to_real(z - c));
      } else if (chart == Chart::AnnulusZ) {
        const double rho = r * (1.0 + s);
        const double ang = 2.0 * M_PI * t;
        p.chart = Chart::AnnulusZ;
        p.region = Region::Neck;
        p.coords = c + CPoint(Complex(rho * std::cos(ang), 0.0), Complex(rho * std::sin(ang), 0.0));
        pot = glued_potential(p, params, phi);
      } else if (chart == Chart::InnerZeta) {
        const CPoint zeta(Complex(-2.0 + 4.0 * s, 0.0), Complex(-2.0 + 4.0 * t, 0.0));
        if (zeta.norm() < 1e-12) continue;
        p.chart = Chart::InnerZeta;
        p.region = Region::Inner;
        p.coords = zeta;
        pot = e * e * burns_simanca_potential(p, params.n);
      } else {
        p.chart = Chart::BlowupInterior;
        p.region = Region::Inner;
        p.coords = CPoint(Complex(-1.0 + 2.0 * s, 0.0), Complex(-1.0 + 2.0 * t, 0.0));
        pot = e * e * burns_simanca_potential(p, params.n);
      }
      const Mat g = glued_metric(p, params, phi);
      out.push_back({to_real(to_global_z(p, params)), pot, min_eigenvalue(g)});
    }
  }
  return out;
}

}  // namespace hymglue
