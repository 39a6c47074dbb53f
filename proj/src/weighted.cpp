#include "hymglue/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hymglue {

namespace {

const char* kModule = "weighted";

std::vector<Mat> differentiate(const std::vector<Mat>& f, double h) {
  const std::size_t n = f.size();
  std::vector<Mat> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> ladder(const WeightedNormSpec& spec) {
  std::vector<double> out;
  const double q = std::pow(0.5, 1.0 / spec.ladder_subdivisions);
  switch (spec.space) {
    case Space::Xp: {
      const double lo = spec.r_min > 0.0 ? spec.r_min : std::ldexp(1.0, -30);
      for (int j = 0; std::pow(q, j) >= lo; ++j) out.push_back(std::pow(q, j));
      break;
    }
    case Space::Bl0Cn:
      for (int j = 0; std::pow(q, -j) <= spec.r_max; ++j) out.push_back(std::pow(q, -j));
      break;
    case Space::BlpX: {
      const double e = *spec.epsilon;
      for (int j = 0; std::pow(q, j) > e; ++j) out.push_back(std::pow(q, j));
      out.push_back(e);
      break;
    }
    case Space::AnnulusRestriction: {
      const double lo = spec.r_min > 0.0 ? spec.r_min : (spec.epsilon ? *spec.epsilon : std::ldexp(1.0, -30));
      for (int j = 0; spec.r_max * std::pow(q, j) >= lo * (1.0 - 1e-12); ++j) out.push_back(spec.r_max * std::pow(q, j));
      break;
    }
  }
  if (out.empty()) throw DomainError(kModule, "dyadic ladder has no sample support");
  return out;
}

}  // namespace

void WeightedNormSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(kModule, "Holder exponent must lie in (0, 1)");
  if (k < 0 || k > 4) throw DomainError(kModule, "derivative count must lie in [0, 4]");
  if (ref_points < 5) throw DomainError(kModule, "reference grid too coarse");
  if (ladder_subdivisions < 1) throw DomainError(kModule, "ladder subdivisions must be positive");
  if (space == Space::BlpX && !(epsilon && *epsilon > 0.0 && *epsilon < 1.0))
    throw DomainError(kModule, "Bl_p X norms need epsilon in (0, 1)");
}

ReferenceNorm reference_norm(const RadialProfile& s, double a, double b, int k, double alpha, int points) {
  const double h = (b - a) / (points - 1);
  std::vector<Mat> f(points);
  for (int i = 0; i < points; ++i) f[i] = s(a + i * h);
  ReferenceNorm out;
  std::vector<Mat> d = f;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) d = differentiate(d, h);
    double sup = 0.0;
    for (const Mat& m : d) sup = std::max(sup, m.norm());
    out.sup_part += sup;
  }
  const int max_sep = static_cast<int>(std::floor(0.5 * (points - 1) + 1e-9));
  double semi = 0.0;
  for (int i = 0; i < points; ++i)
    for (int l = i + 1; l < points && l - i <= max_sep; ++l)
      semi = std::max(semi, (d[i] - d[l]).norm() / std::pow((l - i) * h, alpha));
  out.seminorm_part = semi;
  return out;
}

RadialProfile scaled_section(const RadialProfile& s, double r, double delta) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(kModule, "scale must be positive and finite");
  const double c = std::pow(r, -delta);
  return [s, r, c](double x) { return Mat(c * s(r * x)); };
}

NormReport weighted_holder_norm(const RadialProfile& s, const WeightedNormSpec& spec) {
  spec.validate();
  NormReport rep;
  const int k = spec.k;
  const double al = spec.alpha;
  const int np = spec.ref_points;
  if (spec.include_outer && (spec.space == Space::Xp || spec.space == Space::BlpX)) {
    const RadialProfile at_infinity = [&s](double y) {
      return s(y > 0.0 ? 1.0 / y : std::numeric_limits<double>::infinity());
    };
    rep.outer = reference_norm(at_infinity, 0.0, 1.0, k, al, np).total();
  }
  for (double r : ladder(spec)) {
    const ReferenceNorm n = reference_norm(scaled_section(s, r, spec.delta), 1.0, 2.0, k, al, np);
    rep.ladder.push_back({r, n});
    rep.annulus = std::max(rep.annulus, n.total());
  }
  if (spec.space == Space::BlpX) {
    const double e = *spec.epsilon;
    const RadialProfile inner = [&s, e](double x) { return s(e * x); };
    rep.inner = std::pow(e, -spec.delta) * reference_norm(inner, 0.0, 1.0, k, al, np).total();
  } else if (spec.space == Space::Bl0Cn) {
    rep.inner = reference_norm(s, 0.0, 1.0, k, al, np).total();
  }
  return rep;
}

SplitNorm split_norm_equivalence(const RadialProfile& s, const WeightedNormSpec& spec, int n,
                                 const std::function<double(double)>& cutoff) {
  spec.validate();
  if (spec.space != Space::BlpX) throw DomainError(kModule, "split norm compares Bl_p X norms");
  const double e = *spec.epsilon;
  const double re = std::pow(e, static_cast<double>(n - 1) / n);
  SplitNorm out;
  out.three_region = weighted_holder_norm(s, spec).total();

  WeightedNormSpec xp = spec;
  xp.space = Space::Xp;
  xp.r_min = 0.5 * re;
  const RadialProfile g1s = [&](double x) { return Mat(cutoff(x / re) * s(x)); };
  const double a = weighted_holder_norm(g1s, xp).total();

  WeightedNormSpec bl = spec;
  bl.space = Space::Bl0Cn;
  bl.r_max = 2.0 * re / e;
  const RadialProfile g2s = [&](double x) {
    const double z = e * x;
    return Mat((1.0 - cutoff(z / re)) * s(z));
  };
  const double b = weighted_holder_norm(g2s, bl).total();
  out.split = a + std::pow(e, -spec.delta) * b;
  out.ratio = out.three_region / out.split;
  return out;
}

WeightComparison weight_comparison_check(const RadialProfile& s, double delta, double delta_prime, double epsilon,
                                         int k, double alpha) {
  if (delta > delta_prime) throw DomainError(kModule, "weight comparison needs delta <= delta'");
  WeightedNormSpec spec;
  spec.k = k;
  spec.alpha = alpha;
  spec.epsilon = epsilon;
  spec.space = Space::BlpX;
  spec.delta = delta;
  WeightComparison out;
  out.lhs = weighted_holder_norm(s, spec).total();
  spec.delta = delta_prime;
  out.mid = weighted_holder_norm(s, spec).total();
  out.rhs = std::pow(epsilon, delta - delta_prime) * out.lhs;
  const double slack = 1e-12 * std::max(1.0, out.rhs);
  out.pass = out.lhs <= out.mid + slack && out.mid <= out.rhs + slack;
  return out;
}

double rho_weight(double r) { return std::min(r, 2.0); }

double varrho_weight(double r, double epsilon) {
  if (r >= 1.0) return 1.0;
  if (r <= epsilon) return epsilon;
  return r;
}

double weighted_l2_norm(const RadialProfile& s, double delta, int n, double r_min, double r_max, int points) {
  if (!(r_min > 0.0 && r_max > r_min)) throw DomainError(kModule, "quadrature range must satisfy 0 < r_min < r_max");
  const double t0 = std::log(r_min);
  const double t1 = std::log(r_max);
  const double dt = (t1 - t0) / (points - 1);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(t0 + i * dt);
    const double f = s(r).squaredNorm() * std::pow(rho_weight(r), -delta) * std::pow(r, 2 * n);
    sum += (i == 0 || i == points - 1 ? 0.5 : 1.0) * f;
  }
  double sphere = 2.0 * std::pow(M_PI, n);
  for (int j = 2; j < n; ++j) sphere /= j;
  const double value = sphere * sum * dt;
  if (!std::isfinite(value)) throw DomainError(kModule, "quadrature overflow");
  return std::sqrt(value);
}

double weighted_sobolev_norm(const RadialProfile& s, int k, double delta, int n, double r_min, double r_max,
                             int points) {
  if (k < 0 || k > 4) throw DomainError(kModule, "derivative count must lie in [0, 4]");
  double total = 0.0;
  RadialProfile d = s;
  for (int j = 0; j <= k; ++j) {
    total += weighted_l2_norm(d, delta - j, n, r_min, r_max, points);
    const RadialProfile prev = d;
    d = [prev](double r) {
      const double h = 1e-4 * r;
      return Mat((prev(r + h) - prev(r - h)) / (2.0 * h));
    };
  }
  return total;
}

bool inclusion_predicate(double delta, double delta_prime, int n) { return delta_prime < 2.0 * delta + 2.0 * n; }

std::vector<int> indicial_roots(int n, int lo, int hi) {
  if (n < 2) throw DomainError(kModule, "complex dimension must be at least 2");
  std::vector<int> out;
  for (int i = lo; i <= hi; ++i)
    if (!(i > 2 - 2 * n && i < 0)) out.push_back(i);
  return out;
}

}  // namespace hymglue
