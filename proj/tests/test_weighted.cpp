#include "hymglue/weighted.hpp"

#include <doctest.h>

#include <cmath>

using namespace hymglue;

namespace {

RadialProfile power(double gamma) {
  return [gamma](double r) { return Mat::Constant(1, 1, std::isinf(r) ? 0.0 : std::pow(r, gamma)); };
}

}  // namespace

TEST_CASE("indicial roots") {
  CHECK(indicial_roots(2, -4, 3) == std::vector<int>{-4, -3, -2, 0, 1, 2, 3});
  CHECK(indicial_roots(3, -5, 1) == std::vector<int>{-5, -4, 0, 1});
  CHECK_THROWS_AS(indicial_roots(1, -1, 1), DomainError);
}

TEST_CASE("weight functions") {
  CHECK(rho_weight(0.5) == 0.5);
  CHECK(rho_weight(5.0) == 2.0);
  CHECK(varrho_weight(1e-3, 1e-2) == 1e-2);
  CHECK(varrho_weight(0.1, 1e-2) == 0.1);
  CHECK(varrho_weight(3.0, 1e-2) == 1.0);
}

TEST_CASE("inclusion threshold") {
  CHECK(inclusion_predicate(-1.0, 1.0, 2));
  CHECK_FALSE(inclusion_predicate(-1.0, 2.0, 2));
  CHECK(inclusion_predicate(-0.5, 4.5, 3));
}

TEST_CASE("scaled section") {
  const RadialProfile s = power(1.5);
  const RadialProfile sr = scaled_section(s, 0.25, -0.5);
  // r^{-delta} s(r x) = 0.25^{0.5} (0.25 x)^{1.5}
  CHECK(std::abs(sr(1.3)(0, 0) - std::pow(0.25, 0.5) * std::pow(0.25 * 1.3, 1.5)) < 1e-14);
}

TEST_CASE("reference norm of a linear profile") {
  const RadialProfile s = [](double x) { return Mat::Constant(1, 1, 2.0 * x); };
  const ReferenceNorm n = reference_norm(s, 1.0, 2.0, 1, 0.5, 65);
  // sup |s| + sup |s'| = 4 + 2; s' is constant, so no Holder part
  CHECK(n.sup_part == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(n.seminorm_part < 1e-6);
}

TEST_CASE("|z|^delta has a scale-independent ladder") {
  WeightedNormSpec spec;
  spec.delta = -0.5;
  spec.space = Space::Xp;
  spec.r_min = std::ldexp(1.0, -12);
  spec.include_outer = false;
  const NormReport rep = weighted_holder_norm(power(-0.5), spec);
  REQUIRE(rep.ladder.size() > 4);
  for (const LadderEntry& e : rep.ladder)
    CHECK(e.norm.total() == doctest::Approx(rep.ladder.front().norm.total()).epsilon(1e-9));
}

TEST_CASE("weight comparison") {
  const RadialProfile s = [](double r) {
    const double t = std::isinf(r) ? 1.0 : 0.5 + std::atan(std::log(r)) / M_PI;
    Mat m(2, 2);
    m << std::cos(3 * t), Complex(0.2, 0.1) * t, Complex(0.2, -0.1) * t, 1.0 - t;
    return m;
  };
  for (double eps : {1e-2, 1e-3}) {
    const WeightComparison w = weight_comparison_check(s, -1.0, -0.5, eps);
    CHECK(w.pass);
    CHECK(w.lhs <= w.mid);
    CHECK(w.mid <= w.rhs);
  }
  CHECK_THROWS_AS(weight_comparison_check(s, -0.5, -1.0, 1e-2), DomainError);
}

TEST_CASE("L2 norm of a power on an annulus") {
  // |z|^gamma on C^2, weight rho^{-delta}: |S^3| * int r^{2 gamma - delta + 3} dr
  const double gamma = 0.5, delta = -1.0, a = 0.1, b = 1.0;
  const double e = 2 * gamma - delta + 4;
  const double exact = 2.0 * M_PI * M_PI * (std::pow(b, e) - std::pow(a, e)) / e;
  CHECK(std::pow(weighted_l2_norm(power(gamma), delta, 2, a, b), 2) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("norm specs are validated") {
  WeightedNormSpec spec;
  spec.alpha = 1.5;
  CHECK_THROWS(spec.validate());
}
