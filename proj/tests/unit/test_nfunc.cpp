#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/nfunc.hpp"

using namespace orlicz;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("catalog evaluations") {
  CHECK(make_catalog_function(catalog::Power{1, 2})(3.0) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(make_catalog_function(catalog::PowerOverP{2})(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(make_catalog_function(catalog::ExpLinear{})(0.0) == 0.0);
  CHECK(make_catalog_function(catalog::Power{2, 3})(-1.5) == doctest::Approx(2 * 3.375));
  const auto pw = make_catalog_function(catalog::PiecewiseExp{0.5});
  const double knot = std::pow(4.0, 2.0);
  // Both branches meet at the knot.
  CHECK(pw(knot * (1 - 1e-12)) == doctest::Approx(pw(knot * (1 + 1e-12))).epsilon(1e-9));
}

TEST_CASE("catalog rejects out-of-range parameters") {
  CHECK_THROWS_AS(make_catalog_function(catalog::Power{0, 2}), InvalidParameter);
  CHECK_THROWS_AS(make_catalog_function(catalog::Power{1, 1}), InvalidParameter);
  CHECK_THROWS_AS(make_catalog_function(catalog::ExpPower{1, 1}), InvalidParameter);
  CHECK_THROWS_AS(make_catalog_function(catalog::PowerOverP{0.5}), InvalidParameter);
  CHECK_THROWS_AS(make_catalog_function(catalog::PiecewiseExp{1.0}), InvalidParameter);
}

TEST_CASE("power carries class E and Delta2 metadata") {
  const auto U = make_catalog_function(catalog::Power{2.5, 3});
  REQUIRE(U.class_e());
  CHECK(U.class_e()->z0 == 0.0);
  CHECK(U.class_e()->B == 2.5);
  CHECK(U.class_e()->D == 1.0);
  REQUIRE(U.delta2());
  CHECK(U.delta2()->K(2.0) == doctest::Approx(8.0));
  CHECK_FALSE(make_catalog_function(catalog::PiecewiseExp{0.5}).delta2());
  CHECK_FALSE(make_catalog_function(catalog::PiecewiseExp{0.5}).class_e());
}

TEST_CASE("evaluation beyond the cap signals") {
  const auto U = make_catalog_function(catalog::ExpLinear{});
  CHECK_THROWS_AS(U(701.0), DomainOverflow);
  CHECK(std::isfinite(U(700.0)));
}

TEST_CASE("generalized inverse") {
  const auto sq = make_catalog_function(catalog::Power{1, 2});
  CHECK(generalized_inverse(sq, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(generalized_inverse(sq, 0.0) == 0.0);

  // Independent bisection on [1, 2] for e^x - x - 1 = 1.
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::exp(mid) - mid - 1.0 < 1.0 ? lo : hi) = mid;
  }
  const auto el = make_catalog_function(catalog::ExpLinear{});
  const double x = generalized_inverse(el, 1.0);
  CHECK(x == doctest::Approx(lo).epsilon(1e-10));
  CHECK(std::abs(el(x) - 1.0) <= 1e-10);

  CHECK_THROWS_AS(generalized_inverse(el, 1e305), DomainOverflow);
  CHECK_THROWS_AS(generalized_inverse(sq, -1.0), InvalidParameter);
}

TEST_CASE("generalized inverse inverts U and is nondecreasing") {
  std::mt19937_64 rng(11);
  for (const auto& U : catalog_samples()) {
    std::vector<double> xs;
    std::uniform_real_distribution<double> d(0.0, std::min(8.0, U.eval_domain_cap()));
    for (int i = 0; i < 200; ++i) xs.push_back(d(rng));
    std::sort(xs.begin(), xs.end());
    double prev = 0.0;
    for (double x : xs) {
      const double y = U(x);
      const double back = generalized_inverse(U, y);
      CHECK(std::abs(U(back) - y) <= 1e-10 * std::max(y, 1.0));
      CHECK(back >= prev);
      prev = back;
    }
  }
}

TEST_CASE("conjugate values") {
  const auto half_sq = make_catalog_function(catalog::PowerOverP{2});
  CHECK(conjugate(half_sq, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  for (const auto& U : catalog_samples()) CHECK(conjugate(U, 0.0) == 0.0);

  const auto sq = make_catalog_function(catalog::Power{1, 2});
  CHECK(conjugate(sq, 3.0) == doctest::Approx(2.25).epsilon(1e-10));

  // exp_linear at 1: dense grid maximum of y - (e^y - y - 1) as oracle.
  const auto el = make_catalog_function(catalog::ExpLinear{});
  double grid_max = 0.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double y = 2.0 * i / 2000000.0;
    grid_max = std::max(grid_max, y - (std::exp(y) - y - 1.0));
  }
  const double c = conjugate(el, 1.0);
  CHECK(c == doctest::Approx(grid_max).epsilon(1e-9));
  CHECK(c == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-10));
  CHECK(c == doctest::Approx((*el.conjugate_hint())(1.0)).epsilon(1e-10));
}

TEST_CASE("conjugate matches closed-form hints") {
  for (const auto& U : catalog_samples()) {
    if (!U.conjugate_hint()) continue;
    for (double x : linspace(-4.0, 4.0, 33)) {
      const double want = (*U.conjugate_hint())(x);
      CHECK(conjugate(U, x) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("conjugate of |x|^p/p is |x|^q/q") {
  for (double p : {1.5, 2.0, 3.0, 4.5}) {
    const double q = p / (p - 1.0);
    const auto U = make_catalog_function(catalog::PowerOverP{p});
    for (double x : linspace(-5.0, 5.0, 41)) {
      CHECK(std::abs(conjugate(U, x) - std::pow(std::abs(x), q) / q) <= 1e-8);
    }
  }
}

TEST_CASE("Young inequality, evenness and convexity of the conjugate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, 4.0);
  for (const auto& U : catalog_samples()) {
    for (int i = 0; i < 100; ++i) {
      const double x = d(rng);
      const double y = d(rng);
      CHECK(x * y <= U(x) + conjugate(U, y) + 1e-12 * (1 + x * y));
      CHECK(conjugate(U, -y) == conjugate(U, y));
      const double mid = conjugate(U, 0.5 * (x + y));
      CHECK(mid <= 0.5 * (conjugate(U, x) + conjugate(U, y)) + 1e-10);
    }
  }
}

TEST_CASE("biconjugate residual") {
  const auto sq = make_catalog_function(catalog::Power{1, 2});
  const std::vector<double> g5{0, 1, -1, 2, -2};
  CHECK(biconjugate_residual(sq, g5) <= 1e-6);
  const auto cube = make_catalog_function(catalog::PowerOverP{3});
  CHECK(biconjugate_residual(cube, linspace(-5, 5, 50)) <= 1e-6);
  const auto el = make_catalog_function(catalog::ExpLinear{});
  const std::vector<double> zero{0.0};
  CHECK(biconjugate_residual(el, zero) == 0.0);
}

TEST_CASE("sampled invariants hold across the catalog") {
  for (const auto& U : catalog_samples()) {
    const auto bad = check_invariants(U, 20.0);
    INFO(U.name());
    CHECK(bad.empty());
  }
}

TEST_CASE("invariant checker notices a non-convex evaluator") {
  NFunction bad("sqrt", [](double x) { return std::sqrt(x); }, 100.0);
  CHECK_FALSE(check_invariants(bad, 10.0).empty());
}
