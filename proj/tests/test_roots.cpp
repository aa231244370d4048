#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/roots.hpp"

using namespace bbres;

namespace {

// lambda^3 - lambda^2 - t as a univariate polynomial in lambda.
MultiPoly cubic_family() {
  const std::vector<std::string> names{"l"};
  return parse_poly("l^3 - l^2 - t", names, "t");
}

Complex symmetric(const std::vector<Complex>& r, int k) {
  // elementary symmetric function e_k by direct expansion
  std::vector<Complex> e(r.size() + 1, 0.0);
  e[0] = 1.0;
  for (const Complex& root : r)
    for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += root * e[j - 1];
  return e[k];
}

}  // namespace

TEST_CASE("cubic at t=0 factors exactly into {0, 0, 1}") {
  const auto roots = roots_univariate(cubic_family(), 0.0);
  REQUIRE(roots.size() == 3);
  int zeros = 0, ones = 0;
  for (const Complex& r : roots) {
    if (std::abs(r) == 0.0) ++zeros;
    if (std::abs(r - 1.0) < 1e-12) ++ones;
  }
  CHECK(zeros == 2);
  CHECK(ones == 1);
}

TEST_CASE("cubic roots satisfy the elementary symmetric relations") {
  for (double t : {0.5, 0.1, 0.01, 1e-4}) {
    const auto roots = roots_univariate(cubic_family(), t);
    REQUIRE(roots.size() == 3);
    CHECK(std::abs(symmetric(roots, 1) - 1.0) < 1e-10);
    CHECK(std::abs(symmetric(roots, 2)) < 1e-10);
    CHECK(std::abs(symmetric(roots, 3) - t) < 1e-10);
  }
}

TEST_CASE("double root of lambda^2 + 2 lambda + 1") {
  const auto roots = roots_of_coefficients({1.0, 2.0, 1.0});
  REQUIRE(roots.size() == 2);
  for (const Complex& r : roots) CHECK(std::abs(r + 1.0) < 1e-6);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(roots_of_coefficients({}), std::invalid_argument);
  CHECK_THROWS_AS(roots_of_coefficients({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(roots_of_coefficients({1.0}), std::invalid_argument);
}

TEST_CASE("re-expanded root product matches the input coefficients") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int deg = 1 + trial % 6;
    std::vector<Complex> coeffs(deg + 1);
    for (Complex& c : coeffs) c = Complex(uni(rng), uni(rng));
    if (std::abs(coeffs[deg]) < 0.2) coeffs[deg] += 1.0;
    const auto roots = roots_of_coefficients(coeffs);
    REQUIRE(static_cast<int>(roots.size()) == deg);
    // prod (z - r_i), expanded, against input normalized by the lead.
    std::vector<Complex> expanded{1.0};
    for (const Complex& r : roots) {
      std::vector<Complex> next(expanded.size() + 1, 0.0);
      for (std::size_t i = 0; i < expanded.size(); ++i) {
        next[i + 1] += expanded[i];
        next[i] -= r * expanded[i];
      }
      expanded = std::move(next);
    }
    double scale = 0.0;
    for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
    for (int i = 0; i <= deg; ++i) {
      const Complex want = coeffs[i] / coeffs[deg];
      CHECK(std::abs(expanded[i] - want) <= 1e-9 * std::max(1.0, scale / std::abs(coeffs[deg])));
    }
  }
}

TEST_CASE("zero roots are stripped exactly") {
  const auto roots = roots_of_coefficients({0.0, 0.0, -1.0, 1.0});  // z^2 (z - 1)
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0]) == 0.0);
  CHECK(std::abs(roots[1]) == 0.0);
  CHECK(std::abs(roots[2] - 1.0) < 1e-12);
}
