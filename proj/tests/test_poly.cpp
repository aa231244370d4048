#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/poly.hpp"

using namespace bbres;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

MultiPoly P(const std::string& text) { return parse_poly(text, kXYZ, "t"); }

MultiPoly random_poly(std::mt19937_64& rng, int num_vars, int max_deg, int nterms) {
  std::uniform_int_distribution<int> exp(0, max_deg);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  MultiPoly p(num_vars);
  for (int k = 0; k < nterms; ++k) {
    ExpVec e(num_vars + 1, 0);
    for (int i = 0; i <= num_vars; ++i) e[i] = exp(rng) % 3;
    p.add_term(e, Complex(coeff(rng), coeff(rng)));
  }
  p.normalize();
  return p;
}

}  // namespace

TEST_CASE("addition merges and cancels") {
  CHECK((P("x") + P("-x")).is_zero());
  CHECK((P("x + t*z") + P("x")).equals(P("2*x + t*z")));
  CHECK((P("x - x*y") + P("x*y")).equals(P("x")));
  CHECK_THROWS_AS(P("x") + MultiPoly::variable(2, 0), std::invalid_argument);
}

TEST_CASE("multiplication") {
  CHECK((P("1 + x") * P("1 - x")).equals(P("1 - x^2")));
  CHECK((P("x") * P("y")).equals(P("x*y")));
}

TEST_CASE("product of root factors reproduces the cubic with e1=1, e2=0, e3=t") {
  // (l - u1)(l - u2)(l - u3) with the roots' elementary symmetric functions
  // pinned to (1, 0, t) expands to l^3 - l^2 - t.
  const std::vector<std::string> lambda{"l"};
  auto L = MultiPoly::variable(1, 0);
  auto T = MultiPoly::parameter(1);
  // Expand symbolically via the symmetric-function expansion:
  // l^3 - e1 l^2 + e2 l - e3 with e1 = 1, e2 = 0, e3 = t.
  auto expected = parse_poly("l^3 - l^2 - t", lambda, "t");
  auto built = L * L * L - L * L - T;
  CHECK(built.equals(expected));
}

TEST_CASE("differentiation") {
  CHECK(P("x - x*y").differentiate(0).equals(P("1 - y")));
  CHECK(P("x - y^2").differentiate(1).equals(P("-2*y")));
  CHECK(P("x + t*z").differentiate(3).equals(P("z")));
  CHECK_THROWS_AS(P("x").differentiate(4), std::out_of_range);
}

TEST_CASE("evaluation") {
  const std::vector<Complex> origin{0.0, 0.0, 0.0};
  CHECK(P("x + t*z").evaluate(origin, 0.5) == Complex(0.0));
  const std::vector<Complex> q{1.0, 1.0, 1.0};
  CHECK(P("x - y^2").evaluate(q, 0.0) == Complex(0.0));
  CHECK(P("x - x*y + t").evaluate(q, 0.0) == Complex(0.0));
  CHECK_THROWS_AS(P("x").evaluate(std::vector<Complex>{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("substitution clears minimal denominator powers") {
  // x -> x/z
  auto sub1 = P("x").substitute(0, P("x"), 2, 1);
  CHECK(sub1.clearing_exponent == 1);
  CHECK(sub1.result.equals(P("x")));

  // x*y under x -> x/z then y -> y/z
  auto step1 = P("x*y").substitute(0, P("x"), 2, 1);
  auto step2 = step1.result.substitute(1, P("y"), 2, 1);
  CHECK(step1.clearing_exponent + step2.clearing_exponent == 2);
  CHECK(step2.result.equals(P("x*y")));

  // A polynomial already divisible by the denominator needs no clearing.
  auto sub3 = P("x*z^2").substitute(0, P("x"), 2, 1);
  CHECK(sub3.clearing_exponent == 0);
  CHECK(sub3.result.equals(P("x*z")));
}

TEST_CASE("parser handles grammar forms") {
  CHECK(P("x + t*z").equals(MultiPoly::variable(3, 0) +
                            MultiPoly::parameter(3) * MultiPoly::variable(3, 2)));
  CHECK(P("3/2*x*y").equals(Complex(1.5) * P("x*y")));
  CHECK(P("(x + y)^2").equals(P("x^2 + 2*x*y + y^2")));
  CHECK(P("-y*z").equals(-P("y*z")));
  CHECK(P("2.5e-1*x").equals(Complex(0.25) * P("x")));
  CHECK(P("i*x").equals(Complex(0, 1) * P("x")));
}

TEST_CASE("parser rejects malformed input with a position") {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      P(text);
    } catch (const ParseError& e) {
      return e.position;
    }
    return static_cast<std::size_t>(-1);
  };
  CHECK(position_of("x + w") == 4);       // unknown identifier
  CHECK(position_of("x + ") == 4);        // dangling operator
  CHECK(position_of("x y") == 2);         // implicit multiplication
  CHECK(position_of("x ^ y") == 4);       // non-integer exponent
  CHECK(position_of("(x + y") == 6);      // unbalanced paren
  CHECK_THROWS_AS(P("x + $"), ParseError);
}

TEST_CASE("print/parse round-trip is exact") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const MultiPoly p = random_poly(rng, 3, 2, 6);
    const std::string text = p.to_string(kXYZ, "t");
    CAPTURE(text);
    CHECK(parse_poly(text, kXYZ, "t").equals(p));
  }
  CHECK(parse_poly(MultiPoly(3).to_string(kXYZ, "t"), kXYZ, "t").is_zero());
}

TEST_CASE("ring distributivity at floating tolerance") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const MultiPoly p = random_poly(rng, 2, 2, 5);
    const MultiPoly q = random_poly(rng, 2, 2, 5);
    const MultiPoly r = random_poly(rng, 2, 2, 5);
    const MultiPoly lhs = (p + q) * r;
    const MultiPoly rhs = p * r + q * r;
    const double scale = std::max(lhs.max_coeff_modulus(), rhs.max_coeff_modulus());
    CHECK(lhs.equals(rhs, 1e-12 * std::max(1.0, scale)));
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const MultiPoly p = random_poly(rng, 3, 2, 5);
    const MultiPoly q = random_poly(rng, 3, 2, 5);
    const std::vector<Complex> z{{uni(rng), uni(rng)}, {uni(rng), uni(rng)}, {uni(rng), uni(rng)}};
    const Complex t(uni(rng), uni(rng));
    const Complex lhs = (p * q).evaluate(z, t);
    const Complex rhs = p.evaluate(z, t) * q.evaluate(z, t);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("Leibniz rule is exact for integer coefficients") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coeff(-3, 3);
  auto random_int_poly = [&]() {
    MultiPoly p(2);
    for (int k = 0; k < 5; ++k) {
      ExpVec e{coeff(rng) & 1, coeff(rng) & 1, (coeff(rng) & 3) == 0 ? 1 : 0};
      p.add_term(e, static_cast<double>(coeff(rng)));
    }
    p.normalize();
    return p;
  };
  for (int trial = 0; trial < 40; ++trial) {
    const MultiPoly p = random_int_poly();
    const MultiPoly q = random_int_poly();
    for (int var = 0; var <= 2; ++var) {
      const MultiPoly lhs = (p * q).differentiate(var);
      const MultiPoly rhs = p.differentiate(var) * q + p * q.differentiate(var);
      CHECK(lhs.equals(rhs));
    }
  }
}
