#pragma once

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bbres {

using Complex = std::complex<double>;

// Exponent list over the chart variables plus one trailing slot for the
// deformation parameter. Length is always num_vars + 1.
using ExpVec = std::vector<int>;

// Graded lexicographic order: total degree first, then lexicographic on the
// exponent list. Used for the canonical term order.
struct GradedLexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const;
};

// Relative modulus below which a coefficient is treated as a cancellation
// artifact and dropped from the canonical form.
inline constexpr double kZeroCoeffRelTol = 1e-14;

struct PolySubstitution;

/// Sparse multivariate polynomial over complex double coefficients, in
/// num_vars chart variables plus one distinguished deformation parameter
/// occupying the last exponent slot. Values are immutable once built by the
/// arithmetic operations; the canonical form merges equal monomials, orders
/// terms graded-lexicographically and holds no negligible coefficients.
class MultiPoly {
 public:
  using TermMap = std::map<ExpVec, Complex, GradedLexLess>;

  MultiPoly() = default;
  explicit MultiPoly(int num_vars);

  static MultiPoly constant(int num_vars, Complex value);
  // slot in [0, num_vars]; slot == num_vars designates the parameter.
  static MultiPoly variable(int num_vars, int slot);
  static MultiPoly parameter(int num_vars) { return variable(num_vars, num_vars); }

  int num_vars() const { return num_vars_; }
  bool is_zero() const { return terms_.empty(); }
  // Whether the distinguished parameter actually participates.
  bool has_parameter() const;
  // Max total degree in the chart variables only (parameter exponent
  // excluded). Returns -1 for the zero polynomial.
  int degree() const;
  // Max total degree counting the parameter slot as well.
  int degree_full() const;
  const TermMap& terms() const { return terms_; }

  // Accumulates coeff on the monomial; callers must normalize() when done.
  void add_term(const ExpVec& exponents, Complex coeff);
  void normalize();

  MultiPoly operator-() const;
  friend MultiPoly operator+(const MultiPoly& p, const MultiPoly& q);
  friend MultiPoly operator-(const MultiPoly& p, const MultiPoly& q);
  friend MultiPoly operator*(const MultiPoly& p, const MultiPoly& q);
  friend MultiPoly operator*(Complex a, const MultiPoly& p);

  // Formal partial derivative; var_index in [0, num_vars], the last index
  // being the parameter.
  MultiPoly differentiate(int var_index) const;

  // point.size() must equal num_vars; the parameter slot takes t_value.
  Complex evaluate(std::span<const Complex> point, Complex t_value = 0.0) const;

  // Multiply the whole polynomial by the monomial slot^power (power may be
  // negative when every term allows the exact division).
  MultiPoly shifted(int slot, int power) const;
  // Smallest exponent of `slot` over all terms; returns fallback when zero.
  int min_exponent(int slot, int fallback) const;

  // Substitutes var_index -> numerator / denominator_var^denominator_power
  // and returns q with the minimal e >= 0 such that
  // denominator_var^e * p(substituted) == q exactly.
  PolySubstitution substitute(int var_index, const MultiPoly& numerator,
                              int denominator_var, int denominator_power) const;

  bool equals(const MultiPoly& other, double tol = 0.0) const;
  double max_coeff_modulus() const;

  // Canonical text form, parseable back by parse_poly.
  std::string to_string(std::span<const std::string> variable_names,
                        std::string_view parameter_name) const;

 private:
  int num_vars_ = 0;
  TermMap terms_;
};

struct PolySubstitution {
  MultiPoly result;
  int clearing_exponent = 0;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position(position) {}
  std::size_t position;
};

// Parses the ASCII polynomial grammar:
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nonneg_int)?
//   base   := identifier | number | '(' expr ')'
//   number := integer | integer '/' positive_integer | decimal
// Decimals may carry an exponent part (1e-14). The identifier `i` denotes the
// imaginary unit unless shadowed by a declared variable. Implicit
// multiplication is rejected. Unknown identifiers raise ParseError with the
// offending position.
MultiPoly parse_poly(std::string_view text,
                     std::span<const std::string> variable_names,
                     std::string_view parameter_name);

// Shortest round-trip decimal form of a double (to_chars based).
std::string format_double(double value);

}  // namespace bbres
