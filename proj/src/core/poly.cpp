#include "core/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace bbres {

bool GradedLexLess::operator()(const ExpVec& a, const ExpVec& b) const {
  // Parameter-minor ordering: chart monomials sort graded-lexicographically
  // and the parameter power acts as the outermost key, so prints read
  // "x - x*y + t" rather than leading with the parameter.
  if (a.back() != b.back()) return a.back() < b.back();
  const int da = std::accumulate(a.begin(), a.end() - 1, 0);
  const int db = std::accumulate(b.begin(), b.end() - 1, 0);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly::MultiPoly(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1) throw std::invalid_argument("MultiPoly: num_vars must be >= 1");
}

MultiPoly MultiPoly::constant(int num_vars, Complex value) {
  MultiPoly p(num_vars);
  p.add_term(ExpVec(num_vars + 1, 0), value);
  p.normalize();
  return p;
}

MultiPoly MultiPoly::variable(int num_vars, int slot) {
  if (slot < 0 || slot > num_vars)
    throw std::out_of_range("MultiPoly::variable: slot out of range");
  MultiPoly p(num_vars);
  ExpVec e(num_vars + 1, 0);
  e[slot] = 1;
  p.add_term(e, 1.0);
  return p;
}

bool MultiPoly::has_parameter() const {
  for (const auto& [e, c] : terms_)
    if (e[num_vars_] > 0) return true;
  return false;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end() - 1, 0));
  return d;
}

int MultiPoly::degree_full() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

void MultiPoly::add_term(const ExpVec& exponents, Complex coeff) {
  if (static_cast<int>(exponents.size()) != num_vars_ + 1)
    throw std::invalid_argument("MultiPoly::add_term: exponent list length mismatch");
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("MultiPoly::add_term: negative exponent");
  auto [it, inserted] = terms_.try_emplace(exponents, coeff);
  if (!inserted) it->second += coeff;
}

double MultiPoly::max_coeff_modulus() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::normalize() {
  const double cutoff = kZeroCoeffRelTol * max_coeff_modulus();
  for (auto it = terms_.begin(); it != terms_.end();) {
    const double mod = std::abs(it->second);
    if (mod == 0.0 || mod < cutoff)
      it = terms_.erase(it);
    else
      ++it;
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly operator+(const MultiPoly& p, const MultiPoly& q) {
  if (p.num_vars_ != q.num_vars_)
    throw std::invalid_argument("poly add: variable count mismatch");
  MultiPoly r(p);
  for (const auto& [e, c] : q.terms_) r.add_term(e, c);
  r.normalize();
  return r;
}

MultiPoly operator-(const MultiPoly& p, const MultiPoly& q) { return p + (-q); }

MultiPoly operator*(const MultiPoly& p, const MultiPoly& q) {
  if (p.num_vars_ != q.num_vars_)
    throw std::invalid_argument("poly mul: variable count mismatch");
  MultiPoly r(p.num_vars_);
  ExpVec e(p.num_vars_ + 1);
  for (const auto& [ea, ca] : p.terms_) {
    for (const auto& [eb, cb] : q.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  r.normalize();
  return r;
}

MultiPoly operator*(Complex a, const MultiPoly& p) {
  MultiPoly r(p);
  for (auto& [e, c] : r.terms_) c *= a;
  r.normalize();
  return r;
}

MultiPoly MultiPoly::differentiate(int var_index) const {
  if (var_index < 0 || var_index > num_vars_)
    throw std::out_of_range("poly diff: variable index out of range");
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    ExpVec d = e;
    d[var_index] -= 1;
    r.add_term(d, c * static_cast<double>(e[var_index]));
  }
  r.normalize();
  return r;
}

Complex MultiPoly::evaluate(std::span<const Complex> point, Complex t_value) const {
  if (static_cast<int>(point.size()) != num_vars_)
    throw std::invalid_argument("poly eval: point length mismatch");
  // Per-variable power tables keep the evaluation deterministic and cheap.
  std::vector<int> maxexp(num_vars_ + 1, 0);
  for (const auto& [e, c] : terms_)
    for (int i = 0; i <= num_vars_; ++i) maxexp[i] = std::max(maxexp[i], e[i]);
  std::vector<std::vector<Complex>> pow(num_vars_ + 1);
  for (int i = 0; i <= num_vars_; ++i) {
    pow[i].resize(maxexp[i] + 1);
    pow[i][0] = 1.0;
    const Complex base = (i == num_vars_) ? t_value : point[i];
    for (int k = 1; k <= maxexp[i]; ++k) pow[i][k] = pow[i][k - 1] * base;
  }
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex m = c;
    for (int i = 0; i <= num_vars_; ++i)
      if (e[i] > 0) m *= pow[i][e[i]];
    sum += m;
  }
  return sum;
}

MultiPoly MultiPoly::shifted(int slot, int power) const {
  if (slot < 0 || slot > num_vars_)
    throw std::out_of_range("poly shift: slot out of range");
  if (power == 0) return *this;
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    ExpVec d = e;
    d[slot] += power;
    if (d[slot] < 0) throw std::invalid_argument("poly shift: inexact division");
    r.add_term(d, c);
  }
  return r;
}

int MultiPoly::min_exponent(int slot, int fallback) const {
  if (terms_.empty()) return fallback;
  int m = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) m = std::min(m, e[slot]);
  return m;
}

PolySubstitution MultiPoly::substitute(int var_index, const MultiPoly& numerator,
                                       int denominator_var,
                                       int denominator_power) const {
  if (var_index < 0 || var_index > num_vars_)
    throw std::out_of_range("poly substitute: variable index out of range");
  if (denominator_var < 0 || denominator_var >= num_vars_)
    throw std::out_of_range("poly substitute: denominator variable out of range");
  if (denominator_power < 0)
    throw std::invalid_argument("poly substitute: negative denominator power");
  if (numerator.num_vars_ != num_vars_)
    throw std::invalid_argument("poly substitute: numerator variable count mismatch");

  int amax = 0;
  for (const auto& [e, c] : terms_) amax = std::max(amax, e[var_index]);
  const int common = denominator_power * amax;

  std::vector<MultiPoly> numpow(amax + 1, MultiPoly(num_vars_));
  numpow[0] = MultiPoly::constant(num_vars_, 1.0);
  for (int k = 1; k <= amax; ++k) numpow[k] = numpow[k - 1] * numerator;

  MultiPoly raw(num_vars_);
  for (const auto& [e, c] : terms_) {
    const int a = e[var_index];
    ExpVec rest = e;
    rest[var_index] = 0;
    rest[denominator_var] += common - denominator_power * a;
    MultiPoly piece(num_vars_);
    piece.add_term(rest, c);
    const MultiPoly expanded = piece * numpow[a];
    for (const auto& [en, cn] : expanded.terms()) raw.add_term(en, cn);
  }
  raw.normalize();

  const int val = raw.min_exponent(denominator_var, common);
  const int shift = std::min(val, common);
  return PolySubstitution{raw.shifted(denominator_var, -shift), common - shift};
}

bool MultiPoly::equals(const MultiPoly& other, double tol) const {
  if (num_vars_ != other.num_vars_) return false;
  auto within = [tol](Complex a, Complex b) { return std::abs(a - b) <= tol; };
  for (const auto& [e, c] : terms_) {
    auto it = other.terms_.find(e);
    if (it == other.terms_.end() ? !within(c, 0.0) : !within(c, it->second)) return false;
  }
  for (const auto& [e, c] : other.terms_)
    if (!terms_.contains(e) && !within(c, 0.0)) return false;
  return true;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

namespace {

// Formats one coefficient plus its monomial; `lead` suppresses the explicit
// '+' on the first printed term.
void print_term(std::string& out, bool lead, Complex c, const ExpVec& e,
                std::span<const std::string> names, std::string_view param) {
  std::string mono;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!mono.empty()) mono += "*";
    mono += (i + 1 == e.size()) ? std::string(param) : names[i];
    if (e[i] > 1) mono += "^" + std::to_string(e[i]);
  }

  std::string coeff;
  bool negative = false;
  if (c.imag() == 0.0) {
    negative = std::signbit(c.real());
    const double mag = std::abs(c.real());
    if (mag != 1.0 || mono.empty()) coeff = format_double(mag);
  } else if (c.real() == 0.0) {
    negative = std::signbit(c.imag());
    const double mag = std::abs(c.imag());
    coeff = (mag == 1.0) ? "i" : format_double(mag) + "*i";
  } else {
    coeff = "(" + format_double(c.real()) + (std::signbit(c.imag()) ? " - " : " + ") +
            format_double(std::abs(c.imag())) + "*i)";
  }

  if (lead)
    out += negative ? "-" : "";
  else
    out += negative ? " - " : " + ";
  if (!coeff.empty()) {
    out += coeff;
    if (!mono.empty()) out += "*";
  }
  out += mono;
}

}  // namespace

std::string MultiPoly::to_string(std::span<const std::string> variable_names,
                                 std::string_view parameter_name) const {
  if (static_cast<int>(variable_names.size()) != num_vars_)
    throw std::invalid_argument("poly print: variable name count mismatch");
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.begin(); it != terms_.end(); ++it)
    print_term(out, it == terms_.begin(), it->second, it->first, variable_names,
               parameter_name);
  return out;
}

}  // namespace bbres
