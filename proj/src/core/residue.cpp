#include "core/residue.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace bbres {

int ChernMonomial::weighted_degree() const {
  int d = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    d += static_cast<int>(i + 1) * exponents[i];
  return d;
}

std::string ChernMonomial::label() const {
  std::string out;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "c" + std::to_string(i + 1);
    if (exponents[i] > 1) out += "^" + std::to_string(exponents[i]);
  }
  return out.empty() ? "1" : out;
}

ChernMonomial ChernMonomial::from_label(const std::string& label, int n) {
  ChernMonomial m;
  m.exponents.assign(n, 0);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("chern monomial '" + label + "': " + why);
  };
  while (pos < label.size()) {
    if (label[pos] != 'c') fail("expected 'c'");
    ++pos;
    std::size_t start = pos;
    while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
    if (start == pos) fail("expected class index");
    const int idx = std::stoi(label.substr(start, pos - start));
    if (idx < 1 || idx > n) fail("class index out of range for dimension " + std::to_string(n));
    int power = 1;
    if (pos < label.size() && label[pos] == '^') {
      ++pos;
      start = pos;
      while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
      if (start == pos) fail("expected exponent");
      power = std::stoi(label.substr(start, pos - start));
    }
    m.exponents[idx - 1] += power;
    if (pos < label.size()) {
      if (label[pos] != '*') fail("expected '*'");
      ++pos;
    }
  }
  return m;
}

std::vector<ChernMonomial> ChernMonomial::all_top_degree(int n) {
  // One monomial per partition of n; parts enumerated smallest-first so the
  // n = 3 list reads c1^3, c1*c2, c3.
  std::vector<ChernMonomial> out;
  std::vector<int> counts(n, 0);
  auto rec = [&](auto&& self, int remaining, int min_part) -> void {
    if (remaining == 0) {
      ChernMonomial m;
      m.exponents = counts;
      out.push_back(std::move(m));
      return;
    }
    for (int part = min_part; part <= remaining; ++part) {
      ++counts[part - 1];
      self(self, remaining - part, part);
      --counts[part - 1];
    }
  };
  rec(rec, n, 1);
  std::sort(out.begin(), out.end(), [](const ChernMonomial& a, const ChernMonomial& b) {
    return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                        a.exponents.begin(), a.exponents.end());
  });
  return out;
}

std::vector<Complex> matrix_invariants(const MatrixXc& jac) {
  const int n = static_cast<int>(jac.rows());
  if (jac.cols() != n) throw std::invalid_argument("matrix_invariants: matrix not square");
  // Faddeev-LeVerrier: M_k = J M_{k-1} + a_{k-1} I, a_k = -tr(J M_k)/k, with
  // char poly l^n + a_1 l^(n-1) + ... ; then c_k = (-1)^k a_k.
  std::vector<Complex> invs(n);
  MatrixXc m = MatrixXc::Zero(n, n);
  Complex a_prev = 1.0;  // coefficient accompanying the identity shift
  for (int k = 1; k <= n; ++k) {
    m = jac * m + a_prev * MatrixXc::Identity(n, n);
    const Complex a_k = -(jac * m).trace() / static_cast<double>(k);
    invs[k - 1] = (k % 2 == 0) ? a_k : -a_k;
    a_prev = a_k;
  }
  return invs;
}

Complex phi_value(const ChernMonomial& monomial, std::span<const Complex> invariants) {
  if (monomial.weighted_degree() != static_cast<int>(invariants.size()))
    throw std::invalid_argument("phi_value: monomial degree does not match dimension");
  Complex out = 1.0;
  for (std::size_t i = 0; i < monomial.exponents.size(); ++i)
    for (int k = 0; k < monomial.exponents[i]; ++k) out *= invariants[i];
  return out;
}

Complex bb_residue_value(const MatrixXc& jacobian, const ChernMonomial& monomial,
                         double tol_degenerate) {
  if (!jacobian_nondegenerate(jacobian, tol_degenerate, nullptr))
    throw std::domain_error(
        "bb_residue: degenerate Jacobian, point residue undefined (use residual "
        "attribution)");
  const std::vector<Complex> invs = matrix_invariants(jacobian);
  return phi_value(monomial, invs) / invs.back();
}

ResidueRecord bb_residue(const Singularity& s, const ChernMonomial& monomial, int index,
                         double tol_degenerate) {
  ResidueRecord rec;
  rec.label = "singularity " + std::to_string(index);
  rec.monomial = monomial.label();
  rec.singularity_index = index;
  rec.value = bb_residue_value(s.jacobian, monomial, tol_degenerate);
  return rec;
}

long long chern_number_projective(int n, const ChernMonomial& monomial) {
  if (monomial.weighted_degree() != n)
    throw std::invalid_argument("chern_number_projective: monomial degree must equal n");
  auto binomial = [](int top, int k) {
    long long b = 1;
    for (int j = 1; j <= k; ++j) b = b * (top - k + j) / j;
    return b;
  };
  long long out = 1;
  for (std::size_t i = 0; i < monomial.exponents.size(); ++i)
    for (int k = 0; k < monomial.exponents[i]; ++k)
      out *= binomial(n + 1, static_cast<int>(i + 1));
  return out;
}

SumCheck verify_sum_theorem(std::span<const Singularity> singularities,
                            const ChernMonomial& monomial, int n, double tol_degenerate) {
  SumCheck check;
  check.target = chern_number_projective(n, monomial);
  for (const Singularity& s : singularities) {
    if (!s.nondegenerate)
      throw std::domain_error("verify_sum_theorem: degenerate singularity in input");
    check.sum += bb_residue_value(s.jacobian, monomial, tol_degenerate);
  }
  check.residual = std::abs(check.sum - static_cast<double>(check.target));
  return check;
}

ResidueRecord residual_attribution(std::span<const ResidueRecord> known,
                                   const ChernMonomial& monomial, int n,
                                   const std::string& label) {
  const std::string want = monomial.label();
  Complex covered = 0.0;
  for (const ResidueRecord& r : known) {
    if (r.monomial != want)
      throw std::invalid_argument("residual_attribution: mixed monomials in input");
    covered += r.value;
  }
  ResidueRecord rec;
  rec.label = label;
  rec.monomial = want;
  rec.value = static_cast<double>(chern_number_projective(n, monomial)) - covered;
  return rec;
}

}  // namespace bbres
