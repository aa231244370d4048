#pragma once

#include <string>
#include <vector>

#include "core/solver.hpp"

namespace bbres {

/// Monomial phi = prod c_i^{a_i} in the elementary-symmetric invariants, with
/// weighted degree sum(i * a_i). Point residues of a rank-1 foliation need
/// weighted degree equal to the ambient dimension.
struct ChernMonomial {
  std::vector<int> exponents;  // a_1 .. a_n

  int weighted_degree() const;
  std::string label() const;  // "c1^3", "c1*c2", "c3", ...

  static ChernMonomial from_label(const std::string& label, int n);
  // All top-degree monomials of P^n, one per partition of n, smallest parts
  // first ("c1^3", "c1*c2", "c3" for n = 3).
  static std::vector<ChernMonomial> all_top_degree(int n);
};

// Elementary symmetric functions (c_1, ..., c_n) of the eigenvalues, i.e. the
// characteristic polynomial coefficients det(lI - J) = l^n - c_1 l^(n-1) +
// c_2 l^(n-2) - ..., via the Faddeev-LeVerrier recursion. No eigensolver is
// involved, so defective spectra are handled exactly up to rounding.
std::vector<Complex> matrix_invariants(const MatrixXc& jac);

// prod c_i^{a_i}; requires weighted degree == number of invariants.
Complex phi_value(const ChernMonomial& monomial, std::span<const Complex> invariants);

struct ResidueRecord {
  std::string label;       // singularity key or component label
  std::string monomial;    // label of phi
  Complex value = 0.0;
  int singularity_index = -1;  // -1 for residual attributions
};

// Grothendieck residue phi(J)/det(J) at a non-degenerate singularity. The
// determinant is the c_n invariant, so the c_n residue is exactly 1 by
// construction. Throws std::domain_error on a degenerate Jacobian.
Complex bb_residue_value(const MatrixXc& jacobian, const ChernMonomial& monomial,
                         double tol_degenerate = 1e-10);
ResidueRecord bb_residue(const Singularity& s, const ChernMonomial& monomial, int index,
                         double tol_degenerate = 1e-10);

// Integral of phi(TP^n) over P^n: prod binomial(n+1, i)^{a_i}, from the total
// Chern class (1 + xi)^(n+1) of projective space. Valid as the residue target
// when the foliation tangent sheaf is trivial.
long long chern_number_projective(int n, const ChernMonomial& monomial);

struct SumCheck {
  Complex sum = 0.0;
  long long target = 0;
  double residual = 0.0;
};

// Sum of point residues against the global Chern number. All singularities
// must be nondegenerate.
SumCheck verify_sum_theorem(std::span<const Singularity> singularities,
                            const ChernMonomial& monomial, int n,
                            double tol_degenerate = 1e-10);

// Chern number minus the known isolated residues: the residue attributed to
// the remaining (non-isolated) component of the singular set.
ResidueRecord residual_attribution(std::span<const ResidueRecord> known,
                                   const ChernMonomial& monomial, int n,
                                   const std::string& label);

}  // namespace bbres
