#pragma once

#include <vector>

#include "core/poly.hpp"

namespace bbres {

// All complex roots (with multiplicity) of the polynomial with the given
// coefficients, ascending powers: c[0] + c[1] z + ... + c[d] z^d. Implemented
// by Aberth-Ehrlich simultaneous iteration with a final Newton polish; exact
// zero roots are factored out first. Throws std::invalid_argument for the
// zero polynomial or degree < 1, std::runtime_error on non-convergence.
std::vector<Complex> roots_of_coefficients(std::vector<Complex> coeffs);

// Same for a univariate MultiPoly (num_vars == 1); the parameter slot takes
// t_value before rooting.
std::vector<Complex> roots_univariate(const MultiPoly& p, Complex t_value = 0.0);

}  // namespace bbres
