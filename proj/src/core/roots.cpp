#include "core/roots.hpp"

#include <algorithm>
#include <cmath>

namespace bbres {

namespace {

Complex eval_poly(std::span<const Complex> c, Complex z) {
  Complex v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

Complex eval_deriv(std::span<const Complex> c, Complex z) {
  Complex v = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) v = v * z + c[i] * static_cast<double>(i);
  return v;
}

}  // namespace

std::vector<Complex> roots_of_coefficients(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.size() < 2)
    throw std::invalid_argument("roots: polynomial must have degree >= 1");

  std::vector<Complex> roots;
  // Exact zero roots come off first; this also keeps the t = 0 limit cases
  // (e.g. lambda^3 - lambda^2) exact.
  std::size_t strip = 0;
  while (strip + 1 < coeffs.size() && std::abs(coeffs[strip]) == 0.0) ++strip;
  roots.assign(strip, Complex(0.0));
  if (strip > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + strip);

  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg == 0) return roots;

  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));

  // Initial guesses on a circle sized by the Cauchy bound, with an irrational
  // phase offset so no guess starts on a symmetry axis.
  double radius = 0.0;
  for (int i = 0; i < deg; ++i)
    radius = std::max(radius, std::pow(std::abs(coeffs[i] / coeffs[deg]), 1.0 / (deg - i)));
  radius = 2.0 * std::max(radius, 0.5);
  std::vector<Complex> z(deg);
  for (int i = 0; i < deg; ++i) {
    const double angle = 2.0 * M_PI * i / deg + 0.3964;
    z[i] = radius * Complex(std::cos(angle), std::sin(angle));
  }

  const int max_iters = 400;
  bool converged = false;
  for (int iter = 0; iter < max_iters && !converged; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < deg; ++i) {
      const Complex p = eval_poly(coeffs, z[i]);
      const Complex dp = eval_deriv(coeffs, z[i]);
      Complex ratio = (dp == Complex(0.0)) ? Complex(0.0) : p / dp;
      Complex rep = 0.0;
      for (int j = 0; j < deg; ++j)
        if (j != i) rep += 1.0 / (z[i] - z[j]);
      const Complex denom = 1.0 - ratio * rep;
      const Complex step = (std::abs(denom) == 0.0) ? ratio : ratio / denom;
      z[i] -= step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
    }
    converged = worst < 1e-14;
  }

  // Newton polish; multiple roots converge slowly under Aberth, the extra
  // sweeps push the residual to the 1e-12 * scale target.
  for (int i = 0; i < deg; ++i) {
    for (int k = 0; k < 60; ++k) {
      const Complex p = eval_poly(coeffs, z[i]);
      const double bound =
          std::max(1.0, std::pow(std::abs(z[i]), static_cast<double>(deg)));
      if (std::abs(p) < 1e-13 * scale * bound) break;
      const Complex dp = eval_deriv(coeffs, z[i]);
      if (std::abs(dp) == 0.0) break;
      z[i] -= p / dp;
    }
  }

  for (int i = 0; i < deg; ++i) {
    const double bound = std::max(1.0, std::pow(std::abs(z[i]), static_cast<double>(deg)));
    if (!(std::abs(eval_poly(coeffs, z[i])) < 1e-9 * scale * bound))
      throw std::runtime_error("roots: iteration failed to converge");
  }

  roots.insert(roots.end(), z.begin(), z.end());
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<Complex> roots_univariate(const MultiPoly& p, Complex t_value) {
  if (p.num_vars() != 1)
    throw std::invalid_argument("roots_univariate: polynomial is not univariate");
  const int deg = p.degree();
  if (deg < 1) throw std::invalid_argument("roots_univariate: degree must be >= 1");
  std::vector<Complex> coeffs(deg + 1, Complex(0.0));
  std::vector<Complex> tpow{1.0};
  for (const auto& [e, c] : p.terms()) {
    while (static_cast<int>(tpow.size()) <= e[1]) tpow.push_back(tpow.back() * t_value);
    coeffs[e[0]] += c * tpow[e[1]];
  }
  return roots_of_coefficients(std::move(coeffs));
}

}  // namespace bbres
