#include "core/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bbres {

ProjectivePoint ProjectivePoint::from_homogeneous(std::vector<Complex> coords) {
  if (coords.size() < 2)
    throw std::invalid_argument("ProjectivePoint: need at least 2 coordinates");
  double norm2 = 0.0;
  for (const Complex& c : coords) norm2 += std::norm(c);
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0))
    throw std::invalid_argument("ProjectivePoint: zero coordinate vector");
  for (Complex& c : coords) c /= norm;
  for (const Complex& c : coords) {
    if (std::abs(c) > kChartVisibilityTol) {
      const Complex phase = c / std::abs(c);
      for (Complex& x : coords) x /= phase;
      break;
    }
  }
  ProjectivePoint p;
  p.h_ = std::move(coords);
  return p;
}

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw std::invalid_argument("projective_distance: dimension mismatch");
  Complex inner = 0.0;
  for (std::size_t i = 0; i < p.coords().size(); ++i)
    inner += std::conj(p.coords()[i]) * q.coords()[i];
  const double s = std::max(0.0, 1.0 - std::norm(inner));
  return std::sqrt(s);
}

std::vector<Complex> point_to_chart(const ProjectivePoint& p, int chart) {
  const int n = p.ambient_dim();
  if (chart < 0 || chart > n) throw std::out_of_range("point_to_chart: chart out of range");
  const Complex pivot = p.coords()[chart];
  if (std::abs(pivot) <= kChartVisibilityTol)
    throw std::domain_error("point_to_chart: point not visible in chart");
  std::vector<Complex> out;
  out.reserve(n);
  for (int j = 0; j <= n; ++j)
    if (j != chart) out.push_back(p.coords()[j] / pivot);
  return out;
}

ProjectivePoint chart_point_to_projective(std::span<const Complex> coords, int chart) {
  const int n = static_cast<int>(coords.size());
  if (chart < 0 || chart > n)
    throw std::out_of_range("chart_point_to_projective: chart out of range");
  std::vector<Complex> h;
  h.reserve(n + 1);
  for (int j = 0, s = 0; j <= n; ++j)
    h.push_back(j == chart ? Complex(1.0) : coords[s++]);
  return ProjectivePoint::from_homogeneous(std::move(h));
}

int chart_slot_of(int homog_index, int chart) {
  if (homog_index == chart)
    throw std::invalid_argument("chart_slot_of: pivot coordinate has no slot");
  return homog_index < chart ? homog_index : homog_index - 1;
}

int homog_index_of(int slot, int chart) { return slot < chart ? slot : slot + 1; }

int AffineVectorField::degree() const {
  int d = 0;
  for (const MultiPoly& c : components) d = std::max(d, c.degree());
  return d;
}

void AffineVectorField::validate() const {
  if (ambient_dim < 1) throw std::invalid_argument("field: ambient dimension must be >= 1");
  if (chart < 0 || chart > ambient_dim)
    throw std::invalid_argument("field: chart index out of range");
  if (static_cast<int>(components.size()) != ambient_dim)
    throw std::invalid_argument("field: expected one component per chart variable");
  for (const MultiPoly& c : components)
    if (c.num_vars() != ambient_dim)
      throw std::invalid_argument("field: component variable count mismatch");
}

namespace {

// Rewrites a source-chart polynomial in target-chart variables and clears
// denominators with the target coordinate v_k = x_k/x_l (k = source chart,
// l = target chart): returns phi with source_poly(w(v)) = phi(v) / v_k^e and
// e = chart degree of the polynomial.
MultiPoly remap_to_chart(const MultiPoly& p, int n, int source, int target, int e) {
  MultiPoly out(n);
  const int kslot = chart_slot_of(source, target);
  for (const auto& [exps, coeff] : p.terms()) {
    ExpVec d(n + 1, 0);
    int total = 0;
    for (int s = 0; s < n; ++s) {
      total += exps[s];
      const int m = homog_index_of(s, source);
      if (m != target && exps[s] > 0) d[chart_slot_of(m, target)] += exps[s];
    }
    d[kslot] += e - total;
    d[n] = exps[n];
    out.add_term(d, coeff);
  }
  out.normalize();
  return out;
}

}  // namespace

ChartChange pushforward_chart(const AffineVectorField& field, int target_chart) {
  field.validate();
  const int n = field.ambient_dim;
  const int k = field.chart;
  const int l = target_chart;
  if (l < 0 || l > n) throw std::out_of_range("pushforward: target chart out of range");
  if (l == k) throw std::invalid_argument("pushforward: target chart equals source");

  // Component polynomials keyed by homogeneous index, and their cleared
  // rewrites in target variables.
  std::vector<int> deg(n + 1, 0);
  std::vector<MultiPoly> phi(n + 1, MultiPoly(n));
  int common_deg = 0;
  bool any_nonzero = false;
  for (int s = 0; s < n; ++s) {
    const int j = homog_index_of(s, k);
    deg[j] = std::max(field.components[s].degree(), 0);
    phi[j] = remap_to_chart(field.components[s], n, k, l, deg[j]);
    common_deg = std::max(common_deg, deg[j]);
    any_nonzero = any_nonzero || !field.components[s].is_zero();
  }
  if (!any_nonzero) throw std::invalid_argument("pushforward: zero vector field");

  const int kslot = chart_slot_of(k, l);
  const MultiPoly& phi_l = phi[l];
  const int lift_l = common_deg - deg[l];

  // The transformed components carry the common prefactor v_k^(1-common_deg):
  //   i != k, l : v_k * (F_i - v_i F_l)   ->  G_i = phi_i v^(M-e_i) - v_i phi_l v^(M-e_l)
  //   i == k    : -v_k^2 * F_l            ->  G_k = -phi_l v^(M-e_l+1)
  std::vector<MultiPoly> g(n, MultiPoly(n));
  for (int s = 0; s < n; ++s) {
    const int i = homog_index_of(s, l);
    if (i == k) {
      g[s] = -phi_l.shifted(kslot, lift_l + 1);
    } else {
      g[s] = phi[i].shifted(kslot, common_deg - deg[i]) -
             MultiPoly::variable(n, s) * phi_l.shifted(kslot, lift_l);
    }
  }

  int valuation = std::numeric_limits<int>::max();
  for (const MultiPoly& c : g)
    if (!c.is_zero()) valuation = std::min(valuation, c.min_exponent(kslot, 0));
  if (valuation == std::numeric_limits<int>::max())
    throw std::invalid_argument("pushforward: field vanishes identically in target chart");

  const int clearing = std::max(0, (common_deg - 1) - valuation);
  const int shift = clearing - (common_deg - 1);  // == -min(common_deg-1, valuation)
  AffineVectorField out;
  out.ambient_dim = n;
  out.chart = l;
  out.components.reserve(n);
  for (MultiPoly& c : g) out.components.push_back(c.shifted(kslot, shift));
  out.validate();
  return ChartChange{std::move(out), clearing};
}

}  // namespace bbres
