#pragma once

#include <span>
#include <vector>

#include "core/poly.hpp"

namespace bbres {

// Modulus below which a homogeneous coordinate is considered invisible in a
// chart (both for phase normalization and for point_to_chart).
inline constexpr double kChartVisibilityTol = 1e-9;

/// Point of P^n held as n+1 homogeneous coordinates in canonical form:
/// unit Euclidean norm, with the first coordinate of modulus above
/// kChartVisibilityTol rotated to be positive real.
class ProjectivePoint {
 public:
  static ProjectivePoint from_homogeneous(std::vector<Complex> coords);

  const std::vector<Complex>& coords() const { return h_; }
  int ambient_dim() const { return static_cast<int>(h_.size()) - 1; }

 private:
  std::vector<Complex> h_;
};

// Chordal Fubini-Study distance sqrt(1 - |<p,q>|^2), in [0, 1].
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);

// Affine coordinates x_j / x_chart, j != chart, increasing j. Throws
// std::domain_error when the point is not visible in the chart.
std::vector<Complex> point_to_chart(const ProjectivePoint& p, int chart);

// Inserts 1 at the chart slot and normalizes.
ProjectivePoint chart_point_to_projective(std::span<const Complex> coords, int chart);

// Slot <-> homogeneous index maps for the affine chart {x_chart != 0} of P^n:
// the chart's variables are x_j / x_chart for j != chart in increasing j.
int chart_slot_of(int homog_index, int chart);
int homog_index_of(int slot, int chart);

/// Polynomial vector field on an affine chart of P^n. Component slot s holds
/// the coefficient of d/dw_s where w_s = x_{homog_index_of(s, chart)}/x_chart.
struct AffineVectorField {
  int ambient_dim = 0;  // n
  int chart = 0;        // 0-based over homogeneous coordinates x_0..x_n
  std::vector<MultiPoly> components;  // n polynomials with num_vars == n

  // Max chart-variable total degree across components (>= 0 for a field with
  // at least one nonzero component).
  int degree() const;
  void validate() const;
};

struct ChartChange {
  AffineVectorField field;
  // Minimal power e >= 0 of the target chart's coordinate x_source/x_target
  // by which the pushforward was multiplied to clear all denominators.
  int clearing_exponent = 0;
};

// Expresses the field in the target chart via the Jacobian of the rational
// coordinate change, multiplied through by the single minimal clearing power.
// Rescaling a generator by a chart unit does not change the foliation, so all
// degree-n residues are preserved.
ChartChange pushforward_chart(const AffineVectorField& field, int target_chart);

}  // namespace bbres
