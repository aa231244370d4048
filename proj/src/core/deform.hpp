#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/residue.hpp"

namespace bbres {

/// One-parameter family X_t swept toward t0 on a geometric grid
/// t_k = t_start * ratio^k, k = 0 .. count-1.
struct DeformationFamily {
  AffineVectorField field;  // parameter slot holds t
  double t_start = 0.5;
  double ratio = 0.5;
  int count = 12;
  double t_target = 0.0;

  std::vector<double> grid() const;
  void validate() const;
};

/// A singularity tracked across the grid. `samples[k]` is empty where the
/// path had no match at grid point k.
struct SingularityPath {
  std::vector<std::optional<Singularity>> samples;
  ProjectivePoint limit;  // extrapolated from the last three samples
  enum class Status { kConverged, kMerged, kEscaped } status = Status::kConverged;
  int first_grid_index = 0;
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<SingularityPath> paths;
  std::vector<std::string> warnings;
  std::vector<SingularSet::ChartStats> chart_stats;  // accumulated over the grid
  int degenerate_hits = 0;  // grid points where degenerate candidates appeared
};

// Solves the singular set at every grid point and matches points to paths by
// nearest projective distance; the acceptance threshold adapts to ten times
// the largest single-step motion seen so far. Unmatched new points open new
// paths; two paths claiming one point are both marked merged.
SweepResult sweep(const DeformationFamily& family, const SolverOptions& opts = {});

struct Witness {
  std::string name;
  // Homogeneous polynomials in the n+1 coordinates (num_vars = n+1, no
  // parameter use).
  std::vector<MultiPoly> equations;
};

struct ComponentGroup {
  std::string label;
  std::vector<int> path_ids;
  std::optional<std::string> witness;  // satisfied witness, if any
  ProjectivePoint representative_limit;
};

struct GroupingResult {
  std::vector<ComponentGroup> groups;
  // Paths whose limit satisfied more than one witness; reported, not assigned.
  std::vector<std::pair<int, std::string>> ambiguous;
};

// Assigns each path to the witness its limit satisfies (residual < 1e-6 on
// unit-norm coordinates); the rest are clustered by limit point at the same
// tolerance (union-find) into labeled components.
GroupingResult group_paths(const std::vector<SingularityPath>& paths,
                           const std::vector<Witness>& witnesses,
                           double match_tol = 1e-6);

struct GroupSeries {
  std::string group;
  std::string monomial;
  // One entry per grid point; excluded points carry no value.
  std::vector<std::optional<Complex>> values;
  std::vector<int> excluded_grid_points;  // degenerate or missing member
};

// Per grid point, per group: the sum of the members' point residues. Grid
// points where a member is degenerate or absent are excluded, never
// interpolated.
std::vector<GroupSeries> grouped_residues(const GroupingResult& grouping,
                                          const std::vector<SingularityPath>& paths,
                                          const ChernMonomial& monomial,
                                          double tol_degenerate = 1e-10);

struct LimitEstimate {
  Complex limit = 0.0;
  double error_estimate = 0.0;
};

// Richardson extrapolation on the last three values of a geometric-grid
// series, assuming a leading error proportional to t^alpha with alpha fitted
// from successive differences. Differences at the noise floor (or a
// non-contracting ratio) fall back to the last value with the last difference
// as the error bar.
LimitEstimate limit_estimate(std::span<const Complex> series);

}  // namespace bbres
