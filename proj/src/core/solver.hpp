#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core/projective.hpp"

namespace bbres {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// A located zero of a field with its first jet.
struct Singularity {
  ProjectivePoint point;             // canonical homogeneous representative
  int chart = 0;                     // chart in which it was computed and refined
  std::vector<Complex> affine;       // coordinates in that chart
  MatrixXc jacobian;                 // dX_i/dw_j at the point
  double residual_norm = 0.0;        // ||X(point)||
  bool nondegenerate = false;        // |det J| above the scale-aware threshold
  Complex det_jacobian = 0.0;
};

struct TrackerSettings {
  double initial_step = 0.05;
  double min_step = 1e-10;
  double max_step = 0.1;
  double corrector_tol = 1e-12;
  int max_corrector_iters = 10;
  double divergence_radius = 1e8;
  std::uint64_t seed = 20240917;

  // Unit-modulus start-system rotation drawn from the seeded generator.
  Complex gamma() const;
};

struct SolverOptions {
  double tol_newton = 1e-10;
  double tol_degenerate = 1e-10;
  double dedup_tol = 1e-6;
  TrackerSettings tracker;
};

// det(J) and the scale-aware degeneracy threshold tol * (max row norm)^n.
bool jacobian_nondegenerate(const MatrixXc& jac, double tol_degenerate, Complex* det_out);

/// Evaluation cache for one field at fixed components: the Jacobian
/// polynomials are differentiated once and reused.
class FieldSystem {
 public:
  FieldSystem(const AffineVectorField& field, Complex t_value);

  int dim() const { return n_; }
  const AffineVectorField& field() const { return field_; }
  Complex t_value() const { return t_; }
  VectorXc value(const VectorXc& z) const;
  MatrixXc jacobian(const VectorXc& z) const;
  std::vector<int> component_degrees() const;

 private:
  AffineVectorField field_;
  Complex t_;
  int n_;
  std::vector<std::vector<MultiPoly>> jac_;  // [component][variable]
};

enum class NewtonStatus { kConverged, kSingularJacobian, kNoConvergence };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::kNoConvergence;
  std::optional<Singularity> singularity;  // set whenever the residual converged
  int iterations = 0;
};

// Quadratic refinement of a seed; falls back to least-squares steps when the
// Jacobian is rank-deficient, so zeros on a positive-dimensional locus still
// converge in residual and come back flagged kSingularJacobian.
NewtonResult newton_refine(const FieldSystem& sys, std::vector<Complex> seed,
                           const SolverOptions& opts);
NewtonResult newton_refine(const AffineVectorField& field, std::vector<Complex> seed,
                           Complex t_value, const SolverOptions& opts = {});

enum class PathOutcome { kFinite, kAtInfinity, kFailed };

struct PathResult {
  PathOutcome outcome = PathOutcome::kFailed;
  std::optional<NewtonResult> endpoint;  // set for finite outcomes
  std::string note;
  int steps = 0;
};

struct SolveReport {
  std::vector<Singularity> finite;      // refined, deduplicated; degenerate ones flagged
  int bezout = 0;
  int finite_endpoints = 0;             // per-path count before deduplication
  int at_infinity = 0;
  int failed = 0;
  std::vector<std::string> path_failures;
};

// Total-degree homotopy H(z, s) = (1-s) gamma G(z) + s X(z) with
// G_i = z_i^{d_i} - 1, tracked over s in [0, 1] by Euler prediction along the
// Davidenko equation and Newton correction with adaptive step halving.
// Components must be nonzero polynomials; a nonzero-constant component makes
// the system infeasible and yields an empty report with bezout = 0.
SolveReport solve_total_degree(const AffineVectorField& field, Complex t_value,
                               const SolverOptions& opts = {});

struct SingularSet {
  std::vector<Singularity> points;                 // nondegenerate, merged over charts
  std::vector<Singularity> degenerate_candidates;  // possible non-isolated locus
  struct ChartStats {
    int chart = 0;
    int bezout = 0;
    int finite_endpoints = 0;
    int at_infinity = 0;
    int failed = 0;
    int clearing_exponent = 0;
  };
  std::vector<ChartStats> charts;
  std::vector<std::string> warnings;
  int total_failed() const;
};

// Runs solve_total_degree chart by chart (pushforward as needed) and merges
// the results by projective identity. Points are reported from the chart
// where their pivot coordinate is largest.
SingularSet singular_set(const AffineVectorField& field, Complex t_value,
                         const SolverOptions& opts = {});

}  // namespace bbres
