#include "core/solver.hpp"

#include <algorithm>
#include <cmath>

namespace bbres {

Complex TrackerSettings::gamma() const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double angle = 2.0 * M_PI * uni(rng);
  return Complex(std::cos(angle), std::sin(angle));
}

bool jacobian_nondegenerate(const MatrixXc& jac, double tol_degenerate, Complex* det_out) {
  const int n = static_cast<int>(jac.rows());
  const Complex det = jac.determinant();
  if (det_out) *det_out = det;
  double row_scale = 0.0;
  for (int i = 0; i < n; ++i) row_scale = std::max(row_scale, jac.row(i).norm());
  const double threshold = tol_degenerate * std::pow(row_scale, n);
  return std::isfinite(std::abs(det)) && std::abs(det) > threshold;
}

FieldSystem::FieldSystem(const AffineVectorField& field, Complex t_value)
    : field_(field), t_(t_value), n_(field.ambient_dim) {
  field_.validate();
  jac_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    jac_[i].reserve(n_);
    for (int j = 0; j < n_; ++j) jac_[i].push_back(field_.components[i].differentiate(j));
  }
}

VectorXc FieldSystem::value(const VectorXc& z) const {
  VectorXc f(n_);
  std::span<const Complex> pt(z.data(), static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) f(i) = field_.components[i].evaluate(pt, t_);
  return f;
}

MatrixXc FieldSystem::jacobian(const VectorXc& z) const {
  MatrixXc jac(n_, n_);
  std::span<const Complex> pt(z.data(), static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) jac(i, j) = jac_[i][j].evaluate(pt, t_);
  return jac;
}

std::vector<int> FieldSystem::component_degrees() const {
  std::vector<int> d(n_);
  for (int i = 0; i < n_; ++i) d[i] = field_.components[i].degree();
  return d;
}

namespace {

Singularity make_singularity(const FieldSystem& sys, const VectorXc& z, double residual,
                             const SolverOptions& opts) {
  Singularity s;
  s.chart = sys.field().chart;
  s.affine.assign(z.data(), z.data() + sys.dim());
  s.point = chart_point_to_projective(s.affine, s.chart);
  s.jacobian = sys.jacobian(z);
  s.residual_norm = residual;
  s.nondegenerate = jacobian_nondegenerate(s.jacobian, opts.tol_degenerate, &s.det_jacobian);
  return s;
}

}  // namespace

NewtonResult newton_refine(const FieldSystem& sys, std::vector<Complex> seed,
                           const SolverOptions& opts) {
  const int n = sys.dim();
  if (static_cast<int>(seed.size()) != n)
    throw std::invalid_argument("newton_refine: seed length mismatch");

  VectorXc z = Eigen::Map<const VectorXc>(seed.data(), n);
  NewtonResult out;
  bool singular_seen = false;
  double residual = sys.value(z).norm();

  constexpr int kMaxIters = 50;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    out.iterations = iter;
    const VectorXc f = sys.value(z);
    residual = f.norm();
    const MatrixXc jac = sys.jacobian(z);
    Complex det;
    const bool invertible = jacobian_nondegenerate(jac, 1e-13, &det);

    VectorXc delta;
    if (invertible) {
      delta = jac.partialPivLu().solve(-f);
    } else {
      singular_seen = true;
      // Gauss-Newton onto the zero locus: minimal-norm least-squares step.
      delta = jac.completeOrthogonalDecomposition().solve(-f);
    }
    if (!delta.allFinite()) {
      singular_seen = true;
      break;
    }
    z += delta;
    if (delta.norm() <= 1e-14 * (1.0 + z.norm())) {
      residual = sys.value(z).norm();
      break;
    }
    residual = sys.value(z).norm();
  }

  if (residual < opts.tol_newton) {
    out.singularity = make_singularity(sys, z, residual, opts);
    out.status = out.singularity->nondegenerate ? NewtonStatus::kConverged
                                                : NewtonStatus::kSingularJacobian;
  } else {
    out.status =
        singular_seen ? NewtonStatus::kSingularJacobian : NewtonStatus::kNoConvergence;
  }
  return out;
}

NewtonResult newton_refine(const AffineVectorField& field, std::vector<Complex> seed,
                           Complex t_value, const SolverOptions& opts) {
  return newton_refine(FieldSystem(field, t_value), std::move(seed), opts);
}

namespace {

// One homotopy path of H(z,s) = (1-s) gamma G(z) + s F(z).
class PathTracker {
 public:
  PathTracker(const FieldSystem& sys, const std::vector<int>& degrees, Complex gamma,
              const SolverOptions& opts)
      : sys_(sys), deg_(degrees), gamma_(gamma), opts_(opts), n_(sys.dim()) {}

  PathResult run(VectorXc z) const {
    const TrackerSettings& ts = opts_.tracker;
    PathResult res;
    // Track only up to s* = 1 - end zone. Stepping straight onto s = 1 lets
    // the corrector make arbitrarily long Newton jumps into finite zeros,
    // which silently converts divergent paths into duplicate endpoints.
    constexpr double kEndZone = 1e-6;
    const double s_stop = 1.0 - kEndZone;
    double s = 0.0;
    double ds = ts.initial_step;
    int successes = 0;
    double norm_mid = -1.0;  // ||z|| when s first crosses 1 - 1e-3

    while (s < s_stop - 1e-14) {
      ++res.steps;
      if (res.steps > 20000) {
        res.note = "step budget exhausted";
        return res;
      }
      ds = std::min(ds, s_stop - s);

      // Euler predictor along the Davidenko equation H_z dz = -H_s.
      const MatrixXc hz = homotopy_jacobian(z, s);
      const VectorXc hs = sys_.value(z) - gamma_ * start_value(z);
      VectorXc dz = hz.partialPivLu().solve(-hs);
      bool ok = dz.allFinite();

      VectorXc z_try;
      const double s_try = s + ds;
      if (ok) {
        z_try = z + dz * ds;
        // The corrected point must stay inside the predictor's trust region
        // and the corrector must contract right away, otherwise Newton may
        // have jumped onto a different path branch.
        const double trust =
            std::max(0.5 * dz.norm() * ds, 1e-6 * (1.0 + z_try.norm()));
        ok = correct(z_try, s_try, trust);
      }

      if (ok) {
        z = z_try;
        s = s_try;
        if (norm_mid < 0.0 && s >= 1.0 - 1e-3) norm_mid = z.norm();
        if (++successes >= 3) {
          successes = 0;
          ds = std::min(ds * 2.0, ts.max_step);
        }
        if (z.norm() > ts.divergence_radius) {
          res.outcome = PathOutcome::kAtInfinity;
          return res;
        }
      } else {
        successes = 0;
        ds *= 0.5;
        if (ds < ts.min_step) {
          // Step underflow close to the end zone usually means a singular
          // endpoint; hand the current point to the classifier below.
          if (s_stop - s < 1e-3) break;
          res.note = "predictor step underflow at s=" + format_double(s);
          return res;
        }
      }
    }

    // Endpoint classification at s ~ s*. A genuine finite endpoint refines
    // in place; a refinement that travels far has left the endpoint's basin
    // and the path is divergent (or genuinely failed) instead.
    std::vector<Complex> seed(z.data(), z.data() + n_);
    NewtonResult refined = newton_refine(sys_, std::move(seed), opts_);
    if (refined.singularity.has_value()) {
      const VectorXc at =
          Eigen::Map<const VectorXc>(refined.singularity->affine.data(), n_);
      const double moved = (at - z).norm();
      const double basin = refined.singularity->nondegenerate ? 0.02 : 0.1;
      if (moved <= basin * (1.0 + z.norm())) {
        res.outcome = PathOutcome::kFinite;
        res.endpoint = std::move(refined);
        return res;
      }
    }
    // Not a finite endpoint. Divergence shows up either as an outright large
    // norm or as sustained growth between the 1 - 1e-3 and 1 - 1e-6 marks
    // (a finite endpoint's norm is flat across that range).
    const double norm_end = z.norm();
    if (norm_end > 1e3 ||
        (norm_mid >= 0.0 && norm_end > 3.0 * std::max(1.0, norm_mid))) {
      res.outcome = PathOutcome::kAtInfinity;
      return res;
    }
    res.note = "endpoint refinement left the tracked neighborhood";
    return res;
  }

 private:
  VectorXc start_value(const VectorXc& z) const {
    VectorXc g(n_);
    for (int i = 0; i < n_; ++i) g(i) = std::pow(z(i), deg_[i]) - 1.0;
    return g;
  }

  MatrixXc homotopy_jacobian(const VectorXc& z, double s) const {
    MatrixXc jac = s * sys_.jacobian(z);
    for (int i = 0; i < n_; ++i)
      jac(i, i) += (1.0 - s) * gamma_ * static_cast<double>(deg_[i]) *
                   std::pow(z(i), deg_[i] - 1);
    return jac;
  }

  bool correct(VectorXc& z, double s, double trust) const {
    const TrackerSettings& ts = opts_.tracker;
    const VectorXc entry = z;
    double prev_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < ts.max_corrector_iters; ++it) {
      const VectorXc h = s * sys_.value(z) + (1.0 - s) * gamma_ * start_value(z);
      const MatrixXc hz = homotopy_jacobian(z, s);
      const VectorXc delta = hz.partialPivLu().solve(-h);
      if (!delta.allFinite()) return false;
      const double step = delta.norm();
      if (step > 0.5 * prev_step) return false;  // not contracting fast enough
      prev_step = step;
      z += delta;
      if ((z - entry).norm() > trust) return false;
      if (step <= ts.corrector_tol * std::max(1.0, z.norm())) return true;
    }
    return false;
  }

  const FieldSystem& sys_;
  const std::vector<int>& deg_;
  Complex gamma_;
  const SolverOptions& opts_;
  int n_;
};

}  // namespace

SolveReport solve_total_degree(const AffineVectorField& field, Complex t_value,
                               const SolverOptions& opts) {
  field.validate();
  const FieldSystem sys(field, t_value);
  const int n = sys.dim();
  SolveReport report;

  const std::vector<int> degrees = sys.component_degrees();
  for (int d : degrees) {
    if (d < 0) throw std::invalid_argument("solve_total_degree: zero component polynomial");
    if (d == 0) return report;  // nonzero constant component: empty variety
  }

  long long bezout = 1;
  for (int d : degrees) bezout *= d;
  report.bezout = static_cast<int>(bezout);

  const Complex gamma = opts.tracker.gamma();
  const PathTracker tracker(sys, degrees, gamma, opts);

  std::vector<int> idx(n, 0);
  for (long long path = 0; path < bezout; ++path) {
    VectorXc start(n);
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * M_PI * idx[i] / degrees[i];
      start(i) = Complex(std::cos(angle), std::sin(angle));
    }
    PathResult pr = tracker.run(start);
    switch (pr.outcome) {
      case PathOutcome::kAtInfinity:
        ++report.at_infinity;
        break;
      case PathOutcome::kFailed:
        ++report.failed;
        report.path_failures.push_back("path " + std::to_string(path) + ": " + pr.note);
        break;
      case PathOutcome::kFinite: {
        ++report.finite_endpoints;
        const Singularity& cand = *pr.endpoint->singularity;
        bool duplicate = false;
        for (Singularity& kept : report.finite) {
          if (projective_distance(kept.point, cand.point) < opts.dedup_tol) {
            if (cand.residual_norm < kept.residual_norm) kept = cand;
            duplicate = true;
            break;
          }
        }
        if (!duplicate) report.finite.push_back(cand);
        break;
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < degrees[i]) break;
      idx[i] = 0;
    }
  }
  return report;
}

int SingularSet::total_failed() const {
  int f = 0;
  for (const ChartStats& c : charts) f += c.failed;
  return f;
}

SingularSet singular_set(const AffineVectorField& field, Complex t_value,
                         const SolverOptions& opts) {
  field.validate();
  const int n = field.ambient_dim;
  SingularSet out;

  auto merge = [&](std::vector<Singularity>& bucket, const Singularity& cand) {
    for (Singularity& kept : bucket) {
      if (projective_distance(kept.point, cand.point) < opts.dedup_tol) {
        // Prefer the chart where the point sits deepest inside.
        const double held = std::abs(kept.point.coords()[kept.chart]);
        const double mine = std::abs(cand.point.coords()[cand.chart]);
        if (mine > held) kept = cand;
        return;
      }
    }
    bucket.push_back(cand);
  };

  for (int chart = 0; chart <= n; ++chart) {
    AffineVectorField local;
    int clearing = 0;
    if (chart == field.chart) {
      local = field;
    } else {
      ChartChange change = pushforward_chart(field, chart);
      local = std::move(change.field);
      clearing = change.clearing_exponent;
    }

    bool has_zero_component = false;
    for (const MultiPoly& c : local.components)
      if (c.is_zero()) has_zero_component = true;
    if (has_zero_component) {
      out.warnings.push_back("chart " + std::to_string(chart) +
                             ": zero component after pushforward, no isolated zeros "
                             "(possible non-isolated locus); chart skipped");
      continue;
    }

    SolveReport rep = solve_total_degree(local, t_value, opts);
    SingularSet::ChartStats stats;
    stats.chart = chart;
    stats.bezout = rep.bezout;
    stats.finite_endpoints = rep.finite_endpoints;
    stats.at_infinity = rep.at_infinity;
    stats.failed = rep.failed;
    stats.clearing_exponent = clearing;
    out.charts.push_back(stats);
    for (const std::string& fail : rep.path_failures)
      out.warnings.push_back("chart " + std::to_string(chart) + ": " + fail);

    for (const Singularity& s : rep.finite)
      merge(s.nondegenerate ? out.points : out.degenerate_candidates, s);
  }

  if (!out.degenerate_candidates.empty())
    out.warnings.push_back(
        std::to_string(out.degenerate_candidates.size()) +
        " degenerate zero(s) found: possible non-isolated singular locus; "
        "point residues are undefined there");

  // Deterministic report order under the canonical normalization.
  auto canonical_less = [](const Singularity& a, const Singularity& b) {
    const auto& u = a.point.coords();
    const auto& v = b.point.coords();
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].real() != v[i].real()) return u[i].real() < v[i].real();
      if (u[i].imag() != v[i].imag()) return u[i].imag() < v[i].imag();
    }
    return false;
  };
  std::sort(out.points.begin(), out.points.end(), canonical_less);
  std::sort(out.degenerate_candidates.begin(), out.degenerate_candidates.end(),
            canonical_less);
  return out;
}

}  // namespace bbres
