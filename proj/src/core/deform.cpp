#include "core/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bbres {

std::vector<double> DeformationFamily::grid() const {
  std::vector<double> g(count);
  double t = t_start;
  for (int k = 0; k < count; ++k, t *= ratio) g[k] = t;
  return g;
}

void DeformationFamily::validate() const {
  field.validate();
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("deformation: ratio must lie in (0, 1)");
  if (count < 3)
    throw std::invalid_argument("deformation: extrapolation requires at least 3 points");
  if (t_start == t_target)
    throw std::invalid_argument("deformation: t_start must differ from the target");
}

namespace {

// Aitken extrapolation of three consecutive values; exact for a geometric
// correction sequence, which is what a t^alpha error term produces on a
// geometric grid.
LimitEstimate aitken_tail(Complex a, Complex b, Complex c) {
  const Complex d1 = b - a;
  const Complex d2 = c - b;
  if (std::abs(d2) < 1e-12) return {c, std::abs(d2)};
  const Complex rho = d2 / d1;
  if (!(std::abs(rho) < 1.0)) return {c, std::abs(d2)};
  const Complex correction = d2 * rho / (1.0 - rho);
  return {c + correction, std::abs(correction)};
}

// Neville evaluation at 0 of the polynomial interpolating (nodes[i],
// values[i]). Coordinates of colliding singularities expand in powers of
// sqrt(t), so extrapolating in s = sqrt(t) covers both the analytic and the
// square-root branches; a single Aitken step on three points cannot reach
// the grouping tolerance here.
Complex neville_suffix(std::span<const double> nodes, std::span<const Complex> input,
                       std::size_t from) {
  std::vector<Complex> values(input.begin() + from, input.end());
  const std::size_t n = values.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i) {
      const double si = nodes[from + i];
      const double sj = nodes[from + i + level];
      values[i] = (sj * values[i] - si * values[i + 1]) / (sj - si);
    }
  return values[0];
}

// The earliest grid points may lie outside the convergence disc of the
// sqrt(t) expansion (the nearest branch point of the singularity locus caps
// it), which poisons interpolation through them. Extrapolate on every
// suffix of the tail and keep the estimate that is least sensitive to
// dropping one more point.
Complex neville_at_zero(std::span<const double> nodes, const std::vector<Complex>& values) {
  const std::size_t n = values.size();
  std::vector<Complex> candidates;
  for (std::size_t from = 0; from + 3 <= n; ++from)
    candidates.push_back(neville_suffix(nodes, values, from));
  if (candidates.empty()) return values.back();
  std::size_t best = 0;
  double best_sens = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < candidates.size(); ++j) {
    const double sens = std::abs(candidates[j] - candidates[j + 1]);
    if (sens < best_sens) {
      best_sens = sens;
      best = j;
    }
  }
  return candidates[best];
}

ProjectivePoint extrapolate_limit(const std::vector<const Singularity*>& tail,
                                  std::span<const double> t_values) {
  // Phase-align consecutive representatives before coordinate-wise
  // extrapolation; the canonical normalization can flip phase between grid
  // points when the leading coordinate changes.
  std::vector<std::vector<Complex>> h;
  h.reserve(tail.size());
  for (const Singularity* s : tail) h.push_back(s->point.coords());
  for (std::size_t k = 1; k < h.size(); ++k) {
    Complex inner = 0.0;
    for (std::size_t i = 0; i < h[k].size(); ++i) inner += std::conj(h[k - 1][i]) * h[k][i];
    if (std::abs(inner) > 0.0) {
      const Complex phase = inner / std::abs(inner);
      for (Complex& c : h[k]) c /= phase;
    }
  }
  std::vector<double> nodes;
  nodes.reserve(t_values.size());
  for (double t : t_values) nodes.push_back(std::sqrt(std::abs(t)));
  std::vector<Complex> lim(h[0].size());
  for (std::size_t i = 0; i < lim.size(); ++i) {
    std::vector<Complex> coordinate;
    coordinate.reserve(h.size());
    for (const auto& sample : h) coordinate.push_back(sample[i]);
    lim[i] = neville_at_zero(nodes, coordinate);
  }
  return ProjectivePoint::from_homogeneous(std::move(lim));
}

}  // namespace

SweepResult sweep(const DeformationFamily& family, const SolverOptions& opts) {
  family.validate();
  SweepResult out;
  out.grid = family.grid();
  const int m = static_cast<int>(out.grid.size());
  const int n = family.field.ambient_dim;
  out.chart_stats.resize(n + 1);
  for (int c = 0; c <= n; ++c) out.chart_stats[c].chart = c;

  double max_motion = 0.0;
  for (int k = 0; k < m; ++k) {
    std::vector<Singularity> found;
    bool solved = false;
    try {
      SingularSet set = singular_set(family.field, out.grid[k], opts);
      solved = true;
      found = std::move(set.points);
      if (!set.degenerate_candidates.empty()) {
        ++out.degenerate_hits;
        out.warnings.push_back("t=" + format_double(out.grid[k]) + ": " +
                               std::to_string(set.degenerate_candidates.size()) +
                               " degenerate zero(s), excluded from path tracking");
      }
      for (const auto& st : set.charts) {
        auto& acc = out.chart_stats[st.chart];
        acc.bezout += st.bezout;
        acc.finite_endpoints += st.finite_endpoints;
        acc.at_infinity += st.at_infinity;
        acc.failed += st.failed;
        acc.clearing_exponent = st.clearing_exponent;
      }
      for (const std::string& w : set.warnings)
        out.warnings.push_back("t=" + format_double(out.grid[k]) + ": " + w);
    } catch (const std::exception& e) {
      out.warnings.push_back("t=" + format_double(out.grid[k]) +
                             ": solver failed: " + e.what());
    }

    if (!solved) {
      for (SingularityPath& p : out.paths) p.samples.emplace_back();
      continue;
    }

    // Match found points against live paths by nearest projective distance.
    const double threshold =
        max_motion > 0.0 ? 10.0 * max_motion : std::numeric_limits<double>::infinity();
    const int npaths = static_cast<int>(out.paths.size());
    std::vector<int> point_of_path(npaths, -1);
    std::vector<int> path_of_point(found.size(), -1);

    struct Cand {
      double dist;
      int path;
      int point;
    };
    std::vector<Cand> cands;
    for (int p = 0; p < npaths; ++p) {
      const auto& samples = out.paths[p].samples;
      if (samples.empty() || !samples.back().has_value()) continue;  // not live
      for (std::size_t q = 0; q < found.size(); ++q) {
        const double d = projective_distance(samples.back()->point, found[q].point);
        if (d <= threshold) cands.push_back({d, p, static_cast<int>(q)});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.path != b.path) return a.path < b.path;
      return a.point < b.point;
    });
    for (const Cand& c : cands) {
      if (point_of_path[c.path] != -1) continue;
      if (path_of_point[c.point] != -1) {
        // Collision: a second path wants an already-claimed point.
        out.paths[c.path].status = SingularityPath::Status::kMerged;
        out.paths[path_of_point[c.point]].status = SingularityPath::Status::kMerged;
        out.warnings.push_back("t=" + format_double(out.grid[k]) + ": paths " +
                               std::to_string(path_of_point[c.point]) + " and " +
                               std::to_string(c.path) + " merged");
        continue;
      }
      point_of_path[c.path] = c.point;
      path_of_point[c.point] = c.path;
    }

    for (int p = 0; p < npaths; ++p) {
      if (point_of_path[p] >= 0) {
        const Singularity& s = found[point_of_path[p]];
        max_motion = std::max(
            max_motion, projective_distance(out.paths[p].samples.back()->point, s.point));
        out.paths[p].samples.emplace_back(s);
      } else {
        if (!out.paths[p].samples.empty() && out.paths[p].samples.back().has_value() &&
            out.paths[p].status == SingularityPath::Status::kConverged)
          out.paths[p].status = SingularityPath::Status::kEscaped;
        out.paths[p].samples.emplace_back();
      }
    }
    for (std::size_t q = 0; q < found.size(); ++q) {
      if (path_of_point[q] != -1) continue;
      SingularityPath path;
      path.first_grid_index = k;
      path.samples.assign(k, std::nullopt);
      path.samples.emplace_back(found[q]);
      out.paths.push_back(std::move(path));
    }
  }

  // Extrapolate each path's limit from its trailing run of samples (capped
  // at 12 grid points).
  for (SingularityPath& p : out.paths) {
    std::vector<const Singularity*> tail;
    std::vector<double> tail_t;
    for (int k = m - 1; k >= 0 && tail.size() < 12; --k) {
      if (!p.samples[k].has_value()) break;
      tail.push_back(&*p.samples[k]);
      tail_t.push_back(out.grid[k]);
    }
    std::reverse(tail.begin(), tail.end());
    std::reverse(tail_t.begin(), tail_t.end());
    if (tail.size() >= 3) {
      p.limit = extrapolate_limit(tail, tail_t);
    } else if (!tail.empty()) {
      p.limit = tail.back()->point;
      if (p.status == SingularityPath::Status::kConverged)
        p.status = SingularityPath::Status::kEscaped;
    } else {
      // Path died before the end of the grid; keep its last known position.
      for (int k = m - 1; k >= 0; --k)
        if (p.samples[k].has_value()) {
          p.limit = p.samples[k]->point;
          break;
        }
      if (p.status == SingularityPath::Status::kConverged)
        p.status = SingularityPath::Status::kEscaped;
    }
  }
  return out;
}

GroupingResult group_paths(const std::vector<SingularityPath>& paths,
                           const std::vector<Witness>& witnesses, double match_tol) {
  GroupingResult out;
  const int npaths = static_cast<int>(paths.size());

  std::map<std::string, std::vector<int>> by_witness;
  std::vector<int> free_paths;

  for (int p = 0; p < npaths; ++p) {
    const auto& coords = paths[p].limit.coords();
    std::vector<std::string> hits;
    for (const Witness& w : witnesses) {
      double residual = 0.0;
      for (const MultiPoly& eq : w.equations)
        residual = std::max(residual, std::abs(eq.evaluate(coords, 0.0)));
      if (residual < match_tol) hits.push_back(w.name);
    }
    if (hits.size() > 1) {
      std::string joined;
      for (const std::string& h : hits) joined += (joined.empty() ? "" : ",") + h;
      out.ambiguous.emplace_back(p, joined);
    } else if (hits.size() == 1) {
      by_witness[hits[0]].push_back(p);
    } else {
      free_paths.push_back(p);
    }
  }

  // Witnesses keep their declaration order.
  for (const Witness& w : witnesses) {
    auto it = by_witness.find(w.name);
    if (it == by_witness.end()) continue;
    ComponentGroup g;
    g.label = w.name;
    g.witness = w.name;
    g.path_ids = it->second;
    g.representative_limit = paths[g.path_ids.front()].limit;
    out.groups.push_back(std::move(g));
  }

  // Remaining paths cluster by limit point (union-find).
  std::vector<int> parent(npaths);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < free_paths.size(); ++a)
    for (std::size_t b = a + 1; b < free_paths.size(); ++b)
      if (projective_distance(paths[free_paths[a]].limit, paths[free_paths[b]].limit) <
          match_tol)
        parent[find(free_paths[a])] = find(free_paths[b]);

  std::map<int, std::vector<int>> clusters;
  for (int p : free_paths) clusters[find(p)].push_back(p);
  int counter = 0;
  for (auto& [root, members] : clusters) {
    ComponentGroup g;
    g.label = "component-" + std::to_string(++counter);
    g.path_ids = members;
    g.representative_limit = paths[members.front()].limit;
    out.groups.push_back(std::move(g));
  }
  return out;
}

std::vector<GroupSeries> grouped_residues(const GroupingResult& grouping,
                                          const std::vector<SingularityPath>& paths,
                                          const ChernMonomial& monomial,
                                          double tol_degenerate) {
  std::vector<GroupSeries> out;
  for (const ComponentGroup& g : grouping.groups) {
    GroupSeries series;
    series.group = g.label;
    series.monomial = monomial.label();
    const std::size_t m = g.path_ids.empty() ? 0 : paths[g.path_ids[0]].samples.size();
    for (std::size_t k = 0; k < m; ++k) {
      Complex sum = 0.0;
      bool ok = true;
      for (int p : g.path_ids) {
        const auto& sample = paths[p].samples[k];
        if (!sample.has_value() || !sample->nondegenerate) {
          ok = false;
          break;
        }
        sum += bb_residue_value(sample->jacobian, monomial, tol_degenerate);
      }
      if (ok) {
        series.values.emplace_back(sum);
      } else {
        series.values.emplace_back();
        series.excluded_grid_points.push_back(static_cast<int>(k));
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

LimitEstimate limit_estimate(std::span<const Complex> series) {
  if (series.size() < 3)
    throw std::invalid_argument("limit_estimate: need at least 3 points");
  const std::size_t m = series.size();
  return aitken_tail(series[m - 3], series[m - 2], series[m - 1]);
}

}  // namespace bbres
