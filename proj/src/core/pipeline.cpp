#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bbres {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json point_json(const ProjectivePoint& p) {
  Json arr = Json::array();
  for (const Complex& c : p.coords()) arr.push_back(complex_json(c));
  return arr;
}

Json coords_json(std::span<const Complex> coords) {
  Json arr = Json::array();
  for (const Complex& c : coords) arr.push_back(complex_json(c));
  return arr;
}

Json singularity_json(const Singularity& s, int index) {
  Json j;
  j["index"] = index;
  j["point"] = point_json(s.point);
  j["chart"] = s.chart;
  j["affine"] = coords_json(s.affine);
  j["residual_norm"] = s.residual_norm;
  j["det_jacobian"] = complex_json(s.det_jacobian);
  j["nondegenerate"] = s.nondegenerate;
  return j;
}

Json config_json(const Problem& problem, const PipelineOptions& opts) {
  Json j;
  j["spec"] = problem.echo;
  j["seed"] = opts.solver.tracker.seed;
  j["tolerances"] = {{"newton", opts.solver.tol_newton},
                     {"degenerate", opts.solver.tol_degenerate},
                     {"dedup", opts.solver.dedup_tol}};
  j["max_path_failures"] = opts.max_path_failures;
  return j;
}

Json chart_stats_json(std::span<const SingularSet::ChartStats> stats) {
  Json arr = Json::array();
  for (const auto& st : stats) {
    Json j;
    j["chart"] = st.chart;
    j["bezout"] = st.bezout;
    j["finite_endpoints"] = st.finite_endpoints;
    j["at_infinity"] = st.at_infinity;
    j["failed"] = st.failed;
    j["clearing_exponent"] = st.clearing_exponent;
    arr.push_back(std::move(j));
  }
  return arr;
}

int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw SpecError(std::string("spec: missing or non-integer field '") + key + "'");
  return j[key].get<int>();
}

// Witness names satisfied by at least one degenerate candidate; used to label
// the residual attribution row.
std::string attribution_label(const Problem& problem,
                              std::span<const Singularity> degenerate) {
  std::string label;
  for (const Witness& w : problem.witnesses) {
    bool hit = false;
    for (const Singularity& s : degenerate) {
      double residual = 0.0;
      for (const MultiPoly& eq : w.equations)
        residual = std::max(residual, std::abs(eq.evaluate(s.point.coords(), 0.0)));
      if (residual < 1e-6) {
        hit = true;
        break;
      }
    }
    if (hit) label += (label.empty() ? "" : "+") + w.name;
  }
  return label.empty() ? "non-isolated" : label;
}

}  // namespace

Problem parse_problem(const std::string& spec_text) {
  Json spec;
  try {
    spec = Json::parse(spec_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("spec: ") + e.what());
  }
  if (!spec.is_object()) throw SpecError("spec: top level must be an object");

  Problem p;
  p.echo = spec;
  p.dim = require_int(spec, "dim");
  if (p.dim < 1) throw SpecError("spec: dim must be >= 1");
  p.chart = require_int(spec, "chart");
  if (p.chart < 0 || p.chart > p.dim)
    throw SpecError("spec: chart must lie in 0.." + std::to_string(p.dim));

  if (!spec.contains("variables") || !spec["variables"].is_array())
    throw SpecError("spec: missing 'variables' array");
  for (const auto& v : spec["variables"]) p.variables.push_back(v.get<std::string>());
  if (static_cast<int>(p.variables.size()) != p.dim)
    throw SpecError("spec: expected " + std::to_string(p.dim) + " variable names");

  if (spec.contains("parameter")) p.parameter = spec["parameter"].get<std::string>();

  if (!spec.contains("components") || !spec["components"].is_array())
    throw SpecError("spec: missing 'components' array");
  for (const auto& c : spec["components"]) p.component_text.push_back(c.get<std::string>());
  if (static_cast<int>(p.component_text.size()) != p.dim)
    throw SpecError("spec: expected " + std::to_string(p.dim) + " components");

  p.field.ambient_dim = p.dim;
  p.field.chart = p.chart;
  for (const std::string& text : p.component_text) {
    try {
      p.field.components.push_back(parse_poly(text, p.variables, p.parameter));
    } catch (const ParseError& e) {
      throw SpecError("spec: component '" + text + "' at position " +
                      std::to_string(e.position) + ": " + e.what());
    }
  }
  p.field.validate();

  if (spec.contains("deformation")) {
    const Json& d = spec["deformation"];
    if (!d.is_object()) throw SpecError("spec: 'deformation' must be an object");
    if (p.parameter.empty())
      throw SpecError("spec: deformation block requires a declared parameter");
    DeformationFamily fam;
    fam.field = p.field;
    if (!d.contains("t_start") || !d["t_start"].is_number())
      throw SpecError("spec: deformation needs numeric 't_start'");
    fam.t_start = d["t_start"].get<double>();
    if (!d.contains("ratio") || !d["ratio"].is_number())
      throw SpecError("spec: deformation needs numeric 'ratio'");
    fam.ratio = d["ratio"].get<double>();
    fam.count = require_int(d, "count");
    if (d.contains("t0")) fam.t_target = d["t0"].get<double>();
    try {
      fam.validate();
    } catch (const std::exception& e) {
      throw SpecError(std::string("spec: ") + e.what());
    }
    p.deformation = std::move(fam);
  }

  if (spec.contains("witnesses")) {
    const Json& w = spec["witnesses"];
    if (!w.is_object()) throw SpecError("spec: 'witnesses' must be an object");
    std::vector<std::string> homog_names;
    for (int j = 0; j <= p.dim; ++j) homog_names.push_back("x" + std::to_string(j));
    for (const auto& [name, eqs] : w.items()) {
      if (!eqs.is_array()) throw SpecError("spec: witness '" + name + "' must be an array");
      Witness witness;
      witness.name = name;
      for (const auto& text : eqs) {
        MultiPoly eq;
        try {
          eq = parse_poly(text.get<std::string>(), homog_names, "");
        } catch (const ParseError& e) {
          throw SpecError("spec: witness '" + name + "' expression at position " +
                          std::to_string(e.position) + ": " + e.what());
        }
        int degree = -1;
        for (const auto& [exps, coeff] : eq.terms()) {
          const int d =
              std::accumulate(exps.begin(), exps.end() - 1, 0);
          if (degree == -1) degree = d;
          if (d != degree)
            throw SpecError("spec: witness '" + name + "' expression is not homogeneous");
        }
        witness.equations.push_back(std::move(eq));
      }
      p.witnesses.push_back(std::move(witness));
    }
  }

  if (spec.contains("monomials")) {
    for (const auto& label : spec["monomials"]) {
      ChernMonomial m;
      try {
        m = ChernMonomial::from_label(label.get<std::string>(), p.dim);
      } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("spec: ") + e.what());
      }
      if (m.weighted_degree() != p.dim)
        throw SpecError("spec: monomial '" + m.label() + "' does not have degree " +
                        std::to_string(p.dim));
      p.monomials.push_back(std::move(m));
    }
    if (p.monomials.empty()) throw SpecError("spec: 'monomials' must not be empty");
  } else {
    p.monomials = ChernMonomial::all_top_degree(p.dim);
  }
  return p;
}

RunOutcome run_chart(const Problem& problem, int target_chart, const PipelineOptions& opts) {
  if (target_chart < 0 || target_chart > problem.dim)
    throw SpecError("chart: target chart out of range 0.." + std::to_string(problem.dim));
  if (target_chart == problem.chart)
    throw SpecError("chart: target chart equals source");
  const ChartChange change = pushforward_chart(problem.field, target_chart);

  RunOutcome out;
  out.report["command"] = "chart";
  out.report["config"] = config_json(problem, opts);
  out.report["source_chart"] = problem.chart;
  out.report["target_chart"] = target_chart;
  Json comps = Json::array();
  for (const MultiPoly& c : change.field.components)
    comps.push_back(c.to_string(problem.variables, problem.parameter));
  out.report["components"] = std::move(comps);
  out.report["clearing_exponent"] = change.clearing_exponent;
  return out;
}

RunOutcome run_residues(const Problem& problem, std::optional<double> t_value,
                        const PipelineOptions& opts) {
  const bool needs_t = problem.field.components.end() !=
                       std::find_if(problem.field.components.begin(),
                                    problem.field.components.end(),
                                    [](const MultiPoly& c) { return c.has_parameter(); });
  if (needs_t && !t_value.has_value())
    throw SpecError("residues: the field depends on the parameter, supply --t");
  const double t = t_value.value_or(0.0);

  const SingularSet set = singular_set(problem.field, t, opts.solver);

  RunOutcome out;
  out.report["command"] = "residues";
  out.report["config"] = config_json(problem, opts);
  out.report["t"] = t;

  Json sing = Json::array();
  for (std::size_t i = 0; i < set.points.size(); ++i)
    sing.push_back(singularity_json(set.points[i], static_cast<int>(i)));
  out.report["singularities"] = std::move(sing);

  Json degen = Json::array();
  for (std::size_t i = 0; i < set.degenerate_candidates.size(); ++i)
    degen.push_back(
        singularity_json(set.degenerate_candidates[i], static_cast<int>(i)));
  out.report["degenerate_candidates"] = std::move(degen);

  Json residues = Json::array();
  for (const ChernMonomial& monomial : problem.monomials) {
    Json entry;
    entry["monomial"] = monomial.label();
    Json points = Json::array();
    std::vector<ResidueRecord> records;
    Complex sum = 0.0;
    for (std::size_t i = 0; i < set.points.size(); ++i) {
      ResidueRecord rec = bb_residue(set.points[i], monomial, static_cast<int>(i),
                                     opts.solver.tol_degenerate);
      sum += rec.value;
      Json pj;
      pj["index"] = static_cast<int>(i);
      pj["value"] = complex_json(rec.value);
      points.push_back(std::move(pj));
      records.push_back(std::move(rec));
    }
    entry["points"] = std::move(points);
    entry["sum"] = complex_json(sum);
    const long long target = chern_number_projective(problem.dim, monomial);
    entry["target"] = target;
    entry["sum_residual"] = std::abs(sum - static_cast<double>(target));
    if (!set.degenerate_candidates.empty()) {
      const ResidueRecord att = residual_attribution(
          records, monomial, problem.dim,
          attribution_label(problem, set.degenerate_candidates));
      Json aj;
      aj["label"] = att.label;
      aj["value"] = complex_json(att.value);
      entry["attribution"] = std::move(aj);
    }
    residues.push_back(std::move(entry));
  }
  out.report["residues"] = std::move(residues);
  out.report["charts"] = chart_stats_json(set.charts);
  out.report["warnings"] = set.warnings;
  if (set.total_failed() > opts.max_path_failures) out.exit_code = 3;
  return out;
}

RunOutcome run_sweep(const Problem& problem, const PipelineOptions& opts) {
  if (!problem.deformation.has_value())
    throw SpecError("sweep: spec has no deformation block");

  const SweepResult swept = sweep(*problem.deformation, opts.solver);
  const GroupingResult grouping = group_paths(swept.paths, problem.witnesses);

  RunOutcome out;
  out.report["command"] = "sweep";
  out.report["config"] = config_json(problem, opts);
  out.report["grid"] = swept.grid;

  Json paths = Json::array();
  for (std::size_t p = 0; p < swept.paths.size(); ++p) {
    const SingularityPath& path = swept.paths[p];
    Json pj;
    pj["id"] = static_cast<int>(p);
    switch (path.status) {
      case SingularityPath::Status::kConverged: pj["status"] = "converged"; break;
      case SingularityPath::Status::kMerged: pj["status"] = "merged"; break;
      case SingularityPath::Status::kEscaped: pj["status"] = "escaped"; break;
    }
    pj["first_grid_index"] = path.first_grid_index;
    pj["limit"] = point_json(path.limit);
    Json samples = Json::array();
    for (std::size_t k = 0; k < path.samples.size(); ++k) {
      if (!path.samples[k].has_value()) {
        samples.push_back(nullptr);
        continue;
      }
      const Singularity& s = *path.samples[k];
      Json sj;
      sj["t"] = swept.grid[k];
      sj["point"] = point_json(s.point);
      sj["chart"] = s.chart;
      sj["nondegenerate"] = s.nondegenerate;
      sj["det_jacobian"] = complex_json(s.det_jacobian);
      samples.push_back(std::move(sj));
    }
    pj["points"] = std::move(samples);
    paths.push_back(std::move(pj));
  }
  out.report["paths"] = std::move(paths);

  Json groups = Json::array();
  for (const ComponentGroup& g : grouping.groups) {
    Json gj;
    gj["label"] = g.label;
    if (g.witness.has_value()) gj["witness"] = *g.witness;
    gj["paths"] = g.path_ids;
    gj["limit"] = point_json(g.representative_limit);
    groups.push_back(std::move(gj));
  }
  out.report["groups"] = std::move(groups);

  Json ambiguous = Json::array();
  for (const auto& [path, names] : grouping.ambiguous) {
    Json aj;
    aj["path"] = path;
    aj["witnesses"] = names;
    ambiguous.push_back(std::move(aj));
  }
  out.report["ambiguous"] = std::move(ambiguous);

  std::vector<std::string> warnings = swept.warnings;
  for (const auto& [path, names] : grouping.ambiguous)
    warnings.push_back("path " + std::to_string(path) +
                       ": limit satisfies multiple witnesses (" + names +
                       "), not assigned to a group");

  Json series_json = Json::array();
  for (const ChernMonomial& monomial : problem.monomials) {
    const std::vector<GroupSeries> series =
        grouped_residues(grouping, swept.paths, monomial, opts.solver.tol_degenerate);
    for (const GroupSeries& s : series) {
      Json sj;
      sj["group"] = s.group;
      sj["monomial"] = s.monomial;
      Json values = Json::array();
      for (const auto& v : s.values) {
        if (v.has_value())
          values.push_back(complex_json(*v));
        else
          values.push_back(nullptr);
      }
      sj["values"] = std::move(values);
      sj["excluded_grid_points"] = s.excluded_grid_points;

      // Limit from the longest included suffix.
      std::vector<Complex> tail;
      for (auto it = s.values.rbegin(); it != s.values.rend() && it->has_value(); ++it)
        tail.push_back(**it);
      std::reverse(tail.begin(), tail.end());
      if (tail.size() >= 3) {
        const LimitEstimate est = limit_estimate(tail);
        sj["limit"] = complex_json(est.limit);
        sj["error_estimate"] = est.error_estimate;
      } else {
        sj["limit"] = nullptr;
        warnings.push_back("series " + s.group + "/" + s.monomial +
                           ": fewer than 3 usable grid points, no limit estimate");
      }
      series_json.push_back(std::move(sj));
    }
  }
  out.report["series"] = std::move(series_json);

  // Sum-theorem check across all paths at each usable grid point.
  Json sums = Json::array();
  for (const ChernMonomial& monomial : problem.monomials) {
    const long long target = chern_number_projective(problem.dim, monomial);
    for (std::size_t k = 0; k < swept.grid.size(); ++k) {
      Complex sum = 0.0;
      bool complete = !swept.paths.empty();
      for (const SingularityPath& path : swept.paths) {
        const auto& sample = path.samples[k];
        if (!sample.has_value() || !sample->nondegenerate) {
          complete = false;
          break;
        }
        sum += bb_residue_value(sample->jacobian, monomial, opts.solver.tol_degenerate);
      }
      if (!complete) continue;
      Json cj;
      cj["monomial"] = monomial.label();
      cj["t"] = swept.grid[k];
      cj["sum"] = complex_json(sum);
      cj["target"] = target;
      cj["residual"] = std::abs(sum - static_cast<double>(target));
      sums.push_back(std::move(cj));
    }
  }
  out.report["sum_checks"] = std::move(sums);

  out.report["charts"] = chart_stats_json(swept.chart_stats);
  out.report["warnings"] = warnings;

  int failed = 0;
  for (const auto& st : swept.chart_stats) failed += st.failed;
  if (failed > opts.max_path_failures) out.exit_code = 3;
  return out;
}

RunOutcome run_chern(int dim, const std::string& monomial_label) {
  ChernMonomial monomial;
  try {
    monomial = ChernMonomial::from_label(monomial_label, dim);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  if (monomial.weighted_degree() != dim)
    throw SpecError("chern: monomial '" + monomial_label + "' does not have degree " +
                    std::to_string(dim));
  RunOutcome out;
  out.report["command"] = "chern";
  out.report["dim"] = dim;
  out.report["monomial"] = monomial.label();
  out.report["value"] = chern_number_projective(dim, monomial);
  return out;
}

std::string report_to_string(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace bbres
