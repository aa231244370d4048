#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "core/deform.hpp"

namespace bbres {

using Json = nlohmann::ordered_json;

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parsed field-specification file: ambient data, the field, and the
/// optional deformation block, witnesses and monomial list.
struct Problem {
  int dim = 0;
  int chart = 0;
  std::vector<std::string> variables;
  std::string parameter;  // empty when the spec declares none
  std::vector<std::string> component_text;
  AffineVectorField field;
  std::optional<DeformationFamily> deformation;
  std::vector<Witness> witnesses;
  std::vector<ChernMonomial> monomials;  // defaults to all top-degree monomials
  Json echo;                             // the spec as read, for report echoes
};

// Parses and validates the JSON spec format documented in docs/spec-format.md.
// Throws SpecError with a descriptive message on any validation failure.
Problem parse_problem(const std::string& spec_text);

struct PipelineOptions {
  SolverOptions solver;
  int max_path_failures = 0;
};

struct RunOutcome {
  Json report;
  // 0: success (warnings allowed); 3: numerical failure budget exceeded.
  int exit_code = 0;
};

// `bbres chart`: pushforward to the target chart, printed components and the
// clearing exponent.
RunOutcome run_chart(const Problem& problem, int target_chart,
                     const PipelineOptions& opts = {});

// `bbres residues`: full singular set at fixed t, per-point residues per
// monomial, sum-theorem checks, and residual attribution when degenerate
// candidates are present.
RunOutcome run_residues(const Problem& problem, std::optional<double> t_value,
                        const PipelineOptions& opts = {});

// `bbres sweep`: deformation sweep, path table, grouping, grouped residue
// series and limit estimates.
RunOutcome run_sweep(const Problem& problem, const PipelineOptions& opts = {});

// `bbres chern`: the global Chern number of P^n for one monomial label.
RunOutcome run_chern(int dim, const std::string& monomial_label);

// Canonical byte form of a report (what --json writes and the C API returns).
std::string report_to_string(const Json& report);

}  // namespace bbres
