#include "bbres/bbres.h"

#include <cstring>
#include <new>

#include "core/pipeline.hpp"

using bbres::PipelineOptions;
using bbres::Problem;
using bbres::RunOutcome;

struct bbres_problem {
  Problem problem;
};

struct bbres_report {
  std::string json;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** err_msg, const std::string& message) {
  if (err_msg) *err_msg = dup_string(message);
}

PipelineOptions to_pipeline_options(const bbres_options* opts) {
  PipelineOptions po;
  if (!opts) return po;
  po.solver.tracker.seed = opts->seed;
  po.solver.tol_newton = opts->tol_newton;
  po.solver.tol_degenerate = opts->tol_degenerate;
  po.max_path_failures = opts->max_path_failures;
  return po;
}

bbres_status finish(RunOutcome outcome, bbres_report** out, char** err_msg) {
  auto* report = new (std::nothrow) bbres_report{bbres::report_to_string(outcome.report)};
  if (!report) {
    set_error(err_msg, "out of memory");
    return BBRES_ERR_INTERNAL;
  }
  *out = report;
  return outcome.exit_code == 3 ? BBRES_ERR_NUMERIC : BBRES_OK;
}

template <typename Fn>
bbres_status guarded(Fn&& fn, bbres_report** out, char** err_msg) {
  if (!out) return BBRES_ERR_INPUT;
  *out = nullptr;
  try {
    return fn();
  } catch (const bbres::SpecError& e) {
    set_error(err_msg, e.what());
    return BBRES_ERR_INPUT;
  } catch (const std::invalid_argument& e) {
    set_error(err_msg, e.what());
    return BBRES_ERR_INPUT;
  } catch (const std::exception& e) {
    set_error(err_msg, e.what());
    return BBRES_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

void bbres_options_init(bbres_options* opts) {
  if (!opts) return;
  opts->seed = bbres::TrackerSettings{}.seed;
  opts->tol_newton = 1e-10;
  opts->tol_degenerate = 1e-10;
  opts->max_path_failures = 0;
  opts->t_value = 0.0;
  opts->has_t_value = 0;
}

bbres_status bbres_problem_parse(const char* spec_text, bbres_problem** out,
                                 char** err_msg) {
  if (!out) return BBRES_ERR_INPUT;
  *out = nullptr;
  if (!spec_text) {
    set_error(err_msg, "spec text is NULL");
    return BBRES_ERR_INPUT;
  }
  try {
    auto* handle = new bbres_problem{bbres::parse_problem(spec_text)};
    *out = handle;
    return BBRES_OK;
  } catch (const bbres::SpecError& e) {
    set_error(err_msg, e.what());
    return BBRES_ERR_INPUT;
  } catch (const std::exception& e) {
    set_error(err_msg, e.what());
    return BBRES_ERR_INTERNAL;
  }
}

void bbres_problem_free(bbres_problem* problem) { delete problem; }

bbres_status bbres_run_chart(const bbres_problem* problem, int target_chart,
                             const bbres_options* opts, bbres_report** out,
                             char** err_msg) {
  if (!problem) {
    set_error(err_msg, "problem handle is NULL");
    return BBRES_ERR_INPUT;
  }
  return guarded(
      [&] {
        return finish(bbres::run_chart(problem->problem, target_chart,
                                       to_pipeline_options(opts)),
                      out, err_msg);
      },
      out, err_msg);
}

bbres_status bbres_run_residues(const bbres_problem* problem, const bbres_options* opts,
                                bbres_report** out, char** err_msg) {
  if (!problem) {
    set_error(err_msg, "problem handle is NULL");
    return BBRES_ERR_INPUT;
  }
  return guarded(
      [&] {
        std::optional<double> t;
        if (opts && opts->has_t_value) t = opts->t_value;
        return finish(
            bbres::run_residues(problem->problem, t, to_pipeline_options(opts)), out,
            err_msg);
      },
      out, err_msg);
}

bbres_status bbres_run_sweep(const bbres_problem* problem, const bbres_options* opts,
                             bbres_report** out, char** err_msg) {
  if (!problem) {
    set_error(err_msg, "problem handle is NULL");
    return BBRES_ERR_INPUT;
  }
  return guarded(
      [&] {
        return finish(bbres::run_sweep(problem->problem, to_pipeline_options(opts)), out,
                      err_msg);
      },
      out, err_msg);
}

bbres_status bbres_run_chern(int dim, const char* monomial_label, bbres_report** out,
                             char** err_msg) {
  if (!monomial_label) {
    set_error(err_msg, "monomial label is NULL");
    return BBRES_ERR_INPUT;
  }
  return guarded(
      [&] { return finish(bbres::run_chern(dim, monomial_label), out, err_msg); }, out,
      err_msg);
}

const char* bbres_report_json(const bbres_report* report) {
  return report ? report->json.c_str() : nullptr;
}

void bbres_report_free(bbres_report* report) { delete report; }

void bbres_string_free(char* text) { delete[] text; }

}  // extern "C"
