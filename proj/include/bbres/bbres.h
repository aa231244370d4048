/* bbres: Baum-Bott residues of polynomial vector fields on complex projective
 * space. C API over the C++ core: opaque handles, integer status codes,
 * reports delivered as JSON text (schema in docs/report-format.md).
 */
#ifndef BBRES_H
#define BBRES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bbres_status {
  BBRES_OK = 0,
  /* invalid input: spec parse/validation failure, bad arguments */
  BBRES_ERR_INPUT = 2,
  /* numerical failure budget exceeded (failed homotopy paths) */
  BBRES_ERR_NUMERIC = 3,
  /* internal error */
  BBRES_ERR_INTERNAL = 4
} bbres_status;

/* Parsed field specification (opaque). */
typedef struct bbres_problem bbres_problem;
/* Finished computation report (opaque); owns its JSON text. */
typedef struct bbres_report bbres_report;

typedef struct bbres_options {
  uint64_t seed;            /* homotopy gamma seed */
  double tol_newton;        /* residual tolerance for refined zeros */
  double tol_degenerate;    /* scale-aware |det J| degeneracy threshold */
  int max_path_failures;    /* budget before BBRES_ERR_NUMERIC */
  double t_value;           /* evaluation value of the parameter */
  int has_t_value;          /* whether t_value is meaningful */
} bbres_options;

/* Fills the documented defaults (seed 20240917, tolerances 1e-10, budget 0,
 * no t value). */
void bbres_options_init(bbres_options* opts);

/* Parses a spec file's text. On failure returns BBRES_ERR_INPUT and, when
 * err_msg is non-NULL, stores a message to free with bbres_string_free. */
bbres_status bbres_problem_parse(const char* spec_text, bbres_problem** out,
                                 char** err_msg);
void bbres_problem_free(bbres_problem* problem);

/* Pushforward of the field to another affine chart. */
bbres_status bbres_run_chart(const bbres_problem* problem, int target_chart,
                             const bbres_options* opts, bbres_report** out,
                             char** err_msg);

/* Singular set and residues at a fixed parameter value. */
bbres_status bbres_run_residues(const bbres_problem* problem, const bbres_options* opts,
                                bbres_report** out, char** err_msg);

/* Deformation sweep: paths, groups, residue series, limit estimates. */
bbres_status bbres_run_sweep(const bbres_problem* problem, const bbres_options* opts,
                             bbres_report** out, char** err_msg);

/* Chern number of P^dim for a monomial label such as "c1^3" or "c1*c2". */
bbres_status bbres_run_chern(int dim, const char* monomial_label, bbres_report** out,
                             char** err_msg);

/* JSON text of a report; owned by the report, valid until bbres_report_free. */
const char* bbres_report_json(const bbres_report* report);
void bbres_report_free(bbres_report* report);

void bbres_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BBRES_H */
