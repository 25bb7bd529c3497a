/* C API of the proxplast shared library.
 *
 * Opaque handles own the parsed model and the analysis results; every
 * function returns a status code and leaves a thread-local message readable
 * through pxp_last_error(). Collapse or non-convergence of an analysis is
 * not an error at this level: pxp_solve_path succeeds and the outcome is
 * queried from the result handle.
 */
#ifndef PROXPLAST_H
#define PROXPLAST_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pxp_status {
    PXP_OK = 0,
    PXP_ERR_ARGUMENT = 1,  /* null handle, bad option value, index out of range */
    PXP_ERR_IO = 2,        /* file cannot be read or written */
    PXP_ERR_PARSE = 3,     /* malformed document or schema violation */
    PXP_ERR_MODEL = 4,     /* physically invalid or inconsistent model data */
    PXP_ERR_DIMENSION = 5, /* state does not match the model */
    PXP_ERR_INTERNAL = 6
} pxp_status;

typedef enum pxp_mode {
    PXP_MODE_PLAIN = 0,
    PXP_MODE_ACCEL = 1,
    PXP_MODE_ACCEL_RESTART = 2
} pxp_mode;

typedef struct pxp_model_s pxp_model;
typedef struct pxp_result_s pxp_result;

typedef struct pxp_options {
    int mode;            /* pxp_mode; default PXP_MODE_ACCEL_RESTART */
    double tol;          /* <= 0 keeps the model-file / built-in default */
    long long max_iters; /* <= 0 keeps the default */
    double alpha_scale;  /* in (0, 1]; <= 0 keeps the default */
    int threads;         /* < 0 keeps the default; 0 = all hardware threads */
} pxp_options;

const char* pxp_version(void);
const char* pxp_status_name(pxp_status status);
/* Message of the most recent failure on this thread; empty if none. */
const char* pxp_last_error(void);

pxp_status pxp_model_load_file(const char* path, pxp_model** out);
pxp_status pxp_model_parse_json(const char* text, pxp_model** out);
void pxp_model_free(pxp_model* model);

int pxp_model_num_dofs(const pxp_model* model);
int pxp_model_num_points(const pxp_model* model);
int pxp_model_num_steps(const pxp_model* model);
const char* pxp_model_name(const pxp_model* model);

void pxp_options_init(pxp_options* options);

/* Run the load program of the model. Succeeds even when the path is
 * truncated by collapse or non-convergence; inspect the result. */
pxp_status pxp_solve_path(const pxp_model* model, const pxp_options* options, pxp_result** out);
void pxp_result_free(pxp_result* result);

int pxp_result_num_steps(const pxp_result* result);
int pxp_result_truncated(const pxp_result* result);
double pxp_result_failed_lambda(const pxp_result* result);
/* "", "collapse", "non_converged", or "kkt". */
const char* pxp_result_failure(const pxp_result* result);

double pxp_result_step_lambda(const pxp_result* result, int step);
long long pxp_result_step_iterations(const pxp_result* result, int step);
int pxp_result_step_converged(const pxp_result* result, int step);
/* Accumulated displacement after `step`; buf must hold num_dofs values. */
pxp_status pxp_result_total_displacement(const pxp_result* result, int step, double* buf,
                                         size_t len);

pxp_status pxp_result_write_path_csv(const pxp_result* result, const char* path);
pxp_status pxp_result_write_diagnostics(const pxp_result* result, const char* path);
/* Self-sufficient per-step field dump, accepted by pxp_verify_state_file. */
pxp_status pxp_result_write_state_dump(const pxp_result* result, int step, const char* path);

/* Check a dumped state against the model. `pass` receives 0/1; when
 * report_json is non-null it receives a malloc'd report to be released with
 * pxp_string_free. */
pxp_status pxp_verify_state_file(const pxp_model* model, const char* state_path, double tol,
                                 int* pass, char** report_json);
void pxp_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROXPLAST_H */
