#ifndef SHRINKTARGET_H
#define SHRINKTARGET_H

/* C interface to the shrinking-target toolkit. Handles are opaque; every
 * fallible call returns st_status and leaves a message for st_last_error()
 * on the calling thread. Strings returned by the library are owned by the
 * handle they came from and stay valid until it is freed. */

#include <stddef.h>

#if defined(_WIN32)
#define ST_API __declspec(dllexport)
#else
#define ST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct st_experiment st_experiment;
typedef struct st_report st_report;

typedef enum st_status {
  ST_OK = 0,
  ST_ERR_INVALID_ARGUMENT = 1,
  ST_ERR_VALIDATION = 2,
  ST_ERR_IO = 3,
  ST_ERR_COMPUTATION = 4,
  ST_ERR_INTERNAL = 5
} st_status;

typedef enum st_command {
  ST_CMD_RUN = 0, /* the config's own task list */
  ST_CMD_ANALYZE = 1,
  ST_CMD_BOUNDS = 2,
  ST_CMD_EXACT = 3,
  ST_CMD_ORACLE = 4,
  ST_CMD_WITNESS = 5
} st_command;

enum { ST_FORMAT_JSON = 1, ST_FORMAT_CSV = 2 };

ST_API const char* st_version(void);
ST_API const char* st_last_error(void);

ST_API st_status st_experiment_from_json(const char* text, st_experiment** out);
ST_API st_status st_experiment_from_file(const char* path, st_experiment** out);
ST_API void st_experiment_free(st_experiment* exp);
/* output.dir from the config ("" when absent). */
ST_API const char* st_experiment_output_dir(const st_experiment* exp);
/* Bitmask of ST_FORMAT_* from output.formats. */
ST_API int st_experiment_formats(const st_experiment* exp);
/* sweep.taus from the config; *n is 0 when absent. */
ST_API const double* st_experiment_sweep_taus(const st_experiment* exp, size_t* n);

ST_API st_status st_run(const st_experiment* exp, st_command cmd, st_report** out);
ST_API st_status st_run_sweep(const st_experiment* exp, const double* taus, size_t n,
                              st_report** out);

ST_API const char* st_report_json(const st_report* rep);
ST_API const char* st_report_csv(const st_report* rep);
/* 1 when every requested task produced a result. */
ST_API int st_report_all_tasks_ok(const st_report* rep);
ST_API void st_report_free(st_report* rep);

/* Entropy of the vertex shift with the given k x k 0/1 matrix (row-major). */
ST_API st_status st_sft_entropy(const int* matrix, size_t k, double* out);
/* Exact entropy and dimension for a hyperbolic toral automorphism with two
 * eigenvalue moduli, or an expanding torus map with equal moduli (d x d,
 * row-major). A value that is only bounded, not pinned (the boundary case's
 * dimension), comes back as NaN. */
ST_API st_status st_exact_torus(const long long* matrix, size_t d, double tau_lower,
                                double* h_out, double* dim_out);

#ifdef __cplusplus
}
#endif

#endif
