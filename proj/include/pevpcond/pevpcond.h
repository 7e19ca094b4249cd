/* C interface to the pevpcond library. */
#ifndef PEVPCOND_PEVPCOND_H
#define PEVPCOND_PEVPCOND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef PEVPCOND_BUILDING_LIBRARY
#    define PC_API __declspec(dllexport)
#  else
#    define PC_API __declspec(dllimport)
#  endif
#else
#  define PC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pc_status {
  PC_OK = 0,
  PC_INVALID_ARGUMENT,
  PC_PARSE_ERROR,
  PC_NON_CONVERGENCE,
  PC_EXACT_SINGULAR,
  PC_NO_NULL_VECTOR,
  PC_DEGENERATE_INSTANCE,
  PC_UNTRUSTED_EIGENPAIR,
  PC_SINGULAR_CURVE_POINT,
  PC_ORACLE_DIVERGENCE,
  PC_TOO_MANY_RESAMPLES,
  PC_IO_ERROR,
  PC_INTERNAL_ERROR
} pc_status;

typedef struct pc_problem pc_problem;
typedef struct pc_solution pc_solution;
typedef struct pc_verify_report pc_verify_report;

PC_API const char* pc_status_string(pc_status status);
/* Message of the last failing call on this thread; empty if none. */
PC_API const char* pc_last_error_message(void);
PC_API const char* pc_version(void);

/* Family names: dense_poly, lacunary_poly, gevp, pevp, masked_pevp,
 * quadric, plus the aliases dense, lacunary, masked and sparse_qep. */
typedef struct pc_descriptor {
  const char* family;
  int n;
  int degree;          /* N for polynomials, d for matrix polynomials */
  const int* indices;  /* lacunary exponents, may be NULL otherwise */
  size_t index_count;
  const char* masks;   /* comma separated mask names, one per block */
} pc_descriptor;

/* Sampled instance for (seed, index). */
PC_API pc_status pc_problem_sample(const pc_descriptor* desc, uint64_t seed, uint64_t index, pc_problem** out);
PC_API pc_status pc_problem_from_json(const char* text, pc_problem** out);
PC_API pc_status pc_problem_load(const char* path, pc_problem** out);
/* Release the returned string with pc_string_free. */
PC_API pc_status pc_problem_to_json(const pc_problem* problem, char** out);
PC_API void pc_string_free(char* s);
PC_API void pc_problem_destroy(pc_problem* problem);

typedef struct pc_theory {
  size_t m;
  int r;
  int s;
  int d_o;
  size_t solution_count;
  double theory;
  int has_printed_value;
  double printed_value;
  char label[64];
} pc_theory;

PC_API pc_status pc_theory_for_descriptor(const pc_descriptor* desc, pc_theory* out);
PC_API pc_status pc_problem_theory(const pc_problem* problem, pc_theory* out);

typedef struct pc_record {
  int coord_count; /* 2 on the projective line, 3 on the conic */
  double coord_re[3];
  double coord_im[3];
  int has_affine;  /* lambda = alpha / beta when |beta| > 1e-12 */
  double lambda_re;
  double lambda_im;
  double mu;       /* may be +inf */
  double mu_st_sq;
  double residual_right;
  double residual_left;
  int trusted;
} pc_record;

typedef struct pc_solution_summary {
  size_t count;
  size_t expected_count;
  int count_mismatch;
  double mean_mu_sq;
  double mu_max;
} pc_solution_summary;

PC_API pc_status pc_solve(const pc_problem* problem, pc_solution** out);
PC_API size_t pc_solution_size(const pc_solution* solution);
PC_API pc_status pc_solution_record(const pc_solution* solution, size_t i, pc_record* out);
PC_API pc_status pc_solution_summary_get(const pc_solution* solution, pc_solution_summary* out);
PC_API void pc_solution_destroy(pc_solution* solution);

typedef struct pc_experiment_config {
  size_t samples;
  uint64_t seed;
  size_t blocks;
  size_t max_resamples;
  size_t workers;
} pc_experiment_config;

typedef struct pc_experiment_result {
  double mom_estimate;
  double naive_mean;
  double naive_stderr;
  double theory;
  double rel_err;
  size_t resample_count;
  size_t count_mismatches;
  size_t samples;
  uint64_t seed;
  size_t blocks;
  double mean_mu_max_sq;
  double mean_log_mu_max;
} pc_experiment_result;

PC_API void pc_experiment_config_default(pc_experiment_config* config);
PC_API pc_status pc_run_experiment(const pc_descriptor* desc, const pc_experiment_config* config,
                                   pc_experiment_result* out);

/* suite: "lemma", "stochastic" or "oracle". */
PC_API pc_status pc_verify(const char* suite, pc_verify_report** out);
PC_API size_t pc_verify_size(const pc_verify_report* report);
/* The name pointer stays valid until the report is destroyed. */
PC_API pc_status pc_verify_check(const pc_verify_report* report, size_t i, const char** name, double* measured,
                                 double* expected, double* tolerance, int* passed);
PC_API void pc_verify_destroy(pc_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif
