/*
 * sharpvar: variance bounds for the difference-in-means estimator in
 * completely randomized experiments.
 *
 * C interface. Objects are opaque handles created by sv_*_create / sv_*_load
 * functions and released with the matching sv_*_destroy (destroy accepts
 * NULL). Every fallible call returns an sv_status; on failure the out
 * parameter is left untouched and sv_last_error() describes the problem for
 * the calling thread.
 */
#ifndef SHARPVAR_SHARPVAR_H
#define SHARPVAR_SHARPVAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SHARPVAR_BUILDING)
#    define SHARPVAR_API __declspec(dllexport)
#  else
#    define SHARPVAR_API __declspec(dllimport)
#  endif
#else
#  define SHARPVAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sv_status {
  SV_OK = 0,
  SV_ERR_INVALID_INPUT = 1,     /* malformed argument or value */
  SV_ERR_INVALID_DESIGN = 2,    /* (N, n, m) violates the design constraints */
  SV_ERR_TOO_LARGE = 3,         /* enumeration or brute force beyond limits */
  SV_ERR_NUMERICAL_FAILURE = 4, /* an iteration failed to converge */
  SV_ERR_PARSE = 5,             /* input file rejected; message has the line */
  SV_ERR_IO = 6,
  SV_ERR_INTERNAL = 7
} sv_status;

typedef enum sv_format { SV_FORMAT_JSON = 0, SV_FORMAT_TSV = 1 } sv_format;

/* Population size sentinels for the `population` arguments below. */
#define SV_POPULATION_SAMPLE ((uint64_t)0)        /* N = n */
#define SV_POPULATION_INFINITE ((uint64_t)UINT64_MAX)

typedef struct sv_experiment sv_experiment;
typedef struct sv_table sv_table;
typedef struct sv_hypothesis sv_hypothesis;
typedef struct sv_report sv_report;

SHARPVAR_API const char* sv_version(void);
SHARPVAR_API const char* sv_status_name(sv_status status);
/* Message of the last failed call on this thread; "" if none. */
SHARPVAR_API const char* sv_last_error(void);

/* ---- observed experiments ------------------------------------------------ */

SHARPVAR_API sv_status sv_experiment_create(const double* treated, size_t treated_count,
                                            const double* control, size_t control_count,
                                            uint64_t population, sv_experiment** out);
/* CSV with header `arm,outcome`; arm is treat/control or 1/0. */
SHARPVAR_API sv_status sv_experiment_load_csv(const char* path, uint64_t population,
                                              sv_experiment** out);
/* population receives SV_POPULATION_INFINITE for an infinite population. */
SHARPVAR_API sv_status sv_experiment_design(const sv_experiment* experiment, uint64_t* population,
                                            size_t* sample_size, size_t* treated);
SHARPVAR_API void sv_experiment_destroy(sv_experiment* experiment);

/* Bits of sv_estimates.clamped. */
#define SV_CLAMP_V_A 0x1u
#define SV_CLAMP_V_B_PLUS 0x2u
#define SV_CLAMP_V_B_MINUS 0x4u
#define SV_CLAMP_V_HIGH 0x8u
#define SV_CLAMP_V_LOW 0x10u

typedef struct sv_estimates {
  double tau_hat;
  double s2_y1_hat;    /* Cochran estimate, treated */
  double s2_y0_hat;    /* Cochran estimate, control */
  double cov_high_hat; /* sharp covariance upper bound */
  double cov_low_hat;  /* sharp covariance lower bound */
  double v_a;          /* conventional */
  double v_b_plus;     /* Neyman upper */
  double v_b_minus;    /* Neyman lower */
  double v_high;       /* sharp upper */
  double v_low;        /* sharp lower */
  uint32_t clamped;
  int neyman_heuristic;    /* n < N */
  int infinite_population; /* v_high == v_low == independent-groups variance */
} sv_estimates;

SHARPVAR_API sv_status sv_estimate(const sv_experiment* experiment, sv_estimates* out);

typedef struct sv_interval {
  double center;
  double half_width;
  double lower;
  double upper;
  double level;
} sv_interval;

SHARPVAR_API sv_status sv_wald_interval(double tau_hat, double variance, double level,
                                        sv_interval* out);
SHARPVAR_API sv_status sv_inverse_normal_cdf(double p, double* out);

/* ---- potential-outcome tables and effect hypotheses ---------------------- */

SHARPVAR_API sv_status sv_table_create(const double* y1, const double* y0, size_t rows,
                                       sv_table** out);
/* CSV with header `y1,y0`. */
SHARPVAR_API sv_status sv_table_load_csv(const char* path, sv_table** out);
/* Rows: treated units in input order, then control units. Needs n = N. */
SHARPVAR_API sv_status sv_table_impute(const sv_experiment* experiment,
                                       const sv_hypothesis* hypothesis, sv_table** out);
SHARPVAR_API size_t sv_table_rows(const sv_table* table);
SHARPVAR_API sv_status sv_table_get(const sv_table* table, size_t row, double* y1, double* y0);
SHARPVAR_API void sv_table_destroy(sv_table* table);

SHARPVAR_API sv_status sv_hypothesis_sharp_null(sv_hypothesis** out);
SHARPVAR_API sv_status sv_hypothesis_constant(double tau, sv_hypothesis** out);
/* Sharp null plus edits. outcomes[i] is 1 for y1, 0 for y0. */
SHARPVAR_API sv_status sv_hypothesis_edits(const size_t* rows, const int* outcomes,
                                           const double* values, size_t count, sv_hypothesis** out);
/* CSV with header `index,outcome,value`; outcome is y1 or y0. */
SHARPVAR_API sv_status sv_hypothesis_edits_load_csv(const char* path, sv_hypothesis** out);
SHARPVAR_API void sv_hypothesis_destroy(sv_hypothesis* hypothesis);

/* ---- reports -------------------------------------------------------------- */

SHARPVAR_API sv_status sv_report_estimate(const sv_experiment* experiment, double level,
                                          sv_report** out);

typedef struct sv_simulation_options {
  uint64_t replicates;
  uint64_t seed;
  double level;
  unsigned threads; /* 0: SHARPVAR_THREADS or hardware concurrency */
  int exhaustive;   /* nonzero: enumerate every assignment, ignore replicates */
} sv_simulation_options;

SHARPVAR_API void sv_simulation_options_init(sv_simulation_options* options);
/* sample_size 0 means n = N. */
SHARPVAR_API sv_status sv_report_simulate(const sv_table* table, size_t sample_size, size_t treated,
                                          const sv_simulation_options* options, sv_report** out);

/* alpha0/beta0: control marginal, alpha1/beta1: treatment marginal. */
SHARPVAR_API sv_status sv_report_illustrate(double alpha0, double beta0, double alpha1,
                                            double beta1, size_t grid_size, sv_report** out);
SHARPVAR_API sv_status sv_report_table3(size_t grid_size, sv_report** out);

SHARPVAR_API sv_status sv_report_set_timestamp(sv_report* report, const char* timestamp);
/* The returned text is owned by the report and valid until the next render
 * or destroy on that report. */
SHARPVAR_API sv_status sv_report_render(sv_report* report, sv_format format, const char** text);
/* Numeric field by its TSV metric name, e.g. "estimates.v_high". */
SHARPVAR_API sv_status sv_report_get_number(const sv_report* report, const char* metric,
                                            double* out);
SHARPVAR_API void sv_report_destroy(sv_report* report);

#ifdef __cplusplus
}
#endif

#endif /* SHARPVAR_SHARPVAR_H */
