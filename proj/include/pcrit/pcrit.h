/*
 * C interface to the percentile-criterion robust MDP library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return a pcrit_status; on failure a message describing the last
 * error on the calling thread is available through pcrit_last_error().
 * Strings returned through char** outputs are heap allocated and must be
 * released with pcrit_string_free().
 */
#ifndef PCRIT_PCRIT_H
#define PCRIT_PCRIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PCRIT_BUILDING_LIBRARY)
#    define PCRIT_API __declspec(dllexport)
#  else
#    define PCRIT_API __declspec(dllimport)
#  endif
#else
#  define PCRIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcrit_status {
    PCRIT_OK = 0,
    PCRIT_INVALID_ARGUMENT = 1,
    PCRIT_INVALID_MODEL = 2,
    PCRIT_INVALID_SET = 3,
    PCRIT_SUPPORT_VIOLATION = 4,
    PCRIT_NON_CONVERGENCE = 5,
    PCRIT_IO_ERROR = 6,
    PCRIT_PARSE_ERROR = 7,
    PCRIT_UNSUPPORTED = 8,
    PCRIT_INTERNAL_ERROR = 99
} pcrit_status;

typedef struct pcrit_config pcrit_config;
typedef struct pcrit_mdp pcrit_mdp;
typedef struct pcrit_run pcrit_run;
typedef struct pcrit_table pcrit_table;

typedef struct pcrit_validation {
    size_t samples;
    double guarantee_fraction; /* share of fresh draws whose return reaches rho_hat */
    double coverage;           /* share of fresh draws inside every ball at once */
    double threshold;          /* 1 - delta - 0.02 */
    int passed;
} pcrit_validation;

/* ---- library ---------------------------------------------------------- */

PCRIT_API const char* pcrit_version(void);
/* Message of the most recent failure on this thread; empty when none. */
PCRIT_API const char* pcrit_last_error(void);
PCRIT_API const char* pcrit_status_name(pcrit_status status);
PCRIT_API void pcrit_string_free(char* text);
/* Newline separated list of built-in domain names. */
PCRIT_API pcrit_status pcrit_domain_names(char** out);

/* ---- configuration ---------------------------------------------------- */

PCRIT_API pcrit_status pcrit_config_create(pcrit_config** out);
PCRIT_API pcrit_status pcrit_config_clone(const pcrit_config* config, pcrit_config** out);
PCRIT_API void pcrit_config_destroy(pcrit_config* config);
/* Sets one field by key, e.g. ("delta", "0.05") or ("seeds", "1,2,3"). */
PCRIT_API pcrit_status pcrit_config_set(pcrit_config* config, const char* key, const char* value);
/* Reads a flat key = value file on top of the current values. */
PCRIT_API pcrit_status pcrit_config_load(pcrit_config* config, const char* path);
PCRIT_API pcrit_status pcrit_config_dump(const pcrit_config* config, char** out);
/* Newline separated list of every key accepted by pcrit_config_set. */
PCRIT_API pcrit_status pcrit_config_keys(char** out);
PCRIT_API pcrit_status pcrit_config_validate(const pcrit_config* config);

/* ---- MDPs ------------------------------------------------------------- */

/* size 0 and discount < 0 keep the domain defaults. The handle holds the true model. */
PCRIT_API pcrit_status pcrit_mdp_from_domain(const char* name, size_t size, double discount, pcrit_mdp** out);
PCRIT_API pcrit_status pcrit_mdp_load_csv(const char* path, pcrit_mdp** out);
PCRIT_API pcrit_status pcrit_mdp_save_csv(const pcrit_mdp* mdp, const char* path);
PCRIT_API void pcrit_mdp_destroy(pcrit_mdp* mdp);
PCRIT_API size_t pcrit_mdp_num_states(const pcrit_mdp* mdp);
PCRIT_API size_t pcrit_mdp_num_actions(const pcrit_mdp* mdp);
PCRIT_API double pcrit_mdp_discount(const pcrit_mdp* mdp);
/* Transition probability under the handle's model; NaN for out-of-range indices. */
PCRIT_API double pcrit_mdp_probability(const pcrit_mdp* mdp, size_t s, size_t a, size_t next);
PCRIT_API double pcrit_mdp_reward(const pcrit_mdp* mdp, size_t s, size_t a, size_t next);
/*
 * Optimal policy of the handle's model. values and policy may be NULL; when
 * given they must hold num_states entries. ret receives the expected return
 * under the initial distribution.
 */
PCRIT_API pcrit_status pcrit_mdp_solve_nominal(const pcrit_mdp* mdp, double tol, double* values, size_t* policy,
                                               double* ret);

/* ---- single runs ------------------------------------------------------ */

/* Builds the ambiguity set for one seed and solves the robust MDP. */
PCRIT_API pcrit_status pcrit_solve(const pcrit_config* config, uint64_t seed, pcrit_run** out);
PCRIT_API void pcrit_run_destroy(pcrit_run* run);
PCRIT_API size_t pcrit_run_num_states(const pcrit_run* run);
PCRIT_API size_t pcrit_run_num_actions(const pcrit_run* run);
PCRIT_API double pcrit_run_robust_return(const pcrit_run* run);
PCRIT_API double pcrit_run_nominal_return(const pcrit_run* run);
PCRIT_API double pcrit_run_normalized_loss(const pcrit_run* run);
PCRIT_API double pcrit_run_seconds(const pcrit_run* run);
PCRIT_API double pcrit_run_residual(const pcrit_run* run);
PCRIT_API size_t pcrit_run_iterations(const pcrit_run* run);
/* Copies num_states entries. */
PCRIT_API pcrit_status pcrit_run_values(const pcrit_run* run, double* values);
PCRIT_API pcrit_status pcrit_run_policy(const pcrit_run* run, size_t* policy);
PCRIT_API pcrit_status pcrit_run_budget(const pcrit_run* run, size_t s, size_t a, double* budget);
/* Copies num_states weights of the final ball; unreachable successors are +inf. */
PCRIT_API pcrit_status pcrit_run_weights(const pcrit_run* run, size_t s, size_t a, double* weights);
/* Short human readable description of the run. */
PCRIT_API pcrit_status pcrit_run_summary(const pcrit_run* run, char** out);
/* Writes every intermediate artifact of the run into dir. */
PCRIT_API pcrit_status pcrit_run_save(const pcrit_run* run, const char* dir);
/* Fresh posterior draws against the run's policy and set. Bayesian runs only. */
PCRIT_API pcrit_status pcrit_validate(const pcrit_run* run, pcrit_validation* out);

/* ---- benchmark grids -------------------------------------------------- */

PCRIT_API pcrit_status pcrit_bench(const pcrit_config* config, pcrit_table** out);
PCRIT_API void pcrit_table_destroy(pcrit_table* table);
PCRIT_API size_t pcrit_table_num_rows(const pcrit_table* table);
/* Cells that raised an error. */
PCRIT_API size_t pcrit_table_failures(const pcrit_table* table);
/* Validated cells whose guarantee fraction fell below 1 - delta - 0.02. */
PCRIT_API size_t pcrit_table_validation_failures(const pcrit_table* table);
PCRIT_API pcrit_status pcrit_table_csv(const pcrit_table* table, char** out);
PCRIT_API pcrit_status pcrit_table_summary_csv(const pcrit_table* table, char** out);
PCRIT_API pcrit_status pcrit_table_format(const pcrit_table* table, char** out);
/* Median normalized loss of one (domain, mode, method, delta) cell; NaN if absent. */
PCRIT_API double pcrit_table_median_loss(const pcrit_table* table, const char* domain, const char* mode,
                                         const char* method, double delta);

#ifdef __cplusplus
}
#endif

#endif
