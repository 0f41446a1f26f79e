#ifndef QUASIBOSON_H
#define QUASIBOSON_H

/* C interface to the composite-quasiboson verification library.
 *
 * Every function returns a qb_status; output objects come back through
 * opaque handles that must be released with the matching _free call.
 * Strings returned through char** are heap-allocated and released with
 * qb_string_free. On any failure qb_last_error_message() describes the
 * most recent error on the calling thread.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qb_status {
    QB_OK = 0,
    QB_ERR_CONFIG = 1,   /* malformed or inconsistent run configuration */
    QB_ERR_DOMAIN = 2,   /* parameter outside its mathematical domain */
    QB_ERR_CAPACITY = 3, /* requested space or family exceeds capacity */
    QB_ERR_CONTRACT = 4, /* API misuse: wrong shapes, wrong regime, null handle */
    QB_ERR_RANGE = 5,    /* index or level outside the computed range */
    QB_ERR_IO = 6,       /* file could not be read or written */
    QB_ERR_INTERNAL = 7
} qb_status;

typedef struct qb_report qb_report;
typedef struct qb_phi_family qb_phi_family;

/* ---- verification runs ---- */

/* Run every applicable suite for the configuration in `config_json`
 * (same schema as the files under fixtures/). Overrides < 0 keep the
 * configured value. */
qb_status qb_verify_run_json(const char* config_json, int n_max_override,
                             double tol_override, qb_report** out);
qb_status qb_verify_run_file(const char* config_path, int n_max_override,
                             double tol_override, qb_report** out);

qb_status qb_report_passed(const qb_report* report, int* out);
qb_status qb_report_to_json(const qb_report* report, char** out);
/* newline-separated "suite: relation" lines for every failing residual;
 * the empty string when the report passed */
qb_status qb_report_failures(const qb_report* report, char** out);
void qb_report_free(qb_report* report);

/* ---- coefficient families ---- */

/* Block solution of the q = 1 constraint system on a d_a x d_b space,
 * `n_modes` matrices of block size m. seed < 0 requests the plain
 * (identity-dressed) solution. */
qb_status qb_phi_generate(int d_a, int d_b, int m, int n_modes, int64_t seed,
                          qb_phi_family** out);
qb_status qb_phi_to_json(const qb_phi_family* family, char** out);
qb_status qb_phi_from_json(const char* text, qb_phi_family** out);
void qb_phi_free(qb_phi_family* family);

/* ---- tables ---- */

/* CSV of the structure function phi(0..n_max) with level energies and
 * recurrence residuals. `variant` is one of "fermionic_quadratic",
 * "q_fermion_square", "parameterized", and the unused parameters of a
 * variant are ignored. */
qb_status qb_dsf_table_csv(const char* variant, double q, int m, double p1,
                           double p2, double p3, int n_max, char** out);

/* CSV of the expansion coefficient table P_n^{kl}(j), exact integers. */
qb_status qb_ptable_csv(int n_max, char** out);

/* ---- support ---- */

void qb_string_free(char* s);
const char* qb_last_error_message(void);
const char* qb_status_name(qb_status status);
const char* qb_api_version(void);

#ifdef __cplusplus
}
#endif

#endif
