/* Copyright 2026 The pism Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the pism library: approximate variational inference for
 * probabilistic integer submodular models. All functions return a status
 * code; on failure pism_last_error() describes the problem for the calling
 * thread. Handles are opaque and freed with their matching _free call.
 */

#ifndef PISM_PISM_H
#define PISM_PISM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pism_status {
  PISM_OK = 0,
  PISM_ERR_INVALID_ARGUMENT = 1,
  PISM_ERR_TOO_LARGE = 2, /* exact path past the enumeration cap */
  PISM_ERR_IO = 3,
  PISM_ERR_INTERNAL = 4
} pism_status;

typedef struct pism_objective pism_objective;
typedef struct pism_marginals pism_marginals;

const char* pism_version(void);
/* Thread-local message for the most recent failing call. */
const char* pism_last_error(void);

/* ---- objectives ------------------------------------------------------ */

/* Revenue objective over a dense row-major n*n weight matrix (diagonal
 * must be zero), levels {0,...,k-1}, 0 < q < 1. */
pism_status pism_objective_revenue_dense(int n, const double* weights,
                                         double q, int k,
                                         pism_objective** out);
/* Revenue objective from a whitespace edge-list file (symmetrized,
 * multi-edges summed). */
pism_status pism_objective_revenue_from_file(const char* path, double q,
                                             int k, pism_objective** out);
/* Monotone facility-location objective with synthetic seeded tables. */
pism_status pism_objective_facility_synthetic(int n, int m, int k,
                                              uint64_t seed,
                                              pism_objective** out);
/* Objective described by a JSON objective spec (the `objective` section of
 * an experiment config). */
pism_status pism_objective_from_spec(const char* json_spec,
                                     pism_objective** out);
void pism_objective_free(pism_objective* objective);

pism_status pism_objective_dimensions(const pism_objective* objective, int* n,
                                      int* k);
pism_status pism_objective_eval(const pism_objective* objective,
                                const int* coords, int n, double* value);
pism_status pism_objective_value_range(const pism_objective* objective,
                                       double* lo, double* hi);

/* Brute-force property checks; *pass is 1/0, and on failure `witness` (if
 * non-NULL) receives a human-readable description. */
pism_status pism_check_lattice_submodular(const pism_objective* objective,
                                          int* pass, char* witness,
                                          size_t witness_len);
pism_status pism_check_dr_submodular(const pism_objective* objective,
                                     int* pass, char* witness,
                                     size_t witness_len);

/* ---- marginals ------------------------------------------------------- */

pism_status pism_marginals_uniform(const pism_objective* objective,
                                   pism_marginals** out);
pism_status pism_marginals_read_csv(const char* path, pism_marginals** out);
pism_status pism_marginals_write_csv(const pism_marginals* marginals,
                                     const char* path);
/* block is the k-1 free probabilities of element i (level 0 is implied). */
pism_status pism_marginals_set_block(pism_marginals* marginals, int i,
                                     const double* block, int len);
pism_status pism_marginals_get_prob(const pism_marginals* marginals, int i,
                                    int level, double* prob);
void pism_marginals_free(pism_marginals* marginals);

/* ---- extension, ELBO, certificates ----------------------------------- */

pism_status pism_gme_exact(const pism_objective* objective,
                           const pism_marginals* marginals, double* value);
pism_status pism_gme_estimate(const pism_objective* objective,
                              const pism_marginals* marginals,
                              uint64_t samples, uint64_t seed, double* value,
                              double* stderr_out);
pism_status pism_elbo_exact(const pism_objective* objective,
                            const pism_marginals* marginals, double* value);
pism_status pism_log_partition(const pism_objective* objective, double* value);
pism_status pism_hoeffding_samples(double range_b, double eps, double delta,
                                   uint64_t* samples);
/* DR certificate of the extension at the given marginals. */
pism_status pism_dr_certificate(const pism_objective* objective,
                                const pism_marginals* marginals, int trials,
                                uint64_t seed, int monotone, int* pass,
                                char* witness, size_t witness_len);

/* ---- linear maximization oracles (debugging surface) ------------------ */

pism_status pism_lmo_simplex(const double* grad, int len, double* vertex);
pism_status pism_lmo_shrunken(const double* grad, const double* caps, int len,
                              double budget, double* point);

/* ---- experiments ------------------------------------------------------ */

/* Runs the experiment described by a JSON config file; writes the result
 * bundle to the configured output directory. */
pism_status pism_run_experiment(const char* config_path);
/* Summarizes result bundles as CSV text. The returned string is owned by
 * the caller; release it with pism_string_free. */
pism_status pism_compare_runs(const char* const* bundle_dirs, int count,
                              char** table);
void pism_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PISM_PISM_H */
