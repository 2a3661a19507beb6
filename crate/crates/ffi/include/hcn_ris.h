#ifndef HCN_RIS_H
#define HCN_RIS_H

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum HcnStatus {
  HCN_STATUS_OK = 0,
  HCN_STATUS_NULL_POINTER = 1,
  HCN_STATUS_INVALID_UTF8 = 2,
  HCN_STATUS_CONFIG_ERROR = 3,
  HCN_STATUS_TRAVERSAL_REFUSED = 4,
  HCN_STATUS_INVALID_ARGUMENT = 5,
  HCN_STATUS_INTERNAL_ERROR = 6,
  HCN_STATUS_PANIC = 7,
} HcnStatus;

typedef enum HcnAlgorithm {
  HCN_ALGORITHM_PA = 0,
  HCN_ALGORITHM_CGA = 1,
  HCN_ALGORITHM_RO = 2,
  HCN_ALGORITHM_RA = 3,
  HCN_ALGORITHM_CCGA = 4,
  HCN_ALGORITHM_OS = 5,
} HcnAlgorithm;

/**
 * Outcome of one optimizer run.
 */
typedef struct HcnReport HcnReport;

/**
 * A frozen network instance.
 */
typedef struct HcnScenario HcnScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *hcn_last_error(void);

/**
 * Builds a scenario from a JSON scenario config and a seed.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out` must be writable.
 */
enum HcnStatus hcn_scenario_from_json(const char *config_json,
                                      uint64_t seed,
                                      struct HcnScenario **out);

/**
 * Builds the reference ten-cell, 55-user layout.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcnStatus hcn_scenario_default(uint64_t seed, struct HcnScenario **out);

/**
 * Reloads a frozen scenario snapshot (as written by `hcn-ris single`).
 *
 * # Safety
 * `snapshot_json` must be a NUL-terminated string; `out` must be writable.
 */
enum HcnStatus hcn_scenario_from_snapshot(const char *snapshot_json, struct HcnScenario **out);

/**
 * # Safety
 * `scenario` must be NULL or a live handle.
 */
uintptr_t hcn_scenario_num_users(const struct HcnScenario *scenario);

/**
 * # Safety
 * `scenario` must be NULL or a live handle.
 */
uintptr_t hcn_scenario_num_base_stations(const struct HcnScenario *scenario);

/**
 * # Safety
 * `scenario` must be NULL or a handle not freed before.
 */
void hcn_scenario_free(struct HcnScenario *scenario);

/**
 * Runs one algorithm with default optimizer settings. `traversal_limit`
 * caps the association count of `HCN_ALGORITHM_OS` (0 keeps the default).
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
enum HcnStatus hcn_run(const struct HcnScenario *scenario,
                       enum HcnAlgorithm algorithm,
                       uint64_t seed,
                       uint64_t traversal_limit,
                       struct HcnReport **out);

/**
 * System sum rate in bit/s (NaN for NULL).
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double hcn_report_sum_rate(const struct HcnReport *report);

/**
 * Jain index over cell utilities (NaN for NULL).
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double hcn_report_fairness(const struct HcnReport *report);

/**
 * # Safety
 * `report` must be NULL or a live handle.
 */
uintptr_t hcn_report_num_users(const struct HcnReport *report);

/**
 * Copies per-user rates (bit/s) into `rates`, which holds `len` values;
 * `len` must equal the user count.
 *
 * # Safety
 * `report` must be a live handle and `rates` must point to `len` doubles.
 */
enum HcnStatus hcn_report_user_rates(const struct HcnReport *report, double *rates, uintptr_t len);

/**
 * Copies each user's serving cell into `cells` (-1 = unserved).
 *
 * # Safety
 * `report` must be a live handle and `cells` must point to `len` values.
 */
enum HcnStatus hcn_report_serving_cells(const struct HcnReport *report,
                                        int64_t *cells,
                                        uintptr_t len);

/**
 * Full outcome as JSON; release the string with [`hcn_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum HcnStatus hcn_report_to_json(const struct HcnReport *report, char **out);

/**
 * # Safety
 * `text` must be NULL or a string returned by this library.
 */
void hcn_string_free(char *text);

/**
 * # Safety
 * `report` must be NULL or a handle not freed before.
 */
void hcn_report_free(struct HcnReport *report);

/**
 * Directional antenna gain (dB) at `theta_deg` off boresight.
 */
double hcn_antenna_gain_db(double theta_deg, double half_power_beamwidth_deg);

/**
 * Blockage probability `1 - exp(-beta l)` of a link of `distance_m`.
 */
double hcn_outage_probability(double distance_m, double beta_per_m);

/**
 * Jain's fairness index of `len` values.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` must be writable.
 */
enum HcnStatus hcn_jain_fairness(const double *values, uintptr_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCN_RIS_H */
