#ifndef UHFBENCH_H
#define UHFBENCH_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UhfStatus {
  UHF_STATUS_OK = 0,
  UHF_STATUS_NULL_POINTER = 1,
  UHF_STATUS_INVALID_UTF8 = 2,
  UHF_STATUS_SCHEMA = 3,
  UHF_STATUS_INVALID_INPUT = 4,
  UHF_STATUS_IO = 5,
  UHF_STATUS_UNKNOWN_COMMAND = 6,
  UHF_STATUS_PANIC = 7,
} UhfStatus;

/**
 * A finished report, with its JSON rendering.
 */
typedef struct UhfReport UhfReport;

/**
 * A parsed and validated spec document.
 */
typedef struct UhfSpec UhfSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on this thread.
 */
const char *uhf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *uhf_version(void);

/**
 * Loads a spec from a file path or `builtin:NAME`.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum UhfStatus uhf_spec_load(const char *source, struct UhfSpec **out);

/**
 * Parses a spec from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum UhfStatus uhf_spec_parse(const char *json, struct UhfSpec **out);

/**
 * # Safety
 * `spec` must come from `uhf_spec_load`/`uhf_spec_parse` and not be freed twice.
 */
void uhf_spec_free(struct UhfSpec *spec);

/**
 * Runs `command` (`analyze`, `induce`, `tower`, `witness`, `bratteli`,
 * `kgroups` or `report`) with the spec's own parameters.
 *
 * # Safety
 * `spec` must be a live handle, `command` a NUL-terminated string, and
 * `out` writable.
 */
enum UhfStatus uhf_run(const struct UhfSpec *spec, const char *command, struct UhfReport **out);

/**
 * 0 pass, 2 certified failure, 3 unknown.
 *
 * # Safety
 * `report` must be a live handle or null (null gives 64).
 */
int32_t uhf_report_exit_code(const struct UhfReport *report);

/**
 * The report as JSON; owned by the handle.
 *
 * # Safety
 * `report` must be a live handle or null (null gives a null pointer).
 */
const char *uhf_report_json(const struct UhfReport *report);

/**
 * The plain-text rendering; owned by the handle.
 *
 * # Safety
 * `report` must be a live handle or null (null gives a null pointer).
 */
const char *uhf_report_text(const struct UhfReport *report);

/**
 * # Safety
 * `report` must come from `uhf_run` and not be freed twice.
 */
void uhf_report_free(struct UhfReport *report);

/**
 * Ranks of `K_0` and `K_1` of the crossed product by `Z^free_rank` under
 * the Rokhlin hypothesis. Fails with `InvalidInput` when the rank does not
 * fit in 64 bits.
 *
 * # Safety
 * `k0` and `k1` must be writable.
 */
enum UhfStatus uhf_k_ranks(uint32_t free_rank, uint64_t *k0, uint64_t *k1);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* UHFBENCH_H */
