#ifndef SWIPERKIT_H
#define SWIPERKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Weight Restriction; thresholds `alpha_w`, `alpha_n`.
 */
#define SW_PROBLEM_WR 0

/**
 * Weight Qualification; thresholds `beta_w`, `beta_n`.
 */
#define SW_PROBLEM_WQ 1

/**
 * Weight Separation; thresholds `alpha`, `beta`.
 */
#define SW_PROBLEM_WS 2

/**
 * Quick checks with exact fallback; the result is a local minimum.
 */
#define SW_MODE_FULL 0

/**
 * Conservative quick check only.
 */
#define SW_MODE_LINEAR 1

/**
 * CSV rows `id,weight`.
 */
#define SW_FORMAT_CSV 0

/**
 * JSON array of `{"id", "weight"}` objects.
 */
#define SW_FORMAT_JSON 1

/**
 * Result code of every fallible call.
 */
typedef enum SwStatus {
  SW_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SW_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SW_INVALID_UTF8 = 2,
  /**
   * Unknown problem kind or solve mode constant.
   */
  SW_INVALID_ARGUMENT = 3,
  /**
   * Weight or ticket input could not be parsed or is inconsistent.
   */
  SW_PARSE_ERROR = 4,
  /**
   * Thresholds do not describe a valid problem.
   */
  SW_INVALID_PROBLEM = 5,
  /**
   * Ticket count does not match the number of parties.
   */
  SW_LENGTH_MISMATCH = 6,
  /**
   * A ticket bound or total does not fit in 64 bits.
   */
  SW_OVERFLOW = 7,
  /**
   * A file could not be read.
   */
  SW_IO_ERROR = 8,
  /**
   * The caller's buffer is too small.
   */
  SW_BUFFER_TOO_SMALL = 9,
  /**
   * Any other library error.
   */
  SW_INTERNAL = 10,
  /**
   * The library panicked; the call had no effect.
   */
  SW_PANIC = 11,
} SwStatus;

typedef struct SwDistribution SwDistribution;

typedef struct SwProblem SwProblem;

typedef struct SwReport SwReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failed call on this thread, or `""`. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sw_last_error(void);

/**
 * Library version as a static string.
 */
const char *sw_version(void);

/**
 * Parses a distribution from `text` in `format` (`SW_FORMAT_*`).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SwStatus sw_distribution_from_text(const char *text,
                                        uint32_t format,
                                        struct SwDistribution **out);

/**
 * Reads a distribution file; `.json` files are JSON, anything else CSV.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SwStatus sw_distribution_from_file(const char *path, struct SwDistribution **out);

/**
 * Number of parties.
 *
 * # Safety
 * `dist` must be a live handle or null (which yields 0).
 */
size_t sw_distribution_len(const struct SwDistribution *dist);

/**
 * # Safety
 * `dist` must come from this library and not be freed twice; null is ignored.
 */
void sw_distribution_free(struct SwDistribution *dist);

/**
 * Builds a problem of `kind` (`SW_PROBLEM_*`). The thresholds are
 * `(alpha_w, alpha_n)` for WR, `(beta_w, beta_n)` for WQ and
 * `(alpha, beta)` for WS.
 *
 * # Safety
 * `first` and `second` must be NUL-terminated strings and `out` writable.
 */
enum SwStatus sw_problem_new(uint32_t kind,
                             const char *first,
                             const char *second,
                             struct SwProblem **out);

/**
 * # Safety
 * `problem` must come from this library and not be freed twice; null is ignored.
 */
void sw_problem_free(struct SwProblem *problem);

/**
 * Closed-form ticket bound for `n` parties.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable.
 */
enum SwStatus sw_ticket_bound(const struct SwProblem *problem, size_t n, uint64_t *out);

/**
 * Searches the ticket family for a valid assignment (`SW_MODE_*`).
 *
 * # Safety
 * `problem` and `dist` must be live handles and `out` writable.
 */
enum SwStatus sw_solve(const struct SwProblem *problem,
                       const struct SwDistribution *dist,
                       uint32_t mode,
                       struct SwReport **out);

/**
 * Exact validity of `tickets[0..len]` against `dist`.
 *
 * # Safety
 * `problem` and `dist` must be live handles, `tickets` must point to `len`
 * values (it may be null when `len` is 0), and `valid` must be writable.
 */
enum SwStatus sw_validate(const struct SwProblem *problem,
                          const struct SwDistribution *dist,
                          const uint64_t *tickets,
                          size_t len,
                          bool *valid);

/**
 * Total tickets of the report; 0 for null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
uint64_t sw_report_total(const struct SwReport *report);

/**
 * Closed-form bound the search started from; 0 for null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
uint64_t sw_report_bound(const struct SwReport *report);

/**
 * True when the result is a certified local minimum (full mode).
 *
 * # Safety
 * `report` must be a live handle or null.
 */
bool sw_report_locally_minimal(const struct SwReport *report);

/**
 * Parties holding at least one ticket.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t sw_report_holders(const struct SwReport *report);

/**
 * Largest per-party ticket count.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
uint64_t sw_report_max_tickets(const struct SwReport *report);

/**
 * Number of per-party entries, equal to the distribution length.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t sw_report_len(const struct SwReport *report);

/**
 * Copies the per-party tickets, in party order, into `buf[0..len]`.
 *
 * # Safety
 * `report` must be a live handle and `buf` must have room for `len` values.
 */
enum SwStatus sw_report_tickets(const struct SwReport *report, uint64_t *buf, size_t len);

/**
 * # Safety
 * `report` must come from this library and not be freed twice; null is ignored.
 */
void sw_report_free(struct SwReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWIPERKIT_H */
