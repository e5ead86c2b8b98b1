#ifndef SYSTOLE_H
#define SYSTOLE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; the nonzero library codes match the command-line exit codes.
 */
typedef enum SystoleStatus {
  SYSTOLE_STATUS_OK = 0,
  SYSTOLE_STATUS_INVALID_CONFIG = 2,
  SYSTOLE_STATUS_INSUFFICIENT_CUTOFF = 3,
  SYSTOLE_STATUS_CAP_EXCEEDED = 4,
  SYSTOLE_STATUS_UNCERTIFIED_COMPARISON = 5,
  SYSTOLE_STATUS_ANCHOR_FAILURE = 6,
  SYSTOLE_STATUS_CACHE = 7,
  SYSTOLE_STATUS_IO = 8,
  SYSTOLE_STATUS_NULL_POINTER = 9,
  SYSTOLE_STATUS_OUT_OF_RANGE = 10,
  SYSTOLE_STATUS_PANIC = 11,
} SystoleStatus;

/**
 * Result of an expected-systole computation.
 */
typedef struct SystoleReport SystoleReport;

/**
 * Ordered length spectrum below a cutoff.
 */
typedef struct SystoleSpectrum SystoleSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Free with
 * `systole_string_free`.
 */
char *systole_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *systole_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void systole_string_free(char *s);

/**
 * Computes the head sum and tail bound for the decimal cutoff `d`.
 *
 * # Safety
 * `d` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SystoleStatus systole_expected_systole(const char *d,
                                            uint32_t precision_bits,
                                            struct SystoleReport **out);

/**
 * # Safety
 * `report` must be NULL or a handle from `systole_expected_systole`, not yet freed.
 */
void systole_report_free(struct SystoleReport *report);

/**
 * Head sum `S_c` rounded to a double; NaN for a NULL handle.
 *
 * # Safety
 * `report` must be NULL or a live report handle.
 */
double systole_report_s_c(const struct SystoleReport *report);

/**
 * Certified tail bound `S_e` rounded up to a double; NaN for a NULL handle.
 *
 * # Safety
 * `report` must be NULL or a live report handle.
 */
double systole_report_s_e(const struct SystoleReport *report);

/**
 * Number of distinct lengths in the head; 0 for a NULL handle.
 *
 * # Safety
 * `report` must be NULL or a live report handle.
 */
size_t systole_report_n_lengths(const struct SystoleReport *report);

/**
 * Cumulative rate of the head as a fraction.
 *
 * # Safety
 * `report` must be a live report handle; `num` and `den` valid pointers.
 */
enum SystoleStatus systole_report_cum_rate(const struct SystoleReport *report,
                                           int64_t *num,
                                           int64_t *den);

/**
 * Full report as JSON, or NULL for a NULL handle. Free with `systole_string_free`.
 *
 * # Safety
 * `report` must be NULL or a live report handle.
 */
char *systole_report_json(const struct SystoleReport *report);

/**
 * Enumerates and groups the lengths below the decimal cutoff `d`.
 *
 * # Safety
 * `d` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SystoleStatus systole_spectrum(const char *d,
                                    uint32_t precision_bits,
                                    struct SystoleSpectrum **out);

/**
 * # Safety
 * `spectrum` must be NULL or a handle from `systole_spectrum`, not yet freed.
 */
void systole_spectrum_free(struct SystoleSpectrum *spectrum);

/**
 * Number of distinct lengths; 0 for a NULL handle.
 *
 * # Safety
 * `spectrum` must be NULL or a live spectrum handle.
 */
size_t systole_spectrum_len(const struct SystoleSpectrum *spectrum);

/**
 * Length, rate fraction and class count of entry `i` (0-based).
 *
 * # Safety
 * `spectrum` must be a live spectrum handle; the output pointers valid.
 */
enum SystoleStatus systole_spectrum_entry(const struct SystoleSpectrum *spectrum,
                                          size_t i,
                                          double *length,
                                          int64_t *rate_num,
                                          int64_t *rate_den,
                                          size_t *n_classes);

/**
 * Trace of a word such as `"SSR1"`.
 *
 * # Safety
 * `word` must be a NUL-terminated string; `re` and `im` valid pointers.
 */
enum SystoleStatus systole_word_trace(const char *word, int64_t *re, int64_t *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYSTOLE_H */
