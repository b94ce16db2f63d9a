#ifndef DERANGE_DERANGE_H
#define DERANGE_DERANGE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. 2 and 3 double as the CLI exit codes for bad
 * parameters and exhausted term budgets. */
#define DRG_OK 0
#define DRG_ERR_INVALID 2
#define DRG_ERR_BUDGET 3
#define DRG_ERR_IO 4
#define DRG_ERR_INTERNAL 5

const char* drg_version(void);

/* Static description of a status code. */
const char* drg_strerror(int status);

/* Detail message for the most recent failure on this thread; empty
 * string if the last call succeeded. */
const char* drg_last_error(void);

/* Frees any char* produced by this library. */
void drg_string_free(char* s);

/* Exact primitives. Results are malloc'd decimal strings. */
int drg_factorial(uint64_t n, char** out);
int drg_double_factorial_odd(uint64_t n, char** out); /* (2n-1)!!, (-1)!! = 1 */
int drg_binomial(uint64_t n, int64_t k, char** out);  /* 0 when k out of range */

/* Counting families. method is "alternating", "euler", or "sign"
 * (NULL means alternating). */
int drg_derangements(uint64_t n, const char* method, char** out);
int drg_deranged_matchings(uint64_t n, char** out);
int drg_pm_tripartite(uint64_t m, char** out);
int drg_pm_tripartite_minus_m(uint64_t m, char** out);
int drg_bpm(uint32_t r, uint64_t m, char** out);
/* term_budget 0 means the default (1e8 terms); jobs 0 means 1. */
int drg_bpm_minus_m(uint32_t r, uint64_t m, uint64_t term_budget, uint32_t jobs,
                    char** out);
int drg_pm_multipartite(uint32_t r, uint32_t c, int minus_m, char** out);

/* Rendered dispatch over every family the CLI exposes. Families:
 * derangement, deranged-matching, tripartite, tripartite-minus-m, bpm,
 * bpm-minus-m, multipartite, multipartite-minus-m, custom. Pass -1 for
 * parameters the family does not take and NULL for graph_path unless
 * family is "custom". format is "plain", "json", or "csv". */
int drg_exact(const char* family, int64_t r, int64_t c, int64_t m, int64_t n,
              const char* graph_path, uint64_t term_budget, uint32_t jobs,
              const char* format, char** out);

/* Graph handles over the 64-vertex edge-list format. */
typedef struct drg_graph drg_graph;

int drg_graph_read(const char* path, drg_graph** out);
int drg_graph_complete_multipartite(uint32_t r, uint32_t c, drg_graph** out);
void drg_graph_free(drg_graph* g);
int drg_graph_order(const drg_graph* g, uint32_t* out);
/* Exact perfect matching count by enumeration. */
int drg_graph_pm_count(const drg_graph* g, char** out);
/* Treats the handle as the complement of the host graph and counts the
 * host's perfect matchings through the matching-sequence identity. */
int drg_graph_pm_via_complement(const drg_graph* complement, char** out);
/* {"mu": ["1", "8", ...]} */
int drg_graph_mu_json(const drg_graph* g, char** out);
/* Bound report for a d-regular graph; see the bounds in the docs. */
int drg_graph_mu_bounds_json(const drg_graph* g, uint32_t d, char** out);

/* e^{-r/(2r-2)} (finite r >= 2), or e^{-1/2} when r_to_infinity is
 * nonzero; rendered at `digits` significant digits. */
int drg_limit_target(uint32_t r, int r_to_infinity, uint32_t digits, char** out);

/* Convergence table for a regime over the inclusive index range
 * [lo, hi]. regime: hatcheck, kindergartner, r3, bpm, regular, class.
 * fixed carries r (bpm), d (regular), or c (class); pass -1 when the
 * regime takes no fixed parameter. */
int drg_ratio_table(const char* regime, int64_t fixed, int64_t lo, int64_t hi,
                    uint64_t term_budget, uint32_t jobs, const char* format,
                    uint32_t digits, char** out);

/* Single-record table for an explicit d-regular complement graph. */
int drg_ratio_custom_regular(const char* graph_path, const char* format,
                             uint32_t digits, char** out);

/* Truncated limit series: C(r,2) factors, `terms` terms per factor. */
int drg_series(uint32_t r, uint32_t terms, const char* format, uint32_t digits,
               char** out);

/* Runs the named verification suite ("fast" or "full"). The callback
 * receives one call per check; detail describes the parameter point.
 * failures receives the number of failed checks; the return value is
 * DRG_OK as long as the suite itself could run. fixtures_dir may be
 * NULL to skip fixture comparisons. */
typedef void (*drg_verify_callback)(void* user, const char* check, int pass,
                                    const char* detail);
int drg_verify(const char* suite, const char* fixtures_dir,
               drg_verify_callback cb, void* user, uint32_t* failures);

#ifdef __cplusplus
}
#endif

#endif
