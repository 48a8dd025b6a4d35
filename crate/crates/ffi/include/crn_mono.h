#ifndef CRN_MONO_H
#define CRN_MONO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible API call.
 */
typedef enum CrnStatus {
  CrnOk = 0,
  /**
   * a required pointer argument was null
   */
  CrnNullPointer = 1,
  /**
   * a string argument was not valid UTF-8
   */
  CrnInvalidUtf8 = 2,
  /**
   * the document text did not parse; see `crn_last_error`
   */
  CrnParseError = 3,
  /**
   * bad species names or analysis arguments
   */
  CrnUsageError = 4,
  /**
   * the numerical integration failed
   */
  CrnNumericError = 5,
  /**
   * an internal invariant was violated
   */
  CrnInternalError = 6,
} CrnStatus;

/**
 * Structural verdict for an input/output species pair.
 */
typedef enum CrnVerdict {
  CrnInconclusive = 0,
  CrnPositivelyMonotonic = 1,
  CrnNegativelyMonotonic = 2,
} CrnVerdict;

/**
 * Which graph `crn_graph_dot` renders.
 */
typedef enum CrnGraphKind {
  CrnGraphSr = 0,
  CrnGraphR = 1,
} CrnGraphKind;

/**
 * Opaque handle to a parsed network document.
 */
typedef struct CrnDocument CrnDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Detail message of the most recent failure on this thread, or null.
 * The pointer stays valid until the next API call on the same thread.
 */
const char *crn_last_error(void);

/**
 * Parse `.crn` text into a document handle stored in `*out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CrnStatus crn_parse(const char *text, struct CrnDocument **out);

/**
 * Release a document handle. Null is a no-op.
 *
 * # Safety
 * `doc` must be null or a pointer obtained from [`crn_parse`], not yet freed.
 */
void crn_document_free(struct CrnDocument *doc);

/**
 * Number of species in the parsed network.
 *
 * # Safety
 * `doc` must be a valid document handle.
 */
size_t crn_num_species(const struct CrnDocument *doc);

/**
 * Number of reactions in the parsed network.
 *
 * # Safety
 * `doc` must be a valid document handle.
 */
size_t crn_num_reactions(const struct CrnDocument *doc);

/**
 * Structural monotonicity verdict for the pair, written to `*out_verdict`.
 * `input`/`output` may be null to use the document's declarations.
 *
 * # Safety
 * `doc` and `out_verdict` must be valid; the names null or NUL-terminated.
 */
enum CrnStatus crn_analyze(const struct CrnDocument *doc,
                           const char *input,
                           const char *output,
                           enum CrnVerdict *out_verdict);

/**
 * Full analysis report as a JSON string in `*out_json`.
 *
 * # Safety
 * Same contract as [`crn_analyze`]; `out_json` must be valid.
 */
enum CrnStatus crn_analyze_json(const struct CrnDocument *doc,
                                const char *input,
                                const char *output,
                                char **out_json);

/**
 * DOT rendering of the species-reaction or reaction graph in `*out_dot`.
 * With `augmented` true the dummy input/output reactions are added first,
 * which requires a resolvable input/output pair.
 *
 * # Safety
 * `doc` and `out_dot` must be valid; the names null or NUL-terminated.
 */
enum CrnStatus crn_graph_dot(const struct CrnDocument *doc,
                             enum CrnGraphKind kind,
                             bool augmented,
                             const char *input,
                             const char *output,
                             char **out_dot);

/**
 * Sweep the input's initial concentration over `points` values spaced
 * linearly (or logarithmically) in `[from, to]`, simulate to `t_end`, and
 * return the steady-state CSV in `*out_csv`.
 *
 * # Safety
 * `doc` and `out_csv` must be valid; the names null or NUL-terminated.
 */
enum CrnStatus crn_sweep_csv(const struct CrnDocument *doc,
                             const char *input,
                             const char *output,
                             double from,
                             double to,
                             size_t points,
                             bool logarithmic,
                             double t_end,
                             char **out_csv);

/**
 * Release a string returned by this API. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string returned by this API, not yet freed.
 */
void crn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRN_MONO_H */
