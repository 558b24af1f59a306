#ifndef REEB_H
#define REEB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ReebStatus {
  REEB_STATUS_OK = 0,
  REEB_STATUS_NULL_POINTER = 1,
  REEB_STATUS_INVALID_UTF8 = 2,
  REEB_STATUS_PARSE_ERROR = 3,
  REEB_STATUS_INVALID_GRAPH = 4,
  REEB_STATUS_INVALID_PARAMS = 5,
  REEB_STATUS_INTERNAL = 6,
} ReebStatus;

/**
 * Opaque graph handle.
 */
typedef struct ReebGraphHandle ReebGraphHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph in the text or JSON format and validates it.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum ReebStatus reeb_graph_parse(const char *text, struct ReebGraphHandle **out);

/**
 * Releases a graph; null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void reeb_graph_free(struct ReebGraphHandle *g);

/**
 * Text form of a graph.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum ReebStatus reeb_graph_print(const struct ReebGraphHandle *g, char **out);

/**
 * Extended persistence diagram, one `<kind> <birth> <death>` line per point.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum ReebStatus reeb_diagram_compute(const struct ReebGraphHandle *g, char **out);

/**
 * Bottleneck distance between the diagrams of two graphs, as an exact string.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ReebStatus reeb_bottleneck(const struct ReebGraphHandle *a,
                                const struct ReebGraphHandle *b,
                                char **out);

/**
 * Merges the band `[lo, hi]`; writes the new graph and its distance certificate.
 *
 * # Safety
 * Pointers must be valid as described for the other calls.
 */
enum ReebStatus reeb_merge(const struct ReebGraphHandle *g,
                           const char *lo,
                           const char *hi,
                           struct ReebGraphHandle **out,
                           char **certificate);

/**
 * Removes every feature of span at most `alpha`.
 *
 * # Safety
 * Pointers must be valid as described for the other calls.
 */
enum ReebStatus reeb_simplify(const struct ReebGraphHandle *g,
                              const char *alpha,
                              struct ReebGraphHandle **out,
                              char **certificate);

/**
 * Writes 1 when the graphs are level-isomorphic, 0 otherwise.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ReebStatus reeb_is_level_isomorphic(const struct ReebGraphHandle *a,
                                         const struct ReebGraphHandle *b,
                                         int *out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void reeb_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *reeb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REEB_H */
