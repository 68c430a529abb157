#ifndef IGL_H
#define IGL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IglAlgorithm {
  IGL_ALGORITHM_BRUTE = 0,
  IGL_ALGORITHM_TREEWIDTH = 1,
  IGL_ALGORITHM_PLANAR = 2,
} IglAlgorithm;

typedef enum IglKernel {
  IGL_KERNEL_INVERSE = 0,
  IGL_KERNEL_IDENTITY = 1,
  IGL_KERNEL_SQUARE = 2,
  IGL_KERNEL_IW2 = 3,
} IglKernel;

typedef enum IglStatus {
  IGL_STATUS_OK = 0,
  IGL_STATUS_NULL = 1,
  IGL_STATUS_PARSE = 2,
  IGL_STATUS_INVARIANT = 3,
  IGL_STATUS_INVALID_ARG = 4,
  IGL_STATUS_PANIC = 5,
} IglStatus;

/**
 * Opaque graph handle.
 */
typedef struct IglGraph IglGraph;

typedef struct IglOptions {
  enum IglAlgorithm algorithm;
  enum IglKernel kernel;
  /**
   * Exact rational arithmetic; the result is then `p/q`.
   */
  bool exact;
  /**
   * Piece size for the planar pipeline; 0 picks the default.
   */
  size_t r;
} IglOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Empty graph on `n` vertices. Free with [`igl_graph_free`].
 */
struct IglGraph *igl_graph_new(size_t n);

/**
 * Parses edge-list text (with optional rotation lines) into `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IglStatus igl_graph_parse(const char *text, struct IglGraph **out);

/**
 * Adds edge `u–v` of length `num/den`; its id is the number of edges added
 * before it.
 *
 * # Safety
 * `g` must come from this library and not be freed.
 */
enum IglStatus igl_graph_add_edge(struct IglGraph *g, size_t u, size_t v, int64_t num, int64_t den);

/**
 * Sets the clockwise edge order around `v`. Needed by the planar pipeline.
 *
 * # Safety
 * `g` must come from this library; `edges` must point to `len` values.
 */
enum IglStatus igl_graph_set_rotation(struct IglGraph *g,
                                      size_t v,
                                      const size_t *edges,
                                      size_t len);

/**
 * Computes the distance sum and stores it in `*out` as `p/q` (exact) or a
 * 15-digit decimal. Free the string with [`igl_string_free`].
 *
 * # Safety
 * `g` and `opts` must be valid; `out` must be a valid pointer.
 */
enum IglStatus igl_compute(const struct IglGraph *g, const struct IglOptions *opts, char **out);

/**
 * # Safety
 * `s` must come from [`igl_compute`] or be null.
 */
void igl_string_free(char *s);

/**
 * # Safety
 * `g` must come from this library or be null.
 */
void igl_graph_free(struct IglGraph *g);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *igl_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IGL_H */
