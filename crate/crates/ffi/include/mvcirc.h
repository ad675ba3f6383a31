#ifndef MVCIRC_H
#define MVCIRC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MvStatus {
  MV_STATUS_OK = 0,
  MV_STATUS_NULL_POINTER = 1,
  MV_STATUS_INVALID_UTF8 = 2,
  MV_STATUS_PARSE = 3,
  MV_STATUS_NOT_FOUND = 4,
  MV_STATUS_PRECONDITION = 5,
  MV_STATUS_BUDGET = 6,
  MV_STATUS_INTERNAL = 7,
} MvStatus;

typedef enum MvProblem {
  MV_PROBLEM_CSAT = 0,
  MV_PROBLEM_MCSAT = 1,
  MV_PROBLEM_SCSAT = 2,
  MV_PROBLEM_CEQV = 3,
} MvProblem;

/**
 * Opaque algebra handle.
 */
typedef struct MvAlgebra MvAlgebra;

/**
 * Opaque circuit handle, bound to the algebra it was parsed against.
 */
typedef struct MvCircuit MvCircuit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. Valid until the next call into the library from this thread.
 */
const char *mv_last_error(void);

/**
 * Parses an algebra in the text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum MvStatus mv_algebra_parse(const char *text, struct MvAlgebra **out);

/**
 * Looks up a built-in fixture by name.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum MvStatus mv_algebra_zoo(const char *name, struct MvAlgebra **out);

/**
 * # Safety
 * `alg` must be null or a handle from this library not yet freed.
 */
void mv_algebra_free(struct MvAlgebra *alg);

/**
 * Universe size, or 0 for a null handle.
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
size_t mv_algebra_size(const struct MvAlgebra *alg);

/**
 * The classification report as JSON.
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum MvStatus mv_classify_json(const struct MvAlgebra *alg, char **out);

/**
 * Parses a circuit over `alg`.
 *
 * # Safety
 * `alg` must be a live handle, `text` nul-terminated, `out` valid.
 */
enum MvStatus mv_circuit_parse(const struct MvAlgebra *alg,
                               const char *text,
                               struct MvCircuit **out);

/**
 * # Safety
 * `c` must be null or a handle from this library not yet freed.
 */
void mv_circuit_free(struct MvCircuit *c);

/**
 * Decides `problem` for the circuit with the automatically chosen solver
 * and writes the result as JSON. A `budget` of 0 means the default.
 *
 * # Safety
 * `alg` and `circuit` must be live handles, `out` a valid pointer.
 */
enum MvStatus mv_solve(const struct MvAlgebra *alg,
                       const struct MvCircuit *circuit,
                       enum MvProblem problem,
                       uint64_t budget,
                       char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void mv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MVCIRC_H */
