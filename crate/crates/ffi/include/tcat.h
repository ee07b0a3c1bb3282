#ifndef TCAT_H
#define TCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  /**
   * success; for predicates, "true"
   */
  TcatOk = 0,
  /**
   * a validation failed or a predicate is "false"
   */
  TcatInvalid = 1,
  /**
   * malformed input: bad JSON, bad schema, or structural errors
   */
  TcatSchemaError = 2,
  /**
   * an enumeration cap was exceeded
   */
  TcatCapExceeded = 3,
  /**
   * a required pointer argument was null
   */
  TcatNullPointer = 4,
  /**
   * the operation is unavailable for the input's monad
   */
  TcatWrongMonad = 5,
  /**
   * an internal invariant failed
   */
  TcatInternal = 6,
} TcatStatus;

/**
 * Opaque handle to a validated-structure category.
 */
typedef struct TcatCategory TcatCategory;

/**
 * Opaque handle to a factorization result.
 */
typedef struct TcatFactorization TcatFactorization;

/**
 * Opaque handle to a functor between owned categories.
 */
typedef struct TcatFunctor TcatFunctor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Free a string returned by any `*_json` or `*_report` function.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void tcat_string_free(char *s);

/**
 * Parse a category from JSON.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
TcatStatus tcat_category_parse(const char *json, TcatCategory **out);

/**
 * # Safety
 * `cat` must be a handle from `tcat_category_parse`, freed at most once.
 */
void tcat_category_free(TcatCategory *cat);

/**
 * Serialize a category back to JSON. Returns NULL on null input.
 *
 * # Safety
 * `cat` must be a live handle.
 */
char *tcat_category_to_json(const TcatCategory *cat);

/**
 * Check the category axioms. Returns Ok when all pass, Invalid otherwise;
 * when `report_out` is non-null it receives the human-readable report.
 *
 * # Safety
 * `cat` must be a live handle; `report_out` may be null.
 */
TcatStatus tcat_category_validate(const TcatCategory *cat, bool audit, char **report_out);

/**
 * Parse a functor (with embedded categories) from JSON.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
TcatStatus tcat_functor_parse(const char *json, TcatFunctor **out);

/**
 * # Safety
 * `f` must be a handle from this library, freed at most once.
 */
void tcat_functor_free(TcatFunctor *f);

/**
 * # Safety
 * `f` must be a live handle.
 */
char *tcat_functor_to_json(const TcatFunctor *f);

/**
 * Check the functor conditions; same contract as category validation.
 *
 * # Safety
 * `f` must be a live handle; `report_out` may be null.
 */
TcatStatus tcat_functor_validate(const TcatFunctor *f, bool audit, char **report_out);

/**
 * Decide perfectness. `result_out` receives the verdict.
 *
 * # Safety
 * `f` must be a live handle; `result_out` must be a valid pointer.
 */
TcatStatus tcat_functor_is_perfect(const TcatFunctor *f, bool *result_out);

/**
 * Factor a functor into a unit followed by a perfect functor. With
 * `audit`, codomain well-definedness is re-checked over every lift.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
TcatStatus tcat_factorize(const TcatFunctor *f, bool audit, TcatFactorization **out);

/**
 * # Safety
 * `fr` must be a handle from `tcat_factorize`, freed at most once.
 */
void tcat_factorization_free(TcatFactorization *fr);

/**
 * The middle category as JSON.
 *
 * # Safety
 * `fr` must be a live handle.
 */
char *tcat_factorization_middle_json(const TcatFactorization *fr);

/**
 * The unit (initial part) as JSON.
 *
 * # Safety
 * `fr` must be a live handle.
 */
char *tcat_factorization_unit_json(const TcatFactorization *fr);

/**
 * The perfect part as JSON.
 *
 * # Safety
 * `fr` must be a live handle.
 */
char *tcat_factorization_perfect_json(const TcatFactorization *fr);

/**
 * The deterministic construction report.
 *
 * # Safety
 * `fr` must be a live handle.
 */
char *tcat_factorization_report(const TcatFactorization *fr);

/**
 * Check unique-diagonal orthogonality of `e` against `m`, enumerating at
 * most `cap` candidates per functor search.
 *
 * # Safety
 * `e`, `m` must be live handles and `result_out` a valid pointer.
 */
TcatStatus tcat_check_orthogonal(const TcatFunctor *e,
                                 const TcatFunctor *m,
                                 uint64_t cap,
                                 bool *result_out);

/**
 * Build the comma-category fibration of an identity-monad functor and
 * return its projection as functor JSON.
 *
 * # Safety
 * `f` must be a live handle and `json_out` a valid pointer.
 */
TcatStatus tcat_oracle_projection_json(const TcatFunctor *f, char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCAT_H */
