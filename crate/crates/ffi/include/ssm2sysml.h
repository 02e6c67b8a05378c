#ifndef SSM2SYSML_H
#define SSM2SYSML_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum ssm2sysml_status {
  SSM2SYSML_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SSM2SYSML_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SSM2SYSML_STATUS_INVALID_UTF8 = 2,
  /**
   * The input text does not parse.
   */
  SSM2SYSML_STATUS_PARSE_ERROR = 3,
  /**
   * The SSM input parsed but failed validation. The last error holds the
   * diagnostics as a JSON array.
   */
  SSM2SYSML_STATUS_INVALID_MODEL = 4,
  /**
   * Mapping or emission failed.
   */
  SSM2SYSML_STATUS_MAPPING_ERROR = 5,
  /**
   * A named element or view does not exist.
   */
  SSM2SYSML_STATUS_NOT_FOUND = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  SSM2SYSML_STATUS_PANIC = 7,
} ssm2sysml_status;

/**
 * Opaque handle to a SysML package.
 */
typedef struct ssm2sysml_model ssm2sysml_model;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses, validates and maps SSM source text into a SysML model.
 *
 * # Safety
 * `source` and `file_name` must be null or NUL-terminated strings; `out`
 * must be null or point to writable storage for one handle pointer.
 */
enum ssm2sysml_status ssm2sysml_compile(const char *source,
                                        const char *file_name,
                                        struct ssm2sysml_model **out);

/**
 * Parses SysML source text into a model.
 *
 * # Safety
 * Same contract as [`ssm2sysml_compile`].
 */
enum ssm2sysml_status ssm2sysml_parse_sysml(const char *source,
                                            const char *file_name,
                                            struct ssm2sysml_model **out);

/**
 * Writes the canonical SysML text of `model` to `*out`.
 *
 * # Safety
 * `model` must be null or a live handle; `out` must be null or writable.
 */
enum ssm2sysml_status ssm2sysml_model_emit(const struct ssm2sysml_model *model, char **out);

/**
 * Runs every conformance rule and writes the diagnostics to `*out` as a
 * JSON array. `*error_count` receives the number of error-severity entries.
 *
 * # Safety
 * `model` must be null or a live handle; `out` and `error_count` must be
 * null or writable.
 */
enum ssm2sysml_status ssm2sysml_model_check_json(const struct ssm2sysml_model *model,
                                                 char **out,
                                                 size_t *error_count);

/**
 * Writes the element paths reachable from `from` to `*out` as a JSON
 * object `{"query", "elements"}`. Follows edges backward when `backward`
 * is nonzero.
 *
 * # Safety
 * `model` must be null or a live handle; `from` must be null or a
 * NUL-terminated string; `out` must be null or writable.
 */
enum ssm2sysml_status ssm2sysml_model_trace_json(const struct ssm2sysml_model *model,
                                                 const char *from,
                                                 int32_t backward,
                                                 char **out);

/**
 * Writes the elements selected by the named view to `*out` as JSON.
 *
 * # Safety
 * Same contract as [`ssm2sysml_model_trace_json`].
 */
enum ssm2sysml_status ssm2sysml_model_view_json(const struct ssm2sysml_model *model,
                                                const char *view,
                                                char **out);

/**
 * Releases a model handle. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void ssm2sysml_model_free(struct ssm2sysml_model *model);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ssm2sysml_string_free(char *s);

/**
 * The message for the last failed call on this thread, or null. Owned by
 * the library and valid until the next call on this thread.
 */
const char *ssm2sysml_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ssm2sysml_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSM2SYSML_H */
