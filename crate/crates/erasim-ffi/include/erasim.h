#ifndef ERASIM_H
#define ERASIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum ErasimStatus {
  /**
   * Success.
   */
  ErasimOk = 0,
  /**
   * A required pointer argument was NULL.
   */
  ErasimNullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ErasimInvalidUtf8 = 2,
  /**
   * The scenario text (or builtin name) did not parse or validate.
   */
  ErasimParseError = 3,
  /**
   * The scenario failed while running or auditing.
   */
  ErasimRunError = 4,
} ErasimStatus;

/**
 * Opaque scenario handle.
 */
typedef struct ErasimScenario ErasimScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL if the last
 * call succeeded. The pointer is valid until the next `erasim_` call on the
 * same thread; do not free it.
 */
const char *erasim_last_error(void);

/**
 * Default audit tolerance used when a negative tolerance is passed.
 */
double erasim_default_tolerance(void);

/**
 * Comma-separated names of the canned scenarios. Free with
 * `erasim_string_free`.
 */
char *erasim_builtin_names(void);

/**
 * Parses scenario text into a handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ErasimStatus erasim_scenario_from_text(const char *text, struct ErasimScenario **out);

/**
 * Loads a canned scenario by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ErasimStatus erasim_scenario_builtin(const char *name, struct ErasimScenario **out);

/**
 * Scenario name as a fresh string; free with `erasim_string_free`.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum ErasimStatus erasim_scenario_name(const struct ErasimScenario *scenario, char **out);

/**
 * Canonical scenario text (the parse/print fixed point); free with
 * `erasim_string_free`.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum ErasimStatus erasim_scenario_text(const struct ErasimScenario *scenario, char **out);

/**
 * Runs the scenario (audits included) and returns the result as one line of
 * JSON. Pass a negative `tolerance` to use the default. Cross-scenario
 * audits resolve against the canned scenarios. If `audits_pass` is non-NULL
 * it receives 1 when every audit passed, else 0.
 *
 * # Safety
 * `scenario` must be a live handle and `out_json` a valid pointer.
 */
enum ErasimStatus erasim_run_json(const struct ErasimScenario *scenario,
                                  double tolerance,
                                  char **out_json,
                                  int *audits_pass);

/**
 * Releases a scenario handle. NULL is a no-op.
 *
 * # Safety
 * `scenario` must have come from this library and not be freed twice.
 */
void erasim_scenario_free(struct ErasimScenario *scenario);

/**
 * Releases a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `text` must have come from this library and not be freed twice.
 */
void erasim_string_free(char *text);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ERASIM_H */
