/* C interface for the qentire library. Regenerate with cbindgen (see build.rs). */

#ifndef QENTIRE_H
#define QENTIRE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum QeStatus {
  // Success.
  QE_STATUS_OK = 0,
  // A verification suite ran to completion with failing instances
  // (the report JSON is still produced).
  QE_STATUS_VERIFY_FAILED = 1,
  // A parameter lies outside an operation's domain, or an input
  // string failed to parse.
  QE_STATUS_DOMAIN = 2,
  // A numerical guard tripped (convergence, stability, consistency);
  // retrying at higher precision usually resolves it.
  QE_STATUS_GUARD = 3,
  // Null pointer, invalid UTF-8, or a structurally invalid argument.
  QE_STATUS_USAGE = 64,
  // An internal invariant failed (a panic was caught).
  QE_STATUS_INTERNAL = 70,
} QeStatus;

// Opaque evaluation context carrying precision and tolerances.
typedef struct QeContext QeContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *qe_version(void);

// Create an evaluation context. Returns null (and sets the last error)
// when `precision_bits` is below 64.
struct QeContext *qe_context_new(uint32_t precision_bits);

// Destroy a context created by [`qe_context_new`]. Null is a no-op.
//
// # Safety
// `ctx` must be null or a pointer returned by `qe_context_new` that
// has not been freed yet.
void qe_context_free(struct QeContext *ctx);

// Release a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must be null or a string returned by this library that has not
// been freed yet.
void qe_string_free(char *s);

// Message describing the most recent failure on this thread, or null
// after a success. The pointer stays valid until the next call on the
// same thread; do not free it.
const char *qe_last_error(void);

// Evaluate a series at a point.
//
// `spec_json` is `{"family": "...", "params": {...}}`; `z_re`/`z_im`
// are decimal strings (`z_im` may be null for a real point). On `OK`,
// `*out_json` holds `{family, params, z, value, certificate}`.
//
// # Safety
// Pointer arguments must be null or valid per their descriptions;
// `out_json` must point to writable storage.
enum QeStatus qe_eval_json(const struct QeContext *ctx,
                           const char *spec_json,
                           const char *z_re,
                           const char *z_im,
                           char **out_json);

// Locate and certify zeros.
//
// Terminating specs report their full root set and ignore `count`;
// non-terminating specs require `count >= 1`. On `OK`, `*out_json`
// holds the zero set with per-zero residuals, the realness report, and
// (for non-terminating specs) the truncation certificate.
//
// # Safety
// Pointer arguments must be null or valid per their descriptions;
// `out_json` must point to writable storage.
enum QeStatus qe_zeros_json(const struct QeContext *ctx,
                            const char *spec_json,
                            size_t count,
                            char **out_json);

// Run a verification suite: `poly`, `func1`, `func2`, `identities`,
// `limits`, `order`, or `all`, on its default grid.
//
// On `OK` or `VERIFY_FAILED`, `*out_json` holds an array of
// verification reports; `VERIFY_FAILED` means at least one instance
// failed (details are inside the reports).
//
// # Safety
// Pointer arguments must be null or valid per their descriptions;
// `out_json` must point to writable storage.
enum QeStatus qe_verify_json(const struct QeContext *ctx, const char *suite, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QENTIRE_H */
