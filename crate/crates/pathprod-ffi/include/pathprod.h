#ifndef PATHPROD_H
#define PATHPROD_H

/* Generated by cbindgen from pathprod-ffi; regenerate with `cargo build -p pathprod-ffi` instead of editing. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function in this API.
typedef enum PathprodStatus {
  // The call succeeded and every property check passed.
  PATHPROD_STATUS_OK = 0,
  // The call succeeded but a property check failed; inspect the JSON.
  PATHPROD_STATUS_CHECK_FAILED = 1,
  // The input was unusable; see `pathprod_last_error`.
  PATHPROD_STATUS_INVALID_INPUT = 2,
  // The engine panicked; see `pathprod_last_error` and report a bug.
  PATHPROD_STATUS_INTERNAL_PANIC = 3,
} PathprodStatus;

// Opaque handle to a loaded model catalog.
typedef struct PathprodCatalog PathprodCatalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The library version as a static NUL-terminated string; never freed.
const char *pathprod_version(void);

// The message of the last failure on this thread, as a NUL-terminated
// UTF-8 string owned by the library. Empty when the last call succeeded.
// The pointer stays valid until the next API call on the same thread.
const char *pathprod_last_error(void);

// Load the built-in catalog with the given degree window. Returns null
// on failure (see `pathprod_last_error`).
struct PathprodCatalog *pathprod_catalog_builtin(int64_t max_degree);

// Load a catalog from a JSON file with the given degree window. Returns
// null on failure (see `pathprod_last_error`).
//
// # Safety
// `path` must be a valid NUL-terminated string (or null, which fails
// cleanly).
struct PathprodCatalog *pathprod_catalog_open(const char *path, int64_t max_degree);

// Release a catalog handle. Null is ignored; a handle must not be used
// after this call.
//
// # Safety
// `catalog` must be null or a pointer returned by a catalog constructor
// of this library that has not been freed yet.
void pathprod_catalog_free(struct PathprodCatalog *catalog);

// Number of entries in the catalog; 0 for a null handle.
//
// # Safety
// `catalog` must be null or a live handle from this library.
size_t pathprod_catalog_entry_count(const struct PathprodCatalog *catalog);

// Run the validation suite for a named catalog entry, quantified up to
// `max_degree`, and store the report JSON in `*out_json`.
//
// # Safety
// `catalog` must be a live handle, `model` a valid NUL-terminated
// string, and `out_json` a writable pointer. The returned string must
// be released with `pathprod_string_free`.
enum PathprodStatus pathprod_check(const struct PathprodCatalog *catalog,
                                   const char *model,
                                   int64_t max_degree,
                                   char **out_json);

// Verify the SU(2) ⊂ SU(n) counterexample relations over the catalog's
// coefficient field and store the report JSON in `*out_json`.
//
// # Safety
// Same contract as `pathprod_check`.
enum PathprodStatus pathprod_counterexample(const struct PathprodCatalog *catalog,
                                            int64_t n,
                                            int64_t max_degree,
                                            char **out_json);

// Compare the subgroup and null-homotopic module structures on SU(n)
// over the catalog's coefficient field; the report JSON goes to
// `*out_json`.
//
// # Safety
// Same contract as `pathprod_check`.
enum PathprodStatus pathprod_distinguish(const struct PathprodCatalog *catalog,
                                         int64_t n,
                                         int64_t max_degree,
                                         char **out_json);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string pointer produced by this library that
// has not been freed yet.
void pathprod_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHPROD_H */
