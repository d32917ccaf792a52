/* Minimal C consumer of the pathprod API.
 *
 * Build (from the repository root):
 *   cargo build -p pathprod-ffi
 *   cc crates/pathprod-ffi/examples/demo.c \
 *      -Icrates/pathprod-ffi/include \
 *      target/debug/libpathprod_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>

#include "pathprod.h"

int main(void) {
  printf("pathprod %s\n", pathprod_version());

  PathprodCatalog *catalog = pathprod_catalog_builtin(16);
  if (!catalog) {
    fprintf(stderr, "catalog: %s\n", pathprod_last_error());
    return 2;
  }
  printf("builtin catalog: %zu entries\n", pathprod_catalog_entry_count(catalog));

  char *json = NULL;
  PathprodStatus status = pathprod_check(catalog, "su3", 16, &json);
  if (status == PATHPROD_STATUS_INVALID_INPUT ||
      status == PATHPROD_STATUS_INTERNAL_PANIC) {
    fprintf(stderr, "check: %s\n", pathprod_last_error());
    pathprod_catalog_free(catalog);
    return 2;
  }
  printf("check su3 -> status %d\n%s\n", (int)status, json);
  pathprod_string_free(json);

  status = pathprod_counterexample(catalog, 3, 12, &json);
  if (status == PATHPROD_STATUS_OK) {
    printf("counterexample n=3 -> all relations hold\n");
    pathprod_string_free(json);
  }

  pathprod_catalog_free(catalog);
  return status == PATHPROD_STATUS_OK ? 0 : 1;
}
