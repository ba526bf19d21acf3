#include <stdio.h>
#include <string.h>
#include "tilelift.h"

#define CHECK(call)                                                   \
  do {                                                                \
    TlStatus st_ = (call);                                            \
    if (st_ != TL_STATUS_OK) {                                        \
      fprintf(stderr, "%s -> %d: %s\n", #call, st_, tl_last_error()); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  TlSpec *spec = NULL;
  CHECK(tl_spec_from_json("{\"kind\":\"builtin\",\"name\":\"golden_mean\"}", &spec));

  char *words = NULL;
  CHECK(tl_oracle(spec, 3, 1, &words));
  if (strcmp(words, "[\"000\",\"001\",\"010\",\"100\",\"101\"]") != 0) {
    fprintf(stderr, "oracle: %s\n", words);
    return 1;
  }
  tl_string_free(words);

  TlCompiled *cs = NULL;
  CHECK(tl_compile(spec, "{\"C\":1}", 2, 0, false, &cs));
  bool passed = false;
  CHECK(tl_verify_completeness(cs, 5, 1, &passed, NULL));
  if (!passed) return 1;

  bool ext = true;
  CHECK(tl_extendable(cs, "11", 8, &ext));
  if (ext) return 1;

  TlTileSet *set = NULL;
  if (tl_tileset_from_json("{\"colors\":1}", &set) != TL_STATUS_INVALID_INPUT) return 1;
  if (tl_last_error() == NULL) return 1;
  CHECK(tl_tileset_from_json("{\"colors\":1,\"tiles\":[{\"n\":0,\"e\":0,\"s\":0,\"w\":0}]}", &set));
  TlSolve verdict;
  char *witness = NULL;
  CHECK(tl_tile_region(set, 2, 2, NULL, 0, &verdict, &witness));
  if (verdict != TL_SOLVE_SAT || witness == NULL) return 1;
  tl_string_free(witness);

  tl_tileset_free(set);
  tl_compiled_free(cs);
  tl_spec_free(spec);
  printf("ok %s\n", tl_version());
  return 0;
}
