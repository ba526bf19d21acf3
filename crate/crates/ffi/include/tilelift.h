#ifndef TILELIFT_H
#define TILELIFT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes.
typedef enum TlStatus {
  TL_STATUS_OK = 0,
  TL_STATUS_NULL_POINTER = 1,
  TL_STATUS_INVALID_UTF8 = 2,
  TL_STATUS_INVALID_INPUT = 3,
  TL_STATUS_RESOURCE_LIMIT = 4,
  TL_STATUS_PANIC = 5,
} TlStatus;

// Tiling verdicts written by [`tl_tile_region`].
typedef enum TlSolve {
  TL_SOLVE_SAT = 0,
  TL_SOLVE_UNSAT = 1,
  TL_SOLVE_LIMIT = 2,
} TlSolve;

typedef struct TlCompiled TlCompiled;

typedef struct TlSpec TlSpec;

typedef struct TlTileSet TlTileSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tl_version(void);

// Message of the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into the library on this thread.
const char *tl_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void tl_string_free(char *s);

// Parse a subshift description such as `{"kind":"builtin","name":"golden_mean"}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TlStatus tl_spec_from_json(const char *json, struct TlSpec **out);

// # Safety
// `spec` must be NULL or a handle from [`tl_spec_from_json`], not yet freed.
void tl_spec_free(struct TlSpec *spec);

// Legal words of length `n` at budget `budget`, as a JSON array of bit
// strings.
//
// # Safety
// `spec` must be a live handle; `out_json` must be writable.
enum TlStatus tl_oracle(const struct TlSpec *spec, size_t n, size_t budget, char **out_json);

// Compile a subshift against a schedule given as JSON (`{"C":1}` or
// `{"N":[...],"l":[...]}`) up to level `top`. A `flatten_bound` of zero
// skips the flat tile set.
//
// # Safety
// `spec` must be a live handle, `schedule_json` a NUL-terminated string
// and `out` writable.
enum TlStatus tl_compile(const struct TlSpec *spec,
                         const char *schedule_json,
                         size_t top,
                         uint64_t flatten_bound,
                         bool strict,
                         struct TlCompiled **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TlStatus tl_compiled_from_json(const char *json, struct TlCompiled **out);

// # Safety
// `cs` must be a live handle; `out_json` must be writable.
enum TlStatus tl_compiled_to_json(const struct TlCompiled *cs, char **out_json);

// The flat tile set of a compiled system, when one was built.
//
// # Safety
// `cs` must be a live handle; `out` must be writable.
enum TlStatus tl_compiled_flat_tiles(const struct TlCompiled *cs, struct TlTileSet **out);

// # Safety
// `cs` must be NULL or a live handle, not yet freed.
void tl_compiled_free(struct TlCompiled *cs);

// Completeness sweep at `width` and `budget`. The JSON report is written
// to `out_report` when it is not NULL.
//
// # Safety
// `cs` must be a live handle; `out_passed` writable; `out_report` NULL or
// writable.
enum TlStatus tl_verify_completeness(const struct TlCompiled *cs,
                                     size_t width,
                                     size_t budget,
                                     bool *out_passed,
                                     char **out_report);

// Soundness sweep over every ground word of `width` at patch height
// `height`.
//
// # Safety
// As for [`tl_verify_completeness`].
enum TlStatus tl_verify_soundness(const struct TlCompiled *cs,
                                  size_t width,
                                  size_t height,
                                  size_t budget,
                                  bool *out_passed,
                                  char **out_report);

// Whether some height-`height` patch projects onto the bit string `word`.
//
// # Safety
// `cs` must be a live handle, `word` a NUL-terminated string and
// `out_extendable` writable.
enum TlStatus tl_extendable(const struct TlCompiled *cs,
                            const char *word,
                            size_t height,
                            bool *out_extendable);

// Parse `{"colors":n,"tiles":[{"n":..,"e":..,"s":..,"w":..}]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TlStatus tl_tileset_from_json(const char *json, struct TlTileSet **out);

// Number of tiles, or zero for NULL.
//
// # Safety
// `set` must be NULL or a live handle.
size_t tl_tileset_len(const struct TlTileSet *set);

// # Safety
// `set` must be NULL or a live handle, not yet freed.
void tl_tileset_free(struct TlTileSet *set);

// Decide tileability of a `width` x `height` region. `boundary_json` may
// be NULL; `limit` of zero means no node limit. When `out_witness` is not
// NULL and a tiling exists, it receives the tiling as patch JSON
// (`{"w":..,"h":..,"cells":[..]}`), otherwise NULL.
//
// # Safety
// `set` must be a live handle, `boundary_json` NULL or NUL-terminated,
// `out_verdict` writable, `out_witness` NULL or writable.
enum TlStatus tl_tile_region(const struct TlTileSet *set,
                             size_t width,
                             size_t height,
                             const char *boundary_json,
                             uint64_t limit,
                             enum TlSolve *out_verdict,
                             char **out_witness);

// The region as DIMACS CNF text.
//
// # Safety
// As for [`tl_tile_region`]; `out_dimacs` must be writable.
enum TlStatus tl_export_cnf(const struct TlTileSet *set,
                            size_t width,
                            size_t height,
                            const char *boundary_json,
                            char **out_dimacs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TILELIFT_H */
