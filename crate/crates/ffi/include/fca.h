/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef FCA_H
#define FCA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcaBottom {
  FCA_BOTTOM_AUTO = 0,
  FCA_BOTTOM_ALWAYS = 1,
  FCA_BOTTOM_NEVER = 2,
} FcaBottom;

typedef enum FcaEngine {
  FCA_ENGINE_HORIZONTAL = 0,
  FCA_ENGINE_VERTICAL = 1,
} FcaEngine;

typedef enum FcaFormat {
  // Guess from the file extension; only valid for `fca_context_load`.
  FCA_FORMAT_AUTO = 0,
  FCA_FORMAT_CXT = 1,
  FCA_FORMAT_FIMI = 2,
  FCA_FORMAT_CSV = 3,
} FcaFormat;

typedef enum FcaStatus {
  FCA_STATUS_OK = 0,
  FCA_STATUS_NULL_POINTER = 1,
  FCA_STATUS_INVALID_ARGUMENT = 2,
  FCA_STATUS_PARSE = 3,
  FCA_STATUS_IO = 4,
  FCA_STATUS_INDEX_OUT_OF_RANGE = 5,
  FCA_STATUS_BUDGET_EXHAUSTED = 6,
  FCA_STATUS_ALLOCATION = 7,
  FCA_STATUS_INVALID_UTF8 = 8,
  FCA_STATUS_PANIC = 9,
} FcaStatus;

// The concepts of a context with the run that produced them.
typedef struct FcaConcepts FcaConcepts;

// A formal context.
typedef struct FcaContext FcaContext;

typedef struct FcaOptions {
  enum FcaEngine engine;
  // 32 or 64.
  uint32_t width;
  // Horizontal engine only.
  bool empty_skip;
  enum FcaBottom include_bottom;
  // Horizontal engine local queue budget; 0 selects the default.
  uint64_t budget_bytes;
} FcaOptions;

typedef struct FcaStats {
  size_t concept_count;
  size_t engine_concepts;
  double elapsed_seconds;
  uint64_t extent_storage_bytes;
  uint64_t peak_queue_bytes;
  uint64_t total_queue_bytes;
  uint64_t canonicity_failures;
  size_t max_depth;
} FcaStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the latest failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *fca_last_error_message(void);

// Vertical engine, 64-bit words, bottom concept added when missing.
struct FcaOptions fca_options_default(void);

// Builds an `objects` x `attributes` context from row-major cells; any
// nonzero byte is an incidence. `cells` may be null when the matrix is empty.
//
// # Safety
// `cells` must point to `objects * attributes` readable bytes and `out` must
// be writable.
enum FcaStatus fca_context_from_matrix(const uint8_t *cells,
                                       size_t objects,
                                       size_t attributes,
                                       struct FcaContext **out);

// Parses context text in the given format.
//
// # Safety
// `text` must be a nul-terminated string and `out` writable.
enum FcaStatus fca_context_parse(const char *text, enum FcaFormat format, struct FcaContext **out);

// Reads a context file. `FCA_FORMAT_AUTO` guesses from the extension.
//
// # Safety
// `path` must be a nul-terminated string and `out` writable.
enum FcaStatus fca_context_load(const char *path, enum FcaFormat format, struct FcaContext **out);

// Serializes a context.
//
// # Safety
// `ctx` must come from this library and `out` be writable.
enum FcaStatus fca_context_write(const struct FcaContext *ctx, enum FcaFormat format, char **out);

// # Safety
// `ctx` must come from this library or be null.
size_t fca_context_object_count(const struct FcaContext *ctx);

// # Safety
// `ctx` must come from this library or be null.
size_t fca_context_attribute_count(const struct FcaContext *ctx);

// Creates a new context with objects and attributes swapped.
//
// # Safety
// `ctx` must come from this library and `out` be writable.
enum FcaStatus fca_context_transpose(const struct FcaContext *ctx, struct FcaContext **out);

// # Safety
// `ctx` must come from this library and not be used afterwards; null is ignored.
void fca_context_free(struct FcaContext *ctx);

// Lists every concept of `ctx`. `options` may be null for the defaults.
//
// # Safety
// `ctx` must come from this library, `options` be null or valid, and `out`
// be writable.
enum FcaStatus fca_enumerate(const struct FcaContext *ctx,
                             const struct FcaOptions *options,
                             struct FcaConcepts **out);

// # Safety
// `concepts` must come from this library or be null.
size_t fca_concepts_count(const struct FcaConcepts *concepts);

// Object indices of concept `index`, ascending. The array stays valid until
// `concepts` is freed.
//
// # Safety
// `concepts` must come from this library; `members` and `len` be writable.
enum FcaStatus fca_concepts_extent(const struct FcaConcepts *concepts,
                                   size_t index,
                                   const uint32_t **members,
                                   size_t *len);

// Attribute indices of concept `index`, ascending.
//
// # Safety
// As for [`fca_concepts_extent`].
enum FcaStatus fca_concepts_intent(const struct FcaConcepts *concepts,
                                   size_t index,
                                   const uint32_t **members,
                                   size_t *len);

// # Safety
// `concepts` must come from this library and `out` be writable.
enum FcaStatus fca_concepts_stats(const struct FcaConcepts *concepts, struct FcaStats *out);

// One concept per line as `objects ; attributes`, by name.
//
// # Safety
// `concepts` must come from this library and `out` be writable.
enum FcaStatus fca_concepts_to_text(const struct FcaConcepts *concepts, char **out);

// The spawn tree as a JSON document.
//
// # Safety
// `concepts` must come from this library, `source` be null or a
// nul-terminated string, and `out` be writable.
enum FcaStatus fca_concepts_to_json(const struct FcaConcepts *concepts,
                                    const char *source,
                                    bool with_extents,
                                    char **out);

// # Safety
// `concepts` must come from this library and not be used afterwards; null is ignored.
void fca_concepts_free(struct FcaConcepts *concepts);

// # Safety
// `text` must be a string returned by this library or null.
void fca_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FCA_H */
