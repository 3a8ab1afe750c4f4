#ifndef PADFA_H
#define PADFA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PadfaVariant {
  /**
   * Trie of the dictionary.
   */
  PADFA_VARIANT_TRIE = 0,
  /**
   * Minimal automaton of the dictionary.
   */
  PADFA_VARIANT_MIN = 1,
} PadfaVariant;

typedef enum PadfaBackend {
  PADFA_BACKEND_EDGE_LIST = 0,
  PADFA_BACKEND_BIASED = 1,
} PadfaBackend;

typedef enum PadfaCharMode {
  PADFA_CHAR_MODE_BITPACKED = 0,
  PADFA_CHAR_MODE_BYTE = 1,
} PadfaCharMode;

/**
 * Result code of every call.
 */
typedef enum PadfaStatus {
  PADFA_STATUS_OK = 0,
  PADFA_STATUS_NULL_POINTER = 1,
  /**
   * Duplicate strings, NUL bytes or an unsupported alphabet.
   */
  PADFA_STATUS_INVALID_INPUT = 2,
  PADFA_STATUS_BAD_MAGIC = 3,
  PADFA_STATUS_UNSUPPORTED_VERSION = 4,
  PADFA_STATUS_TRUNCATED = 5,
  PADFA_STATUS_CHECKSUM_MISMATCH = 6,
  PADFA_STATUS_CORRUPT = 7,
  /**
   * Membership query on a substring index or the reverse.
   */
  PADFA_STATUS_MODE_MISMATCH = 8,
  /**
   * A panic was caught at the boundary.
   */
  PADFA_STATUS_INTERNAL = 9,
} PadfaStatus;

typedef enum PadfaMode {
  PADFA_MODE_MEMBERSHIP = 0,
  PADFA_MODE_REACH = 1,
} PadfaMode;

/**
 * Opaque index handle.
 */
typedef struct PadfaIndex PadfaIndex;

typedef struct PadfaBuildOptions {
  enum PadfaVariant variant;
  enum PadfaBackend backend;
  enum PadfaCharMode char_mode;
} PadfaBuildOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct PadfaBuildOptions padfa_build_options_default(void);

/**
 * Builds a membership index from newline-separated strings. `opts` may be
 * null for the defaults.
 *
 * # Safety
 * `lines` must point to `len` readable bytes; `opts` must be null or valid;
 * `out` must be writable.
 */
enum PadfaStatus padfa_build_dictionary(const uint8_t *lines,
                                        size_t len,
                                        const struct PadfaBuildOptions *opts,
                                        struct PadfaIndex **out);

/**
 * Builds a substring index over `text`. The variant field of `opts` is
 * ignored.
 *
 * # Safety
 * As for [`padfa_build_dictionary`].
 */
enum PadfaStatus padfa_build_text(const uint8_t *text,
                                  size_t len,
                                  const struct PadfaBuildOptions *opts,
                                  struct PadfaIndex **out);

/**
 * Loads an index from its serialized bytes.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum PadfaStatus padfa_load(const uint8_t *data, size_t len, struct PadfaIndex **out);

/**
 * Serializes an index. Release the buffer with [`padfa_bytes_free`].
 *
 * # Safety
 * `index` must be a live handle; `out` and `out_len` must be writable.
 */
enum PadfaStatus padfa_save(const struct PadfaIndex *index, uint8_t **out, size_t *out_len);

/**
 * # Safety
 * `data` and `len` must come from one [`padfa_save`] call, freed once.
 */
void padfa_bytes_free(uint8_t *data, size_t len);

/**
 * Is `pattern` one of the indexed strings?
 *
 * # Safety
 * See [`padfa_reach`].
 */
enum PadfaStatus padfa_contains(const struct PadfaIndex *index,
                                const uint8_t *pattern,
                                size_t len,
                                bool *out);

/**
 * Is `pattern` a substring of the indexed text?
 *
 * # Safety
 * `index` must be a live handle, `pattern` must point to `len` readable
 * bytes (or be null with `len == 0`) and `out` must be writable.
 */
enum PadfaStatus padfa_reach(const struct PadfaIndex *index,
                             const uint8_t *pattern,
                             size_t len,
                             bool *out);

/**
 * # Safety
 * `index` must be null or a live handle.
 */
enum PadfaMode padfa_mode(const struct PadfaIndex *index);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or a live handle.
 */
uint64_t padfa_vertex_count(const struct PadfaIndex *index);

/**
 * Number of accepted strings, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or a live handle.
 */
uint64_t padfa_string_count(const struct PadfaIndex *index);

/**
 * Measured index size in bits, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or a live handle.
 */
uint64_t padfa_size_bits(const struct PadfaIndex *index);

/**
 * # Safety
 * `index` must be null or a handle not yet freed.
 */
void padfa_free(struct PadfaIndex *index);

/**
 * Static description of a status code.
 */
const char *padfa_status_message(enum PadfaStatus status);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *padfa_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADFA_H */
