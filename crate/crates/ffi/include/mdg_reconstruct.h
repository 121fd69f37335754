#ifndef MDG_RECONSTRUCT_H
#define MDG_RECONSTRUCT_H

/* Generated by cbindgen from the mdg-reconstruct-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Code family for [`mdg_code_generate`].
 */
typedef enum MdgFamily {
  MDG_FAMILY_HAMMING = 0,
  MDG_FAMILY_VASILEV = 1,
} MdgFamily;

/**
 * Result of every fallible call.
 */
typedef enum MdgStatus {
  MDG_STATUS_OK = 0,
  /**
   * A well-formed negative answer: inequivalent codes, invalid code.
   */
  MDG_STATUS_NEGATIVE = 1,
  /**
   * Search budget exhausted.
   */
  MDG_STATUS_UNDECIDED = 2,
  MDG_STATUS_INVALID_GRAPH = 3,
  MDG_STATUS_FORMAT = 4,
  MDG_STATUS_IO = 5,
  MDG_STATUS_INVALID_ARGUMENT = 6,
  MDG_STATUS_NULL_POINTER = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  MDG_STATUS_INTERNAL = 8,
} MdgStatus;

/**
 * Opaque code handle.
 */
typedef struct MdgCode MdgCode;

/**
 * Opaque graph handle.
 */
typedef struct MdgGraph MdgGraph;

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *mdg_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from a `*_format` call and not be freed twice.
 */
void mdg_string_free(char *s);

/**
 * Generates a Hamming or Vasil'ev code of length `2^m - 1`, or its
 * extension. `has_seed = false` gives the linear Vasil'ev code.
 *
 * # Safety
 * `out` must be writable.
 */
enum MdgStatus mdg_code_generate(enum MdgFamily family,
                                 uint32_t m,
                                 bool has_seed,
                                 uint64_t seed,
                                 bool extended,
                                 struct MdgCode **out);

/**
 * Parses a code file's contents.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum MdgStatus mdg_code_parse(const char *text, struct MdgCode **out);

/**
 * Serializes a code; free the result with [`mdg_string_free`].
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum MdgStatus mdg_code_format(const struct MdgCode *code, char **out);

/**
 * Number of words.
 *
 * # Safety
 * `code` must be a live handle or null (which yields 0).
 */
size_t mdg_code_size(const struct MdgCode *code);

/**
 * Word length.
 *
 * # Safety
 * `code` must be a live handle or null (which yields 0).
 */
size_t mdg_code_length(const struct MdgCode *code);

/**
 * Word `index` in insertion order.
 *
 * # Safety
 * `code` must be a live handle and `bits` writable.
 */
enum MdgStatus mdg_code_word(const struct MdgCode *code, size_t index, uint64_t *bits);

/**
 * Parity extension.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum MdgStatus mdg_code_extend(const struct MdgCode *code, struct MdgCode **out);

/**
 * `Ok` if the code is 1-perfect (`extended = false`) or extended 1-perfect,
 * `Negative` otherwise.
 *
 * # Safety
 * `code` must be a live handle.
 */
enum MdgStatus mdg_code_validate(const struct MdgCode *code, bool extended);

/**
 * # Safety
 * `code` must be null or a handle not freed before.
 */
void mdg_code_free(struct MdgCode *code);

/**
 * Minimum distance graph; vertex `i` is word `i`.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum MdgStatus mdg_graph_build(const struct MdgCode *code, struct MdgGraph **out);

/**
 * Relabels vertices by a seeded random permutation. If `perm` is not null
 * it receives `vcount` entries, `perm[old] = new`.
 *
 * # Safety
 * `graph` must be a live handle, `out` writable, `perm` null or writable
 * for `vcount` entries.
 */
enum MdgStatus mdg_graph_shuffle(const struct MdgGraph *graph,
                                 uint64_t seed,
                                 struct MdgGraph **out,
                                 size_t *perm);

/**
 * Parses DIMACS text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum MdgStatus mdg_graph_parse(const char *text, struct MdgGraph **out);

/**
 * DIMACS text; free the result with [`mdg_string_free`].
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum MdgStatus mdg_graph_format(const struct MdgGraph *graph, char **out);

/**
 * # Safety
 * `graph` must be a live handle or null (which yields 0).
 */
size_t mdg_graph_vertex_count(const struct MdgGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (which yields 0).
 */
size_t mdg_graph_edge_count(const struct MdgGraph *graph);

/**
 * False for out-of-range vertices or a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
bool mdg_graph_has_edge(const struct MdgGraph *graph, size_t u, size_t v);

/**
 * # Safety
 * `graph` must be null or a handle not freed before.
 */
void mdg_graph_free(struct MdgGraph *graph);

/**
 * Reconstructs a code from its MDG with `base` labelled zero; word `v` of
 * the result belongs to vertex `v`. `perfect` selects a 1-perfect input
 * graph instead of an extended one.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum MdgStatus mdg_reconstruct(const struct MdgGraph *graph,
                               size_t base,
                               bool perfect,
                               struct MdgCode **out);

/**
 * Decides equivalence: `Ok` (equivalent), `Negative` or `Undecided`.
 * When equivalent and the buffers are not null, `perm` receives the
 * 1-based coordinate images and `trans` the translation of the witness
 * `x -> trans + perm(x)` mapping `a` onto `b`. `budget = 0` uses the
 * default search limit.
 *
 * # Safety
 * `a`, `b` must be live handles; `perm` null or writable for `length`
 * entries; `trans` null or writable.
 */
enum MdgStatus mdg_equivalence(const struct MdgCode *a,
                               const struct MdgCode *b,
                               uint64_t budget,
                               size_t *perm,
                               uint64_t *trans);

#endif  /* MDG_RECONSTRUCT_H */
