/* C interface to the treebalance library. */

#ifndef TREEBALANCE_H
#define TREEBALANCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest leaf count the construction entry points accept.
 */
#define TB_SIZE_CAP (1 << 20)

/**
 * Largest leaf count the exact counting entry points accept.
 */
#define TB_COUNT_CAP 4096

/**
 * The shape families `tb_shape_build` can construct.
 */
typedef enum TbBuilderKind {
  /**
   * Every internal node has a leaf child; unique Colless maximizer.
   */
  TB_BUILDER_KIND_CATERPILLAR = 0,
  /**
   * All leaves at equal depth; n must be a power of two.
   */
  TB_BUILDER_KIND_FULLY_BALANCED = 1,
  /**
   * Every internal node splits as evenly as possible.
   */
  TB_BUILDER_KIND_MAXIMALLY_BALANCED = 2,
  /**
   * Greedy-from-the-bottom construction; attains the minimal Colless
   * index.
   */
  TB_BUILDER_KIND_GREEDY_FROM_BOTTOM = 3,
} TbBuilderKind;

/**
 * Result of every API call.
 */
typedef enum TbStatus {
  /**
   * Success; out-parameters are filled in.
   */
  TB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TB_STATUS_NULL_ARG = 1,
  /**
   * The input string is not valid UTF-8.
   */
  TB_STATUS_UTF8 = 2,
  /**
   * The input string is not valid Newick; see the offset out-parameter.
   */
  TB_STATUS_PARSE = 3,
  /**
   * An argument is outside the function's domain.
   */
  TB_STATUS_INVALID = 4,
  /**
   * The request exceeds a resource cap.
   */
  TB_STATUS_LIMIT = 5,
  /**
   * An internal error; a bug in the library.
   */
  TB_STATUS_INTERNAL = 6,
} TbStatus;

/**
 * A rooted binary tree shape. Opaque; create via parse or build, release
 * via `tb_shape_free`.
 */
typedef struct TbShape TbShape;

/**
 * Balance statistics of one shape.
 */
typedef struct TbReport {
  /**
   * Leaf count.
   */
  uint64_t n;
  uint64_t colless;
  uint64_t sackin;
  uint64_t height;
  /**
   * Internal nodes whose children are both leaves.
   */
  uint64_t cherries;
  /**
   * Leaf count of the larger root subtree (0 for a single leaf).
   */
  uint64_t root_larger;
  /**
   * Leaf count of the smaller root subtree (0 for a single leaf).
   */
  uint64_t root_smaller;
} TbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a Newick string (labels and branch lengths are accepted and
 * ignored) into a new shape handle.
 *
 * On `TB_STATUS_PARSE` or `TB_STATUS_UTF8`, if `err_offset` is non-null it
 * receives the byte offset where the problem starts.
 *
 * # Safety
 * `text` must point to a NUL-terminated string; `out` must be valid for a
 * write.
 */
enum TbStatus tb_shape_parse_newick(const char *text, struct TbShape **out, uintptr_t *err_offset);

/**
 * Builds a named shape on n leaves.
 *
 * Returns `TB_STATUS_INVALID` for n = 0 (or a non-power-of-two n with
 * `TB_BUILDER_KIND_FULLY_BALANCED`) and `TB_STATUS_LIMIT` beyond
 * `TB_SIZE_CAP` leaves.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_shape_build(enum TbBuilderKind kind, uint64_t n, struct TbShape **out);

/**
 * Releases a shape handle. Null is a no-op.
 *
 * # Safety
 * `shape` must be a handle from this library, not yet freed.
 */
void tb_shape_free(struct TbShape *shape);

/**
 * Writes the shape as a NUL-terminated Newick string; release it with
 * `tb_string_free`.
 *
 * # Safety
 * `shape` must be a live handle; `out` must be valid for a write.
 */
enum TbStatus tb_shape_to_newick(const struct TbShape *shape, char **out);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library, not yet freed.
 */
void tb_string_free(char *s);

/**
 * Fills in the balance statistics of a shape.
 *
 * # Safety
 * `shape` must be a live handle; `out` must be valid for a write.
 */
enum TbStatus tb_shape_report(const struct TbShape *shape, struct TbReport *out);

/**
 * Writes the shape's leaf count.
 *
 * # Safety
 * `shape` must be a live handle; `out` must be valid for a write.
 */
enum TbStatus tb_shape_leaf_count(const struct TbShape *shape, uint64_t *out);

/**
 * Writes whether two shapes are isomorphic as rooted trees.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be valid for a write.
 */
enum TbStatus tb_shape_is_isomorphic(const struct TbShape *a, const struct TbShape *b, bool *out);

/**
 * Writes the minimal Colless index over all shapes on n leaves, by the
 * integer closed form. `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
 * for n above 2^62.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_min_colless(uint64_t n, uint64_t *out);

/**
 * Same value as `tb_min_colless`, evaluated by the bottom-up recursion
 * (tabulates every size up to n, so it is capped at `TB_SIZE_CAP`).
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_min_colless_recursive(uint64_t n, uint64_t *out);

/**
 * Writes the maximal Colless index on n leaves, (n-1)(n-2)/2.
 * `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT` once the product
 * overflows 64 bits (n above 2^32).
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_max_colless(uint64_t n, uint64_t *out);

/**
 * Writes the minimal Sackin index over all shapes on n leaves.
 * `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT` above `TB_SIZE_CAP`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_min_sackin(uint64_t n, uint64_t *out);

/**
 * Writes the exact number of shapes on n leaves attaining the minimal
 * Colless index, as a NUL-terminated decimal string (release with
 * `tb_string_free`). `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
 * above `TB_COUNT_CAP`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_count_colless_minimal(uint64_t n, char **out);

/**
 * Writes the exact number of shapes on n leaves attaining the minimal
 * Sackin index, as a NUL-terminated decimal string (release with
 * `tb_string_free`). `TB_STATUS_INVALID` for n = 0; `TB_STATUS_LIMIT`
 * above `TB_COUNT_CAP`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum TbStatus tb_count_sackin_minimal(uint64_t n, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TREEBALANCE_H */
