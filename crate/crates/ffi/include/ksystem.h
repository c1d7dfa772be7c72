#ifndef KSYSTEM_H
#define KSYSTEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Passed as `k` to request `H = sum h_i 2^i`.
 */
#define KS_HK_ALL -1

/**
 * Status code of every fallible call.
 */
typedef enum KsStatus {
  KS_STATUS_OK = 0,
  KS_STATUS_NULL_POINTER = 1,
  KS_STATUS_INVALID_INPUT = 2,
  KS_STATUS_FINGERPRINT_MISMATCH = 3,
  KS_STATUS_K_OUT_OF_RANGE = 4,
  KS_STATUS_NOT_ACYCLIC = 5,
  KS_STATUS_NOT_K_SYSTEM = 6,
  KS_STATUS_INCONSISTENT_TRANSPORT = 7,
  KS_STATUS_NO_COORDINATES = 8,
  KS_STATUS_DEGENERATE_WEIGHTS = 9,
  KS_STATUS_BUDGET_EXCEEDED = 10,
  KS_STATUS_BUFFER_TOO_SMALL = 11,
  KS_STATUS_PANIC = 12,
} KsStatus;

typedef enum KsVerdict {
  KS_VERDICT_VERIFIED = 0,
  KS_VERDICT_REFUTED = 1,
} KsVerdict;

typedef struct KsGraph KsGraph;

typedef struct KsInstance KsInstance;

typedef struct KsOrientation KsOrientation;

typedef struct KsSetSystem KsSetSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *ks_last_error(void);

void ks_string_free(char *s);

/**
 * Parses a graph document (or an instance document's embedded graph).
 */
enum KsStatus ks_graph_from_json(const char *json, struct KsGraph **out);

enum KsStatus ks_graph_to_json(const struct KsGraph *g, char **out);

void ks_graph_free(struct KsGraph *g);

size_t ks_graph_dim(const struct KsGraph *g);

size_t ks_graph_vertex_count(const struct KsGraph *g);

size_t ks_graph_edge_count(const struct KsGraph *g);

enum KsStatus ks_graph_fingerprint(const struct KsGraph *g, char **out);

/**
 * Generates an instance from a family spec such as `cube:3`, `fig1` or
 * `product(cube:1,simplex:2)`.
 */
enum KsStatus ks_instance_generate(const char *spec, struct KsInstance **out);

enum KsStatus ks_instance_from_json(const char *json, struct KsInstance **out);

enum KsStatus ks_instance_to_json(const struct KsInstance *inst, char **out);

void ks_instance_free(struct KsInstance *inst);

/**
 * Copies the instance's graph into a new handle.
 */
enum KsStatus ks_instance_graph(const struct KsInstance *inst, struct KsGraph **out);

/**
 * Vertex sets of the k-faces, `0 <= k <= d - 1`.
 */
enum KsStatus ks_instance_faces(const struct KsInstance *inst, size_t k, struct KsSetSystem **out);

/**
 * Orientation from the linear function with weights `num[i] / den[i]`.
 * Pass `len == 0` for the default weights `1, 2, 4, ...`.
 */
enum KsStatus ks_instance_geometric_aof(const struct KsInstance *inst,
                                        const int64_t *num,
                                        const int64_t *den,
                                        size_t len,
                                        struct KsOrientation **out);

enum KsStatus ks_is_aof(const struct KsInstance *inst, const struct KsOrientation *o, bool *out);

/**
 * Parses an orientation document and checks it is bound to `g`.
 */
enum KsStatus ks_orientation_from_json(const struct KsGraph *g,
                                       const char *json,
                                       struct KsOrientation **out);

enum KsStatus ks_orientation_to_json(const struct KsOrientation *o, char **out);

void ks_orientation_free(struct KsOrientation *o);

/**
 * Writes `h_0 .. h_d` into `out` (capacity `cap`); `written` gets `d + 1`.
 */
enum KsStatus ks_indegree_histogram(const struct KsGraph *g,
                                    const struct KsOrientation *o,
                                    uint64_t *out,
                                    size_t cap,
                                    size_t *written);

/**
 * `H^k` of the orientation's h-vector; `k = KS_HK_ALL` gives `H`.
 */
enum KsStatus ks_hk_sum(const struct KsGraph *g,
                        const struct KsOrientation *o,
                        int32_t k,
                        uint64_t *out);

/**
 * Exhaustive minimum of `H^k` over acyclic orientations (`k = KS_HK_ALL`
 * for `H`), with a witness.
 */
enum KsStatus ks_minimize_hk(const struct KsGraph *g,
                             int32_t k,
                             uint64_t budget,
                             uint64_t *value,
                             struct KsOrientation **witness);

/**
 * Parses a set system document and checks it is bound to `g`.
 */
enum KsStatus ks_set_system_from_json(const struct KsGraph *g,
                                      const char *json,
                                      struct KsSetSystem **out);

enum KsStatus ks_set_system_to_json(const struct KsSetSystem *s, char **out);

size_t ks_set_system_len(const struct KsSetSystem *s);

void ks_set_system_free(struct KsSetSystem *s);

enum KsStatus ks_validate_k_system(const struct KsGraph *g, const struct KsSetSystem *s, bool *out);

enum KsStatus ks_verify_face_certificate(const struct KsGraph *g,
                                         const struct KsSetSystem *sets,
                                         const struct KsOrientation *witness,
                                         enum KsVerdict *out);

enum KsStatus ks_verify_aof_certificate(const struct KsGraph *g,
                                        const struct KsOrientation *candidate,
                                        const struct KsSetSystem *two_system,
                                        enum KsVerdict *out);

enum KsStatus ks_verify_larger_system(const struct KsGraph *g,
                                      const struct KsSetSystem *sets,
                                      const struct KsSetSystem *larger,
                                      enum KsVerdict *out);

enum KsStatus ks_facets_from_2faces(const struct KsGraph *g,
                                    const struct KsSetSystem *two_faces,
                                    struct KsSetSystem **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSYSTEM_H */
