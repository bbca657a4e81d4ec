#ifndef OVERLAP_FORGE_H
#define OVERLAP_FORGE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum OfRoute {
  OF_ROUTE_DISJOINT = 0,
  OF_ROUTE_SHARED_VERTEX = 1,
  OF_ROUTE_TETRAHEDRON = 2,
} OfRoute;

typedef enum OfStatus {
  OF_STATUS_OK = 0,
  OF_STATUS_NULL_POINTER = 1,
  OF_STATUS_INVALID_UTF8 = 2,
  OF_STATUS_PARSE_ERROR = 3,
  OF_STATUS_VALIDATION_ERROR = 4,
  OF_STATUS_PIPELINE_ERROR = 5,
  OF_STATUS_OVERFLOW = 6,
  OF_STATUS_PANIC = 7,
} OfStatus;

typedef struct OfCertificate OfCertificate;

// A validated graph, with coordinates when the document carried them.
typedef struct OfGraph OfGraph;

// Pipeline knobs. Angles in degrees.
typedef struct OfPipelineOptions {
  double omega_target_deg;
  uint32_t max_iters;
  double eps;
  bool has_seed;
  uint64_t seed;
} OfPipelineOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// success. Valid until the next call on the same thread.
const char *of_last_error_message(void);

// Static, NUL-terminated crate version.
const char *of_version(void);

struct OfPipelineOptions of_pipeline_options_default(void);

// Parse a graph document from NUL-terminated JSON.
//
// # Safety
// `json` must be null or a valid NUL-terminated string; `out` must be null
// or point to writable storage for one handle.
enum OfStatus of_graph_from_json(const char *json, struct OfGraph **out);

// # Safety
// `g` must be null or a handle from [`of_graph_from_json`] not yet freed.
void of_graph_free(struct OfGraph *g);

// Vertex, edge and face counts. Any output pointer may be null.
//
// # Safety
// `g` must be a live graph handle; non-null outputs must be writable.
enum OfStatus of_graph_counts(const struct OfGraph *g,
                              size_t *vertices,
                              size_t *edges,
                              size_t *faces);

// Whether the document carried coordinates.
//
// # Safety
// `g` must be null or a live graph handle.
bool of_graph_has_solid(const struct OfGraph *g);

// Number of spanning trees; `Overflow` when it exceeds 64 bits.
//
// # Safety
// `g` must be a live graph handle and `out` writable.
enum OfStatus of_graph_count_spanning_trees(const struct OfGraph *g, uint64_t *out);

// Run the full construction. `options` may be null for defaults.
//
// # Safety
// `g` must be a live graph handle, `options` null or readable, `out`
// writable.
enum OfStatus of_pipeline_run(const struct OfGraph *g,
                              const struct OfPipelineOptions *options,
                              struct OfCertificate **out);

// # Safety
// `c` must be null or a handle from [`of_pipeline_run`] not yet freed.
void of_certificate_free(struct OfCertificate *c);

// # Safety
// `c` must be a live certificate handle and `out` writable.
enum OfStatus of_certificate_route(const struct OfCertificate *c, enum OfRoute *out);

// Area of the largest overlap witness.
//
// # Safety
// `c` must be a live certificate handle and `out` writable.
enum OfStatus of_certificate_overlap_area(const struct OfCertificate *c, double *out);

// Re-unfold the stored solid and report whether it still overlaps.
//
// # Safety
// `c` must be a live certificate handle and `out` writable.
enum OfStatus of_certificate_replay(const struct OfCertificate *c, bool *out);

// Serialized certificate; release with [`of_string_free`].
//
// # Safety
// `c` must be a live certificate handle and `out` writable.
enum OfStatus of_certificate_to_json(const struct OfCertificate *c, char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void of_string_free(char *s);

// Equal curvature at which the zig-zag banks stop overlapping. Degrees in
// and out.
//
// # Safety
// `out` must be writable.
enum OfStatus of_critical_omega(double alpha_deg, double len12, double len23, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OVERLAP_FORGE_H */
