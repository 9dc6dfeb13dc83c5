#ifndef MOTIVIC_COVER_H
#define MOTIVIC_COVER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum MCStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_UTF8 = 2,
  MC_STATUS_PARSE = 3,
  MC_STATUS_INVALID_CONFIGURATION = 4,
  MC_STATUS_INVALID_CENTER = 5,
  MC_STATUS_INVALID_GRAPH = 6,
  MC_STATUS_UNREPRESENTABLE = 7,
  MC_STATUS_EMPTY_SELECTION = 8,
  MC_STATUS_UNKNOWN_COMPONENT = 9,
  MC_STATUS_OVERFLOW = 10,
  MC_STATUS_INTERNAL = 11,
} MCStatus;

// Validated configuration of a divisor.
typedef struct MCConfig MCConfig;

// Resolution graph of a plane curve germ.
typedef struct MCGraph MCGraph;

// Element of the Grothendieck ring model.
typedef struct MCRing MCRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *mc_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void mc_string_free(char *s);

// Parses a ring element such as `[mu_2]*(L-1)^2 + 3`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum MCStatus mc_ring_parse(const char *text, struct MCRing **out);

// # Safety
// `a`, `b` must be live ring handles and `out` a valid pointer.
enum MCStatus mc_ring_add(const struct MCRing *a, const struct MCRing *b, struct MCRing **out);

// # Safety
// `a`, `b` must be live ring handles and `out` a valid pointer.
enum MCStatus mc_ring_mul(const struct MCRing *a, const struct MCRing *b, struct MCRing **out);

// # Safety
// `a` must be a live ring handle and `out` a valid pointer.
enum MCStatus mc_ring_pow(const struct MCRing *a, uint32_t e, struct MCRing **out);

// # Safety
// `a`, `b` must be live ring handles and `out` a valid pointer.
enum MCStatus mc_ring_equal(const struct MCRing *a, const struct MCRing *b, bool *out);

// Canonical text form; free with `mc_string_free`.
//
// # Safety
// `a` must be a live ring handle and `out` a valid pointer.
enum MCStatus mc_ring_render(const struct MCRing *a, char **out);

// Euler characteristic of the realization.
//
// # Safety
// `a` must be a live ring handle and `out` a valid pointer.
enum MCStatus mc_ring_euler(const struct MCRing *a, int64_t *out);

// Zeta function of the realization as `(1-t^n)^e ...`; free with
// `mc_string_free`.
//
// # Safety
// `a` must be a live ring handle and `out` a valid pointer.
enum MCStatus mc_ring_zeta(const struct MCRing *a, char **out);

// # Safety
// `a` must be NULL or a handle from this library that is not yet freed.
void mc_ring_free(struct MCRing *a);

// Parses and validates a configuration.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum MCStatus mc_config_from_json(const char *json, struct MCConfig **out);

// Validates a configuration document without keeping it. On
// [`MCStatus::InvalidConfiguration`] the diagnostics are in
// `mc_last_error_message`.
//
// # Safety
// `json` must be a NUL-terminated string.
enum MCStatus mc_config_validate(const char *json);

// # Safety
// `c` must be a live configuration handle and `out` a valid pointer.
enum MCStatus mc_config_to_json(const struct MCConfig *c, char **out);

// # Safety
// `c` must be NULL or a handle from this library that is not yet freed.
void mc_config_free(struct MCConfig *c);

// `S^A` for the selection `all`, `exceptional` or a comma-separated id
// list. A NULL selection means `all`.
//
// # Safety
// `c` must be a live configuration handle, `selection` NULL or a
// NUL-terminated string, and `out` a valid pointer.
enum MCStatus mc_motive(const struct MCConfig *c, const char *selection, struct MCRing **out);

// Blows up along the center given as JSON. `exceptional_id` receives the
// name of the new component and may be NULL.
//
// # Safety
// `c` must be a live configuration handle, `center_json` a NUL-terminated
// string, `out` a valid pointer and `exceptional_id` NULL or valid.
enum MCStatus mc_blowup(const struct MCConfig *c,
                        const char *center_json,
                        struct MCConfig **out,
                        char **exceptional_id);

// Compares `S^A` before and after the blow-up. `passed` receives the
// verdict; `report` receives a readable report and may be NULL.
//
// # Safety
// `c` must be a live configuration handle, `center_json` a NUL-terminated
// string, `selection` NULL or a NUL-terminated string, `passed` a valid
// pointer and `report` NULL or valid.
enum MCStatus mc_check_invariance(const struct MCConfig *c,
                                  const char *center_json,
                                  const char *selection,
                                  bool *passed,
                                  char **report);

// Parses and validates a resolution graph.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum MCStatus mc_graph_from_json(const char *json, struct MCGraph **out);

// # Safety
// `g` must be NULL or a handle from this library that is not yet freed.
void mc_graph_free(struct MCGraph *g);

// Motivic Milnor fiber over the selection (NULL means `exceptional`).
// Fails with [`MCStatus::Unrepresentable`] when a selected vertex has a
// cover of positive genus.
//
// # Safety
// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
// string, and `out` a valid pointer.
enum MCStatus mc_milnor_fiber(const struct MCGraph *g, const char *selection, struct MCRing **out);

// Euler characteristic of the Milnor fiber.
//
// # Safety
// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
// string, and `out` a valid pointer.
enum MCStatus mc_milnor_euler(const struct MCGraph *g, const char *selection, int64_t *out);

// Monodromy zeta function from the graph; free with `mc_string_free`.
//
// # Safety
// `g` must be a live graph handle, `selection` NULL or a NUL-terminated
// string, and `out` a valid pointer.
enum MCStatus mc_acampo_zeta(const struct MCGraph *g, const char *selection, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOTIVIC_COVER_H */
