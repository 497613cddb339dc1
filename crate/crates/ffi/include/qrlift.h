#ifndef QRLIFT_H
#define QRLIFT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  QR_STATUS_INVALID_UTF8 = 2,
  QR_STATUS_INVALID_SPEC = 3,
  QR_STATUS_CAP_EXCEEDED = 4,
  QR_STATUS_OVERFLOW = 5,
  QR_STATUS_NOT_A_UNIT = 6,
  QR_STATUS_HYPOTHESIS = 7,
  QR_STATUS_PRECONDITION = 8,
  QR_STATUS_CHAIN_VIOLATION = 9,
  QR_STATUS_INVALID_ARGUMENT = 10,
  QR_STATUS_BUFFER_TOO_SMALL = 11,
  QR_STATUS_INTERNAL = 12,
  QR_STATUS_PANIC = 13,
} QrStatus;

/**
 * A parsed ring.
 */
typedef struct QrRing QrRing;

/**
 * Square roots of one element, rendered as literals.
 */
typedef struct QrSolutionSet QrSolutionSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `spec` into a ring. `cap` bounds enumeration; 0 selects the
 * library default.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer.
 */
enum QrStatus qrlift_ring_new(const char *spec, uint64_t cap, struct QrRing **out);

/**
 * # Safety
 * `ring` must come from [`qrlift_ring_new`] and not be used afterwards.
 */
void qrlift_ring_free(struct QrRing *ring);

/**
 * # Safety
 * `ring` must be live and `out` writable.
 */
enum QrStatus qrlift_ring_cardinality(const struct QrRing *ring, uint64_t *out);

/**
 * Writes the canonical spelling of the ring's spec.
 *
 * # Safety
 * `ring` must be live and `out` writable.
 */
enum QrStatus qrlift_ring_describe(const struct QrRing *ring, char **out);

/**
 * Whether `value` is both a unit and a square.
 *
 * # Safety
 * `ring` must be live, `value` NUL-terminated and `out` writable.
 */
enum QrStatus qrlift_is_qr_unit(const struct QrRing *ring, const char *value, bool *out);

/**
 * Every square root of `value`, ascending.
 *
 * # Safety
 * `ring` must be live, `value` NUL-terminated and `out` writable.
 */
enum QrStatus qrlift_sqrt_all(const struct QrRing *ring,
                              const char *value,
                              struct QrSolutionSet **out);

/**
 * # Safety
 * `set` must be null or live.
 */
size_t qrlift_solution_set_len(const struct QrSolutionSet *set);

/**
 * The `index`-th root, or null when out of range. The string is owned by
 * the set.
 *
 * # Safety
 * `set` must be null or live.
 */
const char *qrlift_solution_set_get(const struct QrSolutionSet *set, size_t index);

/**
 * # Safety
 * `set` must come from [`qrlift_sqrt_all`] and not be used afterwards.
 */
void qrlift_solution_set_free(struct QrSolutionSet *set);

/**
 * Square roots of the unit `a` modulo odd `n`, written ascending into
 * `roots[0..capacity]`. `count` always receives the number of roots; when it
 * exceeds `capacity` nothing is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `roots` must point to `capacity` writable values (or be null when
 * `capacity` is 0) and `count` must be writable.
 */
enum QrStatus qrlift_sqrt_zn(uint64_t n,
                             uint64_t a,
                             uint64_t *roots,
                             size_t capacity,
                             size_t *count);

/**
 * Census report as JSON. `chain` is null for the default chain, otherwise
 * `;`-separated ideals such as `"5; 25"`.
 *
 * # Safety
 * `ring` must be live, `chain` null or NUL-terminated and `out` writable.
 */
enum QrStatus qrlift_census_json(const struct QrRing *ring, const char *chain, char **out);

/**
 * `Ok` when the chain satisfies every chain condition, `ChainViolation`
 * with a diagnostic otherwise.
 *
 * # Safety
 * `ring` must be live and `chain` NUL-terminated.
 */
enum QrStatus qrlift_cnc_verify(const struct QrRing *ring, const char *chain);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void qrlift_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *qrlift_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRLIFT_H */
