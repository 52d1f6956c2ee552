#ifndef LEO_SNAPSHOT_H
#define LEO_SNAPSHOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LeoMethod {
  LEO_METHOD_REASSIGNMENT = 0,
  LEO_METHOD_FIXED = 1,
  LEO_METHOD_EQUAL_TIME = 2,
} LeoMethod;

typedef enum LeoStatus {
  LEO_STATUS_OK = 0,
  LEO_STATUS_NULL_POINTER = 1,
  LEO_STATUS_INVALID_ARGUMENT = 2,
  LEO_STATUS_UNSUPPORTED = 3,
  // No horizontal-link survival latitude exists for the geometry.
  LEO_STATUS_INFEASIBLE = 4,
  LEO_STATUS_OUT_OF_RANGE = 5,
  LEO_STATUS_IO = 6,
  LEO_STATUS_PARSE = 7,
  LEO_STATUS_INTERNAL = 8,
  LEO_STATUS_PANIC = 9,
} LeoStatus;

typedef enum LeoTrigger {
  LEO_TRIGGER_ENTER = 0,
  LEO_TRIGGER_EXIT = 1,
} LeoTrigger;

// Opaque constellation handle.
typedef struct LeoConstellation LeoConstellation;

// Opaque snapshot-sequence handle; keeps its own copy of the constellation.
typedef struct LeoSequence LeoSequence;

// Closed-form reassignment figures for one polar border.
typedef struct LeoAnalyticSummary {
  double polar_border_deg;
  double snapshot_duration_s;
  uint32_t snapshot_count;
  uint32_t inter_plane_links;
  uint32_t oblique_links;
  uint32_t horizontal_links;
  uint32_t nonpolar_rows;
} LeoAnalyticSummary;

typedef struct LeoSnapshotInfo {
  double start_s;
  double end_s;
  uint32_t intra_plane_links;
  uint32_t oblique_links;
  uint32_t horizontal_links;
  uint32_t inter_plane_links;
} LeoSnapshotInfo;

typedef struct LeoStation {
  double latitude_deg;
  double longitude_deg;
  double min_elevation_deg;
} LeoStation;

typedef struct LeoDelayStats {
  // NaN when no sample was reachable.
  double average_delay_s;
  uint32_t samples;
  double unreachable_fraction;
} LeoDelayStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *leo_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *leo_version(void);

// Bundled constellation by name ("iridium" or "teledesic").
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum LeoStatus leo_constellation_preset(const char *name, struct LeoConstellation **out);

// Constellation with planes spread over 180° and the period derived from
// the altitude.
//
// # Safety
// `out` must be writable.
enum LeoStatus leo_constellation_new(uint32_t planes,
                                     uint32_t sats_per_plane,
                                     double inclination_deg,
                                     double altitude_km,
                                     struct LeoConstellation **out);

// Constellation from the `[constellation]` section of a scenario file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum LeoStatus leo_constellation_from_scenario(const char *path, struct LeoConstellation **out);

// # Safety
// `c` must be a live constellation handle.
enum LeoStatus leo_constellation_set_ideal_polar(struct LeoConstellation *c, bool on);

// # Safety
// `c` must be a live constellation handle; `out` must be writable.
enum LeoStatus leo_constellation_period(const struct LeoConstellation *c, double *out);

// # Safety
// `c` must be NULL or a handle not yet freed.
void leo_constellation_free(struct LeoConstellation *c);

// Closed-form reassignment figures at polar border `polar_border_deg`.
//
// # Safety
// `c` must be a live constellation handle; `out` must be writable.
enum LeoStatus leo_analytic_summary(const struct LeoConstellation *c,
                                    double polar_border_deg,
                                    struct LeoAnalyticSummary *out);

// Highest latitude at which horizontal links stay in range.
//
// # Safety
// `out` must be writable.
enum LeoStatus leo_horizontal_survival_latitude(double theta_max_deg,
                                                double plane_spacing_deg,
                                                double *out);

// Snapshot sequence over one period. `equal_time_delta_s <= 0` uses the
// reassignment interval; it is ignored by the other methods.
//
// # Safety
// `c` must be a live constellation handle; `out` must be writable.
enum LeoStatus leo_sequence_build(const struct LeoConstellation *c,
                                  double polar_border_deg,
                                  enum LeoMethod method,
                                  enum LeoTrigger trigger,
                                  double equal_time_delta_s,
                                  struct LeoSequence **out);

// Number of snapshots S.
//
// # Safety
// `s` must be a live sequence handle; `out` must be writable.
enum LeoStatus leo_sequence_len(const struct LeoSequence *s, size_t *out);

// # Safety
// `s` must be a live sequence handle; `out` must be writable.
enum LeoStatus leo_sequence_snapshot(const struct LeoSequence *s,
                                     size_t index,
                                     struct LeoSnapshotInfo *out);

// Inter-plane link utilization ratio U.
//
// # Safety
// `s` must be a live sequence handle; `out` must be writable.
enum LeoStatus leo_sequence_utilization(const struct LeoSequence *s, double *out);

// Ground-to-ground delay experiment over the (cyclically repeated) sequence.
//
// # Safety
// `s` must be a live sequence handle; `source`, `destination` readable;
// `out` writable.
enum LeoStatus leo_sequence_delay(const struct LeoSequence *s,
                                  const struct LeoStation *source,
                                  const struct LeoStation *destination,
                                  double duration_s,
                                  double interval_s,
                                  struct LeoDelayStats *out);

// JSON topology document; free the result with [`leo_string_free`].
//
// # Safety
// `s` must be a live sequence handle; `out` must be writable.
enum LeoStatus leo_sequence_to_json(const struct LeoSequence *s, char **out);

// # Safety
// `s` must be NULL or a handle not yet freed.
void leo_sequence_free(struct LeoSequence *s);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void leo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEO_SNAPSHOT_H */
