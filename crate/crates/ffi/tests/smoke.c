/* Exercises the C header end to end; built and run by tests/c_smoke.rs. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "leo_snapshot.h"

#define CHECK(cond)                                                        \
    do {                                                                   \
        if (!(cond)) {                                                     \
            const char *msg = leo_last_error_message();                    \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
                    msg ? msg : "no message");                             \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    LeoConstellation *iridium = NULL;
    CHECK(leo_constellation_preset("iridium", &iridium) == LEO_STATUS_OK);

    LeoAnalyticSummary a;
    CHECK(leo_analytic_summary(iridium, 75.0, &a) == LEO_STATUS_OK);
    CHECK(a.snapshot_count == 22 && a.inter_plane_links == 44);

    LeoSequence *seq = NULL;
    CHECK(leo_sequence_build(iridium, 60.0, LEO_METHOD_REASSIGNMENT, LEO_TRIGGER_ENTER, 0.0, &seq) ==
          LEO_STATUS_OK);
    size_t n = 0;
    CHECK(leo_sequence_len(seq, &n) == LEO_STATUS_OK && n == 22);
    LeoSnapshotInfo info;
    CHECK(leo_sequence_snapshot(seq, 0, &info) == LEO_STATUS_OK && info.inter_plane_links == 34);
    CHECK(leo_sequence_snapshot(seq, 22, &info) == LEO_STATUS_OUT_OF_RANGE);
    CHECK(leo_last_error_message() != NULL);

    double u = 0.0;
    CHECK(leo_sequence_utilization(seq, &u) == LEO_STATUS_OK && fabs(u - 34.0 / 55.0) < 1e-9);

    char *json = NULL;
    CHECK(leo_sequence_to_json(seq, &json) == LEO_STATUS_OK && strstr(json, "\"reassignment\"") != NULL);
    leo_string_free(json);

    double lh = 0.0;
    CHECK(leo_horizontal_survival_latitude(45.0, 30.0, &lh) == LEO_STATUS_OK && lh > 0.0 && lh < 90.0);
    CHECK(leo_horizontal_survival_latitude(80.0, 30.0, &lh) == LEO_STATUS_INFEASIBLE);

    LeoConstellation *odd = NULL;
    CHECK(leo_constellation_new(5, 11, 86.4, 780.0, &odd) == LEO_STATUS_UNSUPPORTED && odd == NULL);
    CHECK(leo_sequence_len(NULL, &n) == LEO_STATUS_NULL_POINTER);

    leo_sequence_free(seq);
    leo_constellation_free(iridium);
    printf("ok %s\n", leo_version());
    return 0;
}
