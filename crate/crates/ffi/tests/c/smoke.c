#include <stdio.h>
#include <math.h>
#include "cantor_forge.h"

int main(void) {
    CfPointSet *f = NULL;
    if (cf_pointset_crossbar(3, 1, 2, 2, &f) != CF_STATUS_OK) return 10;
    size_t n = 0, d = 0;
    cf_pointset_shape(f, &n, &d);
    if (n != 56 || d != 2) return 11;

    CfPointSet *bad = NULL;
    if (cf_pointset_crossbar(4, 1, 2, 1, &bad) != CF_STATUS_INVALID_ARGUMENT) return 12;
    if (cf_last_error() == NULL) return 13;

    CfSpanner *g = NULL;
    if (cf_spanner_carpet(1, &g) != CF_STATUS_OK) return 14;
    double s = 0;
    if (cf_spanner_verify(g, 24142, 10000, &s) != CF_STATUS_OK) return 15;

    CfTspInstance *t = NULL;
    if (cf_tsp_reduce("{\"m\":2,\"sets\":[[0],[1]]}", 3, 1, &t) != CF_STATUS_OK) return 16;
    double alpha = 0, len = 0;
    cf_tsp_summary(t, NULL, NULL, &alpha);
    size_t cover[2] = {0, 1};
    if (cf_tsp_witness_length(t, cover, 2, &len) != CF_STATUS_OK) return 17;
    if (fabs(len - alpha) > 1e-6) return 18;

    cf_tsp_free(t);
    cf_spanner_free(g);
    cf_pointset_free(f);
    printf("ok %s\n", cf_version());
    return 0;
}
