#include <math.h>
#include <stdio.h>
#include <string.h>

#include "kcone.h"

int main(void) {
    double v = 0.0, err = 0.0;
    if (kc_sn(1.0, 1.0, &v) != KC_STATUS_OK || fabs(v - sin(1.0)) > 1e-15) return 1;

    const char *doc =
        "{\"schema\":1,\"space\":{\"kind\":\"cone\",\"kappa\":1,\"radius\":3.141592653589793,"
        "\"sigma\":{\"kind\":\"circle\",\"length\":6.283185307179586}}}";
    KcSpace *s = NULL;
    if (kc_space_from_json(doc, &s) != KC_STATUS_OK) return 2;
    if (kc_space_ball_volume(s, 3.141592653589793, 0, 0, &v, &err) != KC_STATUS_OK) return 3;
    if (fabs(v - 4.0 * M_PI) > 1e-9) return 4;
    if (kc_space_distance(s, "apex", "1,0", 0.1, &v, NULL) != KC_STATUS_OK || fabs(v - 1.0) > 1e-12) return 5;
    if (kc_space_distance(s, "apex", "9,0", 0.1, &v, NULL) != KC_STATUS_INVALID_ARGUMENT) return 6;
    if (strlen(kc_last_error_message()) == 0) return 7;
    kc_space_free(s);

    if (kc_space_from_json("{", &s) != KC_STATUS_SCHEMA) return 8;
    puts("ok");
    return 0;
}
