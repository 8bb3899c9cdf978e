#include <stdio.h>
#include <string.h>
#include "tworay.h"

static const char *E1 = "{\"p\":[6,3],\"q\":[2,2],\"S\":[[2,4,6,8],[2]],\"T\":[[4,6],[]]}";

int main(void) {
    TworaySystem *sys = NULL;
    if (tworay_system_from_json(E1, &sys) != TWORAY_STATUS_OK) {
        fprintf(stderr, "load: %s\n", tworay_last_error());
        return 1;
    }
    size_t v, a, r;
    tworay_quiver_counts(sys, &v, &a, &r);
    printf("%zu %zu %zu\n", v, a, r);

    char *adm = NULL;
    tworay_admissible_json(sys, &adm);
    printf("%s\n", adm);
    tworay_string_free(adm);

    TworaySystem *bad = NULL;
    TworayStatus s = tworay_extend(sys, "x:1:3", &bad);
    printf("%d %s\n", (int)s, bad == NULL ? "null" : "set");

    tworay_system_free(sys);
    return 0;
}
