/* Prints alpha, a few energies and psi_{2,3}(0.7) for gaps 1,3. */
#include <stdio.h>
#include "periodic_susy.h"

int main(void) {
    PsusyHierarchy *h = NULL;
    PsusyState *s = NULL;
    char text[64];
    double alpha, e, v;

    if (psusy_hierarchy_new("1,3", NULL, NULL, &h) != PSUSY_STATUS_OK) {
        psusy_last_error_message(text, sizeof text, NULL);
        fprintf(stderr, "error: %s\n", text);
        return 1;
    }
    psusy_hierarchy_alpha(h, &alpha);
    psusy_hierarchy_alpha_text(h, text, sizeof text, NULL);
    printf("alpha %s %.6f\n", text, alpha);
    for (size_t n = 0; n < 4; n++) {
        psusy_energy(h, 1, n, &e);
        printf("E1 %zu %.1f\n", n, e);
    }
    if (psusy_eigenstate_new(h, 2, 3, &s) != PSUSY_STATUS_OK) return 1;
    psusy_eigenstate_eval(s, 0.7, &v);
    printf("psi %.12f\n", v);
    if (psusy_eigenstate_eval(s, 0.0, &v) != PSUSY_STATUS_OK) printf("center rejected\n");
    else printf("center %.1f\n", v);

    PsusyHierarchy *bad = NULL;
    PsusyStatus st = psusy_hierarchy_new("1,0", NULL, NULL, &bad);
    printf("bad gaps status %d\n", (int)st);
    psusy_eigenstate_free(s);
    psusy_hierarchy_free(h);
    return 0;
}
