#include <stdio.h>
#include <string.h>
#include "reeb.h"

int main(void) {
    const char *y = "v 0 0\nv 1 1\nv 2 2\nv 3 3\ne 0 2\ne 1 2\ne 2 3\n";
    ReebGraphHandle *g = NULL;
    if (reeb_graph_parse(y, &g) != REEB_STATUS_OK) return 10;
    char *d = NULL;
    if (reeb_diagram_compute(g, &d) != REEB_STATUS_OK) return 11;
    int ok = strcmp(d, "Ord0 1 2\nExt0 0 3\n") == 0;
    reeb_string_free(d);
    ReebGraphHandle *bad = NULL;
    if (reeb_graph_parse("v 0 x\n", &bad) != REEB_STATUS_PARSE_ERROR) return 12;
    printf("%s\n", reeb_last_error_message());
    reeb_graph_free(g);
    return ok ? 0 : 13;
}
