#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "curvchern.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc((size_t)n + 1);
    if (fread(buf, 1, (size_t)n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 10;
    char *json = slurp(argv[1]);
    if (!json) return 11;

    CurvchernInput *input = NULL;
    if (curvchern_input_from_json(json, &input) != CURVCHERN_STATUS_OK) return 12;
    if (curvchern_input_set_caps(input, 2, 6) != CURVCHERN_STATUS_OK) return 13;

    char *doc = NULL;
    if (curvchern_chern_json(input, CURVCHERN_METHOD_DIRECT, true, &doc) != CURVCHERN_STATUS_OK) return 14;
    if (!strstr(doc, "\"method\": \"direct\"")) return 15;
    curvchern_string_free(doc);

    size_t checked = 0;
    if (curvchern_compare(input, &checked) != CURVCHERN_STATUS_OK || checked == 0) return 16;

    if (curvchern_input_from_json("{", &input) != CURVCHERN_STATUS_PARSE_ERROR) return 17;
    if (curvchern_last_error() == NULL) return 18;

    curvchern_input_free(input);
    free(json);
    printf("ok %s\n", curvchern_version());
    return 0;
}
