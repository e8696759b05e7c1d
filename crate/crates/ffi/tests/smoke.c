#include <stdio.h>
#include <string.h>

#include "fermat_actions.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "failed: %s (%s)\n", #cond,          \
                    fa_last_error_message());                    \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    FaKeySet *set = NULL;
    FaPermGroup *s4 = NULL;
    const char *gens[] = {"(1 2)", "(1 2 3 4)"};
    size_t len = 0, orbits = 0;
    char *key = NULL;

    CHECK(fa_enumerate(7, 3, 2, &set) == FA_STATUS_OK);
    CHECK(fa_keyset_len(set, &len) == FA_STATUS_OK && len == 53);
    CHECK(fa_group_new(4, gens, 2, &s4) == FA_STATUS_OK);
    CHECK(fa_count_orbits(set, s4, &orbits) == FA_STATUS_OK && orbits == 6);
    CHECK(fa_keyset_key_string(set, 0, &key) == FA_STATUS_OK);
    CHECK(strncmp(key, "7/3/2:", 6) == 0);
    fa_string_free(key);
    CHECK(fa_enumerate(4, 3, 2, NULL) == FA_STATUS_INVALID_ARGUMENT);
    CHECK(strstr(fa_last_error_message(), "composite") != NULL);
    fa_group_free(s4);
    fa_keyset_free(set);
    printf("ok %s\n", fa_version());
    return 0;
}
