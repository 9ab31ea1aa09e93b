#include <stdio.h>
#include <string.h>

#include "slp_membership.h"

static const char *GRAMMAR = "slp n=4\nX1 -> a b\nX2 ->\nX3 -> X1 X1\nX4 -> $ X3 #\n";
static const char *LOOP_AB = "states 0 1 2 3\nstart 0\naccept 3\n"
                             "trans 0 $ 1\ntrans 1 a 2\ntrans 2 b 1\ntrans 1 # 3\n";
static const char *LOOP_BA = "states 0 1 2 3\nstart 0\naccept 3\n"
                             "trans 0 $ 1\ntrans 1 b 2\ntrans 2 a 1\ntrans 1 # 3\n";

static int check(const char *automaton, bool want) {
    SlpmInstance *inst = NULL;
    if (slpm_instance_parse(GRAMMAR, automaton, &inst) != SLPM_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", slpm_last_error_message());
        return 1;
    }
    SlpmDecision d = {0};
    SlpmStatus s = slpm_decide(inst, NULL, &d);
    slpm_instance_free(inst);
    if (s != SLPM_STATUS_OK || d.accepted != want) {
        fprintf(stderr, "decide: status %d accepted %d\n", (int)s, (int)d.accepted);
        return 1;
    }
    return 0;
}

int main(void) {
    if (check(LOOP_AB, true) || check(LOOP_BA, false)) {
        return 1;
    }
    SlpmInstance *inst = NULL;
    if (slpm_instance_parse_combined("slp n=1\nX1 -> X2\n---\n", &inst) != SLPM_STATUS_PARSE &&
        inst != NULL) {
        return 1;
    }
    if (strlen(slpm_last_error_message()) == 0) {
        return 1;
    }
    puts("ok");
    return 0;
}
