#include <stdio.h>
#include <string.h>

#include "swiperkit.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "failed: %s (%s)\n", #cond, sw_last_error()); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    SwDistribution *dist = NULL;
    SwProblem *wr = NULL;
    SwReport *report = NULL;
    uint64_t tickets[4] = {0};
    uint64_t bound = 0;
    bool valid = false;

    CHECK(sw_distribution_from_text("a,1\nb,1\nc,1\nd,1\n", SW_FORMAT_CSV, &dist) == SW_OK);
    CHECK(sw_problem_new(SW_PROBLEM_WR, "1/3", "1/2", &wr) == SW_OK);
    CHECK(sw_ticket_bound(wr, 100, &bound) == SW_OK && bound == 134);
    CHECK(sw_solve(wr, dist, SW_MODE_FULL, &report) == SW_OK);
    CHECK(sw_report_total(report) == 3);
    CHECK(sw_report_len(report) == 4);
    CHECK(sw_report_tickets(report, tickets, 4) == SW_OK);
    CHECK(tickets[0] == 1 && tickets[1] == 1 && tickets[2] == 1 && tickets[3] == 0);
    CHECK(sw_validate(wr, dist, tickets, 4, &valid) == SW_OK && valid);
    tickets[2] = 0;
    CHECK(sw_validate(wr, dist, tickets, 4, &valid) == SW_OK && !valid);
    CHECK(sw_problem_new(SW_PROBLEM_WS, "1/2", "1/3", NULL) == SW_NULL_POINTER);
    CHECK(strlen(sw_last_error()) > 0);

    sw_report_free(report);
    sw_problem_free(wr);
    sw_distribution_free(dist);
    printf("ok %s\n", sw_version());
    return 0;
}
