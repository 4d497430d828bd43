// Acceptance gate: runs every property check and prints one line per
// criterion. Exits nonzero if any criterion fails.

#include "relfrac/checks.hpp"

#include <cstdio>

int main() {
    auto results = relfrac::checks::run_all_checks();
    bool all = true;
    int idx = 0;
    for (const auto& r : results) {
        ++idx;
        all = all && r.passed;
        std::printf("criterion %2d  %-24s  %s  (%.1f s)\n", idx, r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.seconds);
        std::printf("              %s\n", r.detail.c_str());
    }
    std::printf("%s\n", all ? "ACCEPTANCE: ALL CRITERIA PASSED" : "ACCEPTANCE: FAILURES PRESENT");
    return all ? 0 : 1;
}
