// Acceptance suite: runs every criterion exactly as specified and prints one
// pass/fail line per criterion. Exit code 0 iff everything passed.

#include <cstdio>

#include "fqdescent/selftest.hpp"

int main() {
    auto cases = fqdescent::run_selftest({});
    std::fputs(fqdescent::format_selftest_report(cases).c_str(), stdout);
    for (const auto& c : cases)
        if (!c.pass) return 1;
    return 0;
}
