// Runs the eleven acceptance criteria and prints one verdict line each.
// Exit status is the number of failed criteria (0 when all pass).

#include <iostream>

#include "dchaos/acceptance.hpp"

int main() {
    using namespace dchaos::acceptance;
    const Options opt;
    int failed = 0;
    for (const auto& c : all_criteria()) {
        const CriterionResult r = timed(c, opt);
        std::cout << format_result(r) << std::flush;
        failed += r.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
    return failed;
}
