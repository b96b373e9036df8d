// Acceptance gate: runs every release criterion and fails if any does.
#include "effdyn/selftest.hpp"

#include <iostream>

int main() {
    const auto results = effdyn::selftest::run_all(std::cout);
    return effdyn::selftest::all_passed(results) ? 0 : 1;
}
