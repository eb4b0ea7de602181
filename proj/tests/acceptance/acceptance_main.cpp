// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <iostream>

#include "b0kit/acceptance.hpp"

int main() {
  const auto results = b0kit::acceptance::run({}, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed() ? 0 : 1;
  std::cout << (failed ? "FAILED: " + std::to_string(failed) + " of " : "ALL PASSED: ") << results.size() << " criteria\n";
  return failed ? 1 : 0;
}
