// Acceptance suite: one pass/fail line per criterion.
// Usage: hypercycle_acceptance [criterion ...]   (all nine when none given)

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "hypercycle/acceptance.hpp"

int main(int argc, char** argv) {
  namespace acc = hypercycle::acceptance;
  std::vector<int> ids;
  for (int a = 1; a < argc; ++a) ids.push_back(std::stoi(argv[a]));
  if (ids.empty()) {
    for (int id = 1; id <= acc::kCriteria; ++id) ids.push_back(id);
  }
  int failed = 0;
  for (int id : ids) {
    const acc::Verdict v = acc::run(id);
    std::cout << v.line() << std::endl;
    if (!v.passed) ++failed;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
