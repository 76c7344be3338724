#include <iostream>

#include "fcopt/verify.hpp"

int main() {
  try {
    const auto results = fcopt::run_acceptance_suite(std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << '\n';
    return 2;
  }
}
