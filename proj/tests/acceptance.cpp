// Runs every acceptance criterion in order: one PASS/FAIL line each.
#include <iostream>

#include "besselcm/parallel.hpp"
#include "besselcm/reproduce.hpp"

int main() {
  using namespace besselcm;
  ReproduceOptions options;
  options.threads = default_threads();
  int failed = 0;
  reproduce_all(options, [&](const CriterionResult& r) {
    std::cout << summary_line(r) << std::endl;
    if (!r.passed) {
      ++failed;
      for (const auto& d : r.details) std::cout << "      " << d << '\n';
    }
  });
  std::cout << (kCriteria - failed) << "/" << kCriteria << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
