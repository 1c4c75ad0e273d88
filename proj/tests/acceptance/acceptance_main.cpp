// Runs acceptance criteria 1 to 10 and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "schurfact/cli/selftest.hpp"

int main(int argc, char** argv) {
  schurfact::cli::SelftestOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

  int failures = 0;
  const auto results = schurfact::cli::run_selftest(options, [&](const schurfact::cli::CriterionResult& r) {
    std::cout << schurfact::cli::format_result_line(r) << std::endl;
    if (!r.passed) {
      ++failures;
      if (!r.detail.empty()) std::cout << "    " << r.detail << std::endl;
    }
  });
  std::cout << (results.size() - static_cast<std::size_t>(failures)) << "/" << results.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
