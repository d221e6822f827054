// Runs the full verification suite on the built-in example systems and
// prints one pass/fail line per criterion. Exit status 0 iff all pass.

#include <cstdlib>
#include <iostream>

#include "shiftspec/report.hpp"

int main(int argc, char** argv) {
  shiftspec::ReportOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);

  const auto verdicts = shiftspec::run_acceptance(opt, &std::cerr);
  const bool ok = shiftspec::print_criteria_summary(verdicts, std::cout);
  std::cout << (ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << std::endl;
  return ok ? 0 : 1;
}
