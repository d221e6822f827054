#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace shiftspec {

struct Verdict {
  std::string name;      // criterion id + check, e.g. "c04.variance_crossval.two_state"
  std::string params;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  // value <relation> threshold
  bool pass = false;
};

struct ReportOptions {
  uint64_t seed = 20260808;
  int threads = 0;  // 0 = hardware
};

// Runs the full verification suite on the built-in example systems and
// returns one verdict per individual check. Progress lines (one per
// criterion) go to *progress when given.
std::vector<Verdict> run_acceptance(const ReportOptions& opt, std::ostream* progress = nullptr);

// One line per criterion (verdicts grouped by the "cNN.title" prefix).
// Returns true when every verdict passed.
bool print_criteria_summary(const std::vector<Verdict>& verdicts, std::ostream& out);

void write_verdicts_csv(const std::vector<Verdict>& verdicts, const std::string& path);

bool all_pass(const std::vector<Verdict>& verdicts);

}  // namespace shiftspec
