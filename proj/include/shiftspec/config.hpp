#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftspec/kernel.hpp"
#include "shiftspec/model.hpp"

namespace shiftspec {

// Parsed run configuration. Sections: [system], [kernel], [run], [grids].
// Matrix rows are given by repeating a key once per row. Exactly one of the
// q / potential row sets may be present; the seed must be explicit.
struct RunConfig {
  int alphabet = 0;
  std::vector<Vec> incidence_rows;
  std::vector<Vec> q_rows;
  std::vector<Vec> potential_rows;
  std::vector<Vec> observable_rows;

  std::string kernel_name = "fejer";

  long n = 10000;
  int samples = 1000;
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_dir = "out";

  double t_lo = 0.05;
  double t_hi = 1.0;
  double t_step = 0.01;
  int x_points = 513;
  Vec deltas = {0.4, 0.2, 0.1, 0.05};
  double eps = 0.5;

  SymbolicSystem build_system() const;
  Observable build_observable(const SymbolicSystem& sys) const;
  SmoothingKernel build_kernel() const;
};

// Parses the key-value text. Throws parse_error with the offending line, or
// validation_error naming the violated invariant.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

}  // namespace shiftspec
