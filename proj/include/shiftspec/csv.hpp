#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "shiftspec/error.hpp"

namespace shiftspec {

// Round-trip exact serialization: 17 significant digits.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) raise(Errc::validation_error, "cannot open " + path + " for writing");
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace shiftspec
