#pragma once

#include <stdexcept>
#include <string>

namespace shiftspec {

enum class Errc {
  not_primitive = 1,
  empty_row_or_column,
  nonconvergent_eigen,
  too_large,
  invalid_grid,
  nonconvergent_series,
  uncentered_observable,
  overflow,
  quadrature_imag_residue,
  too_few_samples,
  degenerate_variance,
  probable_lattice,
  grid_too_coarse,
  bad_grid_size,
  invalid_window,
  parse_error,
  validation_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_primitive: return "not_primitive";
    case Errc::empty_row_or_column: return "empty_row_or_column";
    case Errc::nonconvergent_eigen: return "nonconvergent_eigen";
    case Errc::too_large: return "too_large";
    case Errc::invalid_grid: return "invalid_grid";
    case Errc::nonconvergent_series: return "nonconvergent_series";
    case Errc::uncentered_observable: return "uncentered_observable";
    case Errc::overflow: return "overflow";
    case Errc::quadrature_imag_residue: return "quadrature_imag_residue";
    case Errc::too_few_samples: return "too_few_samples";
    case Errc::degenerate_variance: return "degenerate_variance";
    case Errc::probable_lattice: return "probable_lattice";
    case Errc::grid_too_coarse: return "grid_too_coarse";
    case Errc::bad_grid_size: return "bad_grid_size";
    case Errc::invalid_window: return "invalid_window";
    case Errc::parse_error: return "parse_error";
    case Errc::validation_error: return "validation_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace shiftspec
