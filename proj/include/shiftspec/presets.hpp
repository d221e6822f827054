#pragma once

#include <string>
#include <vector>

#include "shiftspec/model.hpp"

namespace shiftspec {

// Built-in example systems exercised by the verification report and tests.
struct Preset {
  std::string name;
  SymbolicSystem sys;
  Observable obs;
  bool lattice = false;  // integer-valued observable, fails the aperiodicity gate
};

// Two-state chain Q = [[0.9, 0.1], [0.5, 0.5]] with an edge observable whose
// cycle sums have irrational ratio, scaled to a large per-step variance.
Preset preset_two_state();

// Golden-mean shift (incidence [[1,1],[1,0]]) with the Parry measure.
Preset preset_golden_mean();

// Three-state i.i.d. system with observable values {1, sqrt(2), 0}; satisfies
// the aperiodicity assumption at every frequency.
Preset preset_iid3();

// Three-state i.i.d. system with integer observable {1, 0, -1}; lattice walk
// used to exercise the aperiodicity gate.
Preset preset_lattice3();

// The non-lattice presets above, in a fixed order.
std::vector<Preset> nonlattice_presets();

}  // namespace shiftspec
