#pragma once

#include <iosfwd>
#include <stdexcept>

#include "epsim/state.hpp"

namespace epsim {

// Field dump layout (text, '.' decimal separator, shortest round-trip
// numbers):
//
//   # epsim field v1
//   dim,points,length,alpha,time
//   <dim>,<N>,<L>,<alpha>,<t>
//   u1[,u2]
//   <one row per grid point, flat row-major index order>
//
// Grid point with flat index i has coordinates x_j = -L/2 + i_j L / N.

struct FieldFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_field_csv(std::ostream& os, const SimulationState& state);
/// Throws FieldFormatError on malformed input.
SimulationState read_field_csv(std::istream& is);

}  // namespace epsim
