#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace epsim {

struct InvariantCheck {
  std::string name;
  double value = 0.0;      // worst observed relative defect
  double tolerance = 0.0;
  bool passed = false;
};

/// Algebraic identities of the discrete operators on a corpus of random
/// band-limited 2D fields (N = 64). No time integration; runs in seconds.
std::vector<InvariantCheck> run_invariant_suite(std::uint64_t seed = 1, std::size_t fields = 20);

}  // namespace epsim
