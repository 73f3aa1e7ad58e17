#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace llgvm {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;
  int failures() const;
};

/// Invariant suite on small grids (a few seconds): spectral operators,
/// mollifier symmetry, LL structure and energy decay, topology, the push,
/// deposition, Maxwell invariants, moments, snapshots, config validation,
/// the coupled step and thread-count independence. One line per check goes
/// to `out` when given. A check that throws counts as failed.
SelftestResult run_selftest(std::ostream* out);

}  // namespace llgvm
