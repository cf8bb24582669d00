#pragma once

#include <string>

#include "narx/clrs/instance.hpp"

namespace narx::clrs {

/// Runs the classical algorithm and records its output probe, plus the hint
/// trajectory for hint-enabled algorithms. Invalid instances raise a contract
/// error.
AlgoTrace execute(AlgoName algo, const AlgoInstance& inst);
inline AlgoTrace execute(const AlgoInstance& inst) { return execute(inst.algo, inst); }

/// Per-step algorithm states. State 0 is the initial state; the last equals
/// the outputs. Raises a feature-not-enabled error outside the hint set.
std::vector<ProbeSet> emit_hints(AlgoName algo, const AlgoInstance& inst);

struct OracleReport {
  bool pass = true;
  bool skipped = false;  // exhaustive oracle too expensive for this size
  std::string message;
};

/// Recomputes the output with a naive independent method and compares it to
/// the trace exactly.
OracleReport oracle_check(AlgoName algo, const AlgoInstance& inst, const AlgoTrace& trace);

/// Largest encoded size the exponential oracles accept.
inline constexpr std::size_t kMaxExhaustiveSize = 14;

}  // namespace narx::clrs
