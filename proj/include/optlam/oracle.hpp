#pragma once

#include <cstdint>

#include "optlam/term.hpp"

namespace optlam {

inline constexpr std::uint64_t kDefaultOracleFuel = 100'000;

/// Cap on intermediate term size (tree nodes). Terms that outgrow it are
/// reported as FuelExhausted with the steps spent so far, which keeps
/// size-exploding divergent inputs from stalling a differential run.
inline constexpr std::uint64_t kOracleSizeLimit = 2'000'000;

struct OracleOutcome {
  bool normalized = false;
  TermPtr term;                  // the normal form when normalized
  std::uint64_t betaSteps = 0;   // steps performed (== fuel when exhausted)
};

/// Leftmost-outermost reduction to full normal form, counting beta steps.
OracleOutcome normalize_normal_order(const TermPtr& term, std::uint64_t fuel,
                                     std::uint64_t sizeLimit = kOracleSizeLimit);

}  // namespace optlam
