#pragma once

#include <cstdint>

#include "optlam/term.hpp"

namespace optlam {

/// Deterministic closed random term. The same (seed, maxSize) always yields
/// the same term on every platform. Generation favors applications whose
/// function is an abstraction so redexes are common. The result has at most
/// max(maxSize, 2) constructors (the smallest closed term has two).
TermPtr gen_random_term(std::uint64_t seed, std::uint64_t maxSize);

}  // namespace optlam
