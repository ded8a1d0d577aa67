#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "optlam/net.hpp"

namespace optlam {

inline constexpr std::uint64_t kDefaultEngineFuel = 1'000'000;

/// What the principal-path walk from the interface found.
struct NeededResult {
  enum class Kind : std::uint8_t { Pair, TerminalAtom, Stuck, Cycle };
  Kind kind = Kind::Stuck;
  AgentId demand = kNoAgent;    // Pair: agent whose principal was departed
  AgentId provider = kNoAgent;  // Pair: agent whose principal was hit
  TermPtr atom;                 // TerminalAtom: the finished term
  std::string diagnostic;       // Stuck/Cycle
};

/// Pure walk: follow wires from the interface, continuing through each
/// auxiliary landing via that agent's principal, until two principals face
/// each other. Never mutates the net.
NeededResult find_needed(const NetState& st);

/// Residual identities for fans i (demand) and j (provider), i != j.
/// First element goes to the provider-side first copy, second to the
/// demand-side first copy. A first encounter mints a fresh id (one past the
/// current counter), records both orientations, and bumps the counter;
/// later encounters replay the recorded pair.
std::pair<FanId, FanId> phi_resolve(NetState& st, FanId i, FanId j);

/// Rule that fires for this demand/provider pairing, if any.
std::optional<Rule> rule_for(const NetState& st, AgentId demand, AgentId provider);

/// Rewrites one active pair in place, updates counters, and appends a trace
/// line when tracing is enabled. The pair must come from the walk and a rule
/// must apply.
Rule apply_rule(NetState& st, const NeededResult& pair);

struct RunOptions {
  std::uint64_t maxInteractions = kDefaultEngineFuel;
  bool verifyWalk = false;       // cross-check the cached walk every step
  bool validateEachStep = false; // full structural validation every step
};

struct RunOutcome {
  enum class Kind : std::uint8_t { NormalForm, Stuck, Cycle, FuelExhausted };
  Kind kind = Kind::Stuck;
  TermPtr normalForm;
  std::string diagnostic;
  std::string snapshot;  // net state for Stuck/Cycle
  Stats stats;
};

/// Drives the net until the interface faces a finished term, no rule
/// applies, the walk loops, or the interaction budget for this call runs
/// out. The walk is cached across steps: after a rewrite it backs up one
/// agent instead of restarting from the interface. A state left by a
/// fuel-exhausted run may be passed again to continue.
RunOutcome run(NetState& st, const RunOptions& opt = {});

/// Trace lines collected so far (empty unless enable_trace() was called).
const std::vector<std::string>& dump_trace(const NetState& st);

}  // namespace optlam
