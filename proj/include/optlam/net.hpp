#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "optlam/term.hpp"

namespace optlam {

using AgentId = std::uint32_t;
using FanId = std::uint32_t;
inline constexpr AgentId kNoAgent = 0xFFFFFFFFu;

struct PortRef {
  AgentId agent = kNoAgent;
  std::uint8_t port = 0;  // 0 = principal, 1..2 = auxiliary

  friend bool operator==(PortRef a, PortRef b) {
    return a.agent == b.agent && a.port == b.port;
  }
  friend bool operator!=(PortRef a, PortRef b) { return !(a == b); }
};

// Port layout:
//   Interface  principal only; marks the net's output
//   Eraser     principal only; swallows a disconnected binder
//   Lam        principal = whole abstraction, aux1 = binder, aux2 = body
//   App        principal = function, aux1 = root, aux2 = argument
//   Fan        principal = shared side, aux1 = first copy, aux2 = second copy
//   Atom       principal only; carries a finished term
//   Reader     principal = input being read, aux1 = output; carries a context
enum class AgentKind : std::uint8_t {
  Interface,
  Eraser,
  Lam,
  App,
  Fan,
  Atom,
  Reader,
};

int port_count(AgentKind k);
std::string_view kind_name(AgentKind k);

/// One layer of surrounding term a reader has traversed: either "under a
/// binder" or "applied to a function already read back".
struct ContextFrame {
  enum class Kind : std::uint8_t { UnderLam, AppOf };
  Kind kind;
  std::string binder;  // UnderLam
  TermPtr fun;         // AppOf
};
using Context = std::vector<ContextFrame>;

/// Wraps `t` in the context, innermost frame last: plug([UnderLam y], x)
/// is the term "lambda y. x".
TermPtr plug(const Context& ctx, TermPtr t);

/// Context extended with one more binder layer.
Context extend_lambda(Context ctx, std::string binder);

/// Rendering with a hole marker, e.g. "f (λy.◻)".
std::string context_to_string(const Context& ctx);

/// Memo of residual fan identities, keyed by ordered pairs of fan ids.
class FanPairTable {
 public:
  bool contains(FanId i, FanId j) const { return map_.count(key(i, j)) != 0; }
  FanId at(FanId i, FanId j) const { return map_.at(key(i, j)); }
  void put(FanId i, FanId j, FanId v) { map_[key(i, j)] = v; }
  std::size_t size() const { return map_.size(); }
  std::vector<std::tuple<FanId, FanId, FanId>> sorted_entries() const;

 private:
  static std::uint64_t key(FanId i, FanId j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
  }
  std::unordered_map<std::uint64_t, FanId> map_;
};

struct FanPairInsert {
  FanId i, j;      // demand, provider at first encounter
  FanId assigned;  // fresh id handed to the provider-side residual
};

enum class Rule : std::uint8_t {
  ReadLam,     // R1  reader meets abstraction
  Beta,        // R2  application meets abstraction
  ApplyAtom,   // R3  application meets finished function
  EmitAtom,    // R4  reader meets finished term
  ReadFan,     // R5  reader meets shared node
  CopyAtom,    // R6  fan duplicates a finished term
  CopyLam,     // R7  fan commutes with an abstraction
  CopyApp,     // R8  fan commutes with an application
  Annihilate,  // R9  fans with equal identity cancel
  Commute,     // R10 fans with distinct identity cross
};
inline constexpr int kRuleCount = 10;
int rule_number(Rule r);          // 1..10
std::string rule_label(Rule r);   // "R1".."R10"

struct Stats {
  std::array<std::uint64_t, kRuleCount> rules{};
  std::uint64_t phiInserts = 0;
  std::uint64_t phiHits = 0;
  std::uint64_t walkSteps = 0;
  std::uint64_t residualAgents = 0;

  std::uint64_t interactions() const;
  friend bool operator==(const Stats& a, const Stats& b);
};

struct Agent {
  AgentKind kind = AgentKind::Eraser;
  bool alive = false;
  bool inChain = false;  // scratch flag owned by the running walk
  FanId fan = 0;
  TermPtr atom;
  Context ctx;
  std::array<PortRef, 3> peer{};
};

struct NetState {
  std::vector<Agent> agents;
  std::vector<AgentId> freeList;
  std::size_t aliveCount = 0;
  AgentId interfaceId = kNoAgent;

  FanPairTable phi;
  std::vector<FanPairInsert> phiLog;
  std::uint64_t fanCount = 0;      // highest fan id handed out so far
  std::uint64_t freshBinders = 0;  // binder names minted during read-back
  std::string binderPrefix = "y";

  Stats stats;
  std::vector<Rule> ruleLog;
  std::optional<std::vector<std::string>> trace;

  AgentId add(AgentKind kind);
  void kill(AgentId id);
  Agent& at(AgentId id) { return agents[id]; }
  const Agent& at(AgentId id) const { return agents[id]; }
  void connect(PortRef a, PortRef b);
  PortRef peer_at(PortRef p) const { return agents[p.agent].peer[p.port]; }

  void enable_trace();

  /// Deterministic equation listing of the live net.
  std::string snapshot() const;
  /// Deterministic listing of the fan-pair memo.
  std::string phi_dump() const;
};

/// Next binder name from the reserved read-back namespace (prefix + index).
std::string fresh_binder(NetState& st);

/// Throws std::logic_error when a structural invariant is broken: a port
/// wired to a dead agent or not mirrored by its peer, a missing interface,
/// or a fan id above the current counter.
void validate(const NetState& st);

}  // namespace optlam
