#include "optlam/engine.hpp"

#include <array>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace optlam {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(msg);
}

std::string agent_desc(const NetState& st, AgentId id) {
  const Agent& a = st.at(id);
  switch (a.kind) {
    case AgentKind::Interface: return "p";
    case AgentKind::Eraser: return "eraser";
    case AgentKind::Lam: return "lam";
    case AgentKind::App: return "app";
    case AgentKind::Fan: return "fan_" + std::to_string(a.fan);
    case AgentKind::Atom: return "atom(" + to_string(a.atom) + ")";
    case AgentKind::Reader: return "reader(" + context_to_string(a.ctx) + ")";
  }
  return "?";
}

// Replacement wiring for a rewrite: the dying agents exposed `slots`, whose
// peers were recorded in `ext` before the kill. Slot k is taken over by
// targets[k]; a slot whose peer was another slot wires the two targets
// directly together.
void splice(NetState& st, const PortRef* slots, const PortRef* ext,
            const PortRef* targets, int n) {
  std::array<bool, 4> done{};
  for (int i = 0; i < n; ++i) {
    if (done[i]) continue;
    int j = -1;
    for (int k = 0; k < n; ++k)
      if (k != i && ext[i] == slots[k]) j = k;
    if (j >= 0) {
      st.connect(targets[i], targets[j]);
      done[i] = done[j] = true;
    } else {
      st.connect(targets[i], ext[i]);
      done[i] = true;
    }
  }
}

// Straight wire-through for rules that melt two agents into plain wires:
// each junction pair (slots 0-1 and slots 2-3) joins the far ends of its two
// wires, chasing chains through the other dying slots. A chain that closes
// on itself has no outside ends and is dropped. Call while the old agents
// are still alive; kill them afterwards.
void splice_through(NetState& st, const std::array<PortRef, 4>& slots) {
  std::array<PortRef, 4> ext;
  for (int i = 0; i < 4; ++i) ext[i] = st.peer_at(slots[i]);
  constexpr std::array<int, 4> partner{1, 0, 3, 2};
  std::array<bool, 4> done{};
  auto slot_index = [&](PortRef p) {
    for (int k = 0; k < 4; ++k)
      if (slots[k] == p) return k;
    return -1;
  };
  auto resolve = [&](PortRef e) -> std::optional<PortRef> {
    for (;;) {
      int k = slot_index(e);
      if (k < 0) return e;
      if (done[k]) return std::nullopt;
      done[k] = true;
      int p = partner[k];
      if (done[p]) return std::nullopt;
      done[p] = true;
      e = ext[p];
    }
  };
  for (int s : {0, 2}) {
    if (done[s]) continue;
    done[s] = true;
    done[partner[s]] = true;
    auto a = resolve(ext[s]);
    auto b = resolve(ext[partner[s]]);
    assert(a.has_value() == b.has_value());
    if (a && b) st.connect(*a, *b);
  }
}

struct Oriented {
  AgentId first;
  AgentId second;
};

Oriented oriented(const NetState& st, AgentId x, AgentId y, AgentKind firstKind) {
  if (st.at(x).kind == firstKind) return {x, y};
  return {y, x};
}

template <std::size_t N>
std::array<PortRef, N> peers_of(const NetState& st,
                                const std::array<PortRef, N>& slots) {
  std::array<PortRef, N> ext;
  for (std::size_t i = 0; i < N; ++i) ext[i] = st.peer_at(slots[i]);
  return ext;
}

}  // namespace

NeededResult find_needed(const NetState& st) {
  require(st.interfaceId != kNoAgent && st.at(st.interfaceId).alive,
          "net has no interface");
  std::unordered_set<AgentId> visited;
  PortRef cur{st.interfaceId, 0};
  visited.insert(st.interfaceId);
  for (;;) {
    PortRef nxt = st.peer_at(cur);
    const Agent& b = st.at(nxt.agent);
    if (nxt.port == 0) {
      if (cur.agent == st.interfaceId && b.kind == AgentKind::Atom)
        return {NeededResult::Kind::TerminalAtom, cur.agent, nxt.agent, b.atom, {}};
      return {NeededResult::Kind::Pair, cur.agent, nxt.agent, nullptr, {}};
    }
    if (visited.count(nxt.agent))
      return {NeededResult::Kind::Cycle, kNoAgent, kNoAgent, nullptr,
              "walk revisited " + agent_desc(st, nxt.agent)};
    visited.insert(nxt.agent);
    cur = {nxt.agent, 0};
  }
}

std::pair<FanId, FanId> phi_resolve(NetState& st, FanId i, FanId j) {
  require(i != j, "fan pair with equal identity");
  if (st.phi.contains(i, j)) {
    ++st.stats.phiHits;
    return {st.phi.at(i, j), st.phi.at(j, i)};
  }
  FanId fresh = static_cast<FanId>(st.fanCount + 1);
  st.phi.put(i, j, fresh);
  st.phi.put(j, i, j);
  st.phiLog.push_back({i, j, fresh});
  st.fanCount = fresh;
  ++st.stats.phiInserts;
  return {fresh, j};
}

std::optional<Rule> rule_for(const NetState& st, AgentId demand, AgentId provider) {
  AgentKind a = st.at(demand).kind;
  AgentKind b = st.at(provider).kind;
  auto pair = [&](AgentKind x, AgentKind y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  if (pair(AgentKind::Reader, AgentKind::Lam)) return Rule::ReadLam;
  if (pair(AgentKind::App, AgentKind::Lam)) return Rule::Beta;
  if (pair(AgentKind::App, AgentKind::Atom)) return Rule::ApplyAtom;
  if (pair(AgentKind::Reader, AgentKind::Atom)) return Rule::EmitAtom;
  if (pair(AgentKind::Reader, AgentKind::Fan)) return Rule::ReadFan;
  if (pair(AgentKind::Fan, AgentKind::Atom)) return Rule::CopyAtom;
  if (pair(AgentKind::Fan, AgentKind::Lam)) return Rule::CopyLam;
  if (pair(AgentKind::Fan, AgentKind::App)) return Rule::CopyApp;
  if (a == AgentKind::Fan && b == AgentKind::Fan)
    return st.at(demand).fan == st.at(provider).fan ? Rule::Annihilate
                                                    : Rule::Commute;
  return std::nullopt;
}

Rule apply_rule(NetState& st, const NeededResult& pair) {
  require(pair.kind == NeededResult::Kind::Pair, "not an active pair");
  AgentId D = pair.demand;
  AgentId P = pair.provider;
  assert(st.peer_at({D, 0}) == (PortRef{P, 0}));
  auto rule = rule_for(st, D, P);
  require(rule.has_value(), "no rule for this pair");

  std::string line;
  if (st.trace) {
    line = std::to_string(st.stats.interactions() + 1) + ": " +
           rule_label(*rule) + " " + agent_desc(st, D) + " \xC3\x97 " +
           agent_desc(st, P);
  }

  switch (*rule) {
    case Rule::ReadLam: {
      auto [r, l] = oriented(st, D, P, AgentKind::Reader);
      Context ctx = std::move(st.at(r).ctx);
      std::string binder = fresh_binder(st);
      std::array<PortRef, 3> slots{{{r, 1}, {l, 1}, {l, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(r);
      st.kill(l);
      AgentId atom = st.add(AgentKind::Atom);
      st.at(atom).atom = var(binder);
      AgentId r2 = st.add(AgentKind::Reader);
      st.at(r2).ctx = extend_lambda(std::move(ctx), std::move(binder));
      std::array<PortRef, 3> targets{{{r2, 1}, {atom, 0}, {r2, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 3);
      break;
    }
    case Rule::Beta: {
      auto [a, l] = oriented(st, D, P, AgentKind::App);
      // application root joins the body, argument joins the binder
      std::array<PortRef, 4> slots{{{a, 1}, {l, 2}, {a, 2}, {l, 1}}};
      splice_through(st, slots);
      st.kill(a);
      st.kill(l);
      break;
    }
    case Rule::ApplyAtom: {
      auto [a, at] = oriented(st, D, P, AgentKind::App);
      TermPtr fun = st.at(at).atom;
      std::array<PortRef, 2> slots{{{a, 1}, {a, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(a);
      st.kill(at);
      AgentId r = st.add(AgentKind::Reader);
      st.at(r).ctx.push_back({ContextFrame::Kind::AppOf, {}, std::move(fun)});
      std::array<PortRef, 2> targets{{{r, 1}, {r, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 2);
      break;
    }
    case Rule::EmitAtom: {
      auto [r, at] = oriented(st, D, P, AgentKind::Reader);
      TermPtr value = plug(st.at(r).ctx, st.at(at).atom);
      std::array<PortRef, 1> slots{{{r, 1}}};
      auto ext = peers_of(st, slots);
      st.kill(r);
      st.kill(at);
      AgentId out = st.add(AgentKind::Atom);
      st.at(out).atom = std::move(value);
      std::array<PortRef, 1> targets{{{out, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 1);
      break;
    }
    case Rule::ReadFan: {
      auto [r, f] = oriented(st, D, P, AgentKind::Reader);
      Context ctx = std::move(st.at(r).ctx);
      FanId id = st.at(f).fan;
      std::array<PortRef, 3> slots{{{r, 1}, {f, 1}, {f, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(r);
      st.kill(f);
      AgentId join = st.add(AgentKind::Fan);
      st.at(join).fan = id;
      AgentId r1 = st.add(AgentKind::Reader);
      st.at(r1).ctx = ctx;
      AgentId r2 = st.add(AgentKind::Reader);
      st.at(r2).ctx = std::move(ctx);
      st.connect({r1, 1}, {join, 1});
      st.connect({r2, 1}, {join, 2});
      std::array<PortRef, 3> targets{{{join, 0}, {r1, 0}, {r2, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 3);
      break;
    }
    case Rule::CopyAtom: {
      auto [f, at] = oriented(st, D, P, AgentKind::Fan);
      TermPtr value = st.at(at).atom;
      std::array<PortRef, 2> slots{{{f, 1}, {f, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(f);
      st.kill(at);
      AgentId a1 = st.add(AgentKind::Atom);
      st.at(a1).atom = value;
      AgentId a2 = st.add(AgentKind::Atom);
      st.at(a2).atom = std::move(value);
      std::array<PortRef, 2> targets{{{a1, 0}, {a2, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 2);
      break;
    }
    case Rule::CopyLam:
    case Rule::CopyApp: {
      auto [f, s] = oriented(st, D, P, AgentKind::Fan);
      FanId id = st.at(f).fan;
      AgentKind copied = st.at(s).kind;
      std::array<PortRef, 4> slots{{{f, 1}, {f, 2}, {s, 1}, {s, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(f);
      st.kill(s);
      AgentId c1 = st.add(copied);
      AgentId c2 = st.add(copied);
      AgentId f1 = st.add(AgentKind::Fan);
      st.at(f1).fan = id;
      AgentId f2 = st.add(AgentKind::Fan);
      st.at(f2).fan = id;
      st.connect({f1, 1}, {c1, 1});
      st.connect({f1, 2}, {c2, 1});
      st.connect({f2, 1}, {c1, 2});
      st.connect({f2, 2}, {c2, 2});
      std::array<PortRef, 4> targets{{{c1, 0}, {c2, 0}, {f1, 0}, {f2, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 4);
      break;
    }
    case Rule::Annihilate: {
      std::array<PortRef, 4> slots{{{D, 1}, {P, 1}, {D, 2}, {P, 2}}};
      splice_through(st, slots);
      st.kill(D);
      st.kill(P);
      break;
    }
    case Rule::Commute: {
      FanId i = st.at(D).fan;
      FanId j = st.at(P).fan;
      bool hit = st.phi.contains(i, j);
      auto [forProvider, forDemand] = phi_resolve(st, i, j);
      if (st.trace) {
        std::ostringstream os;
        os << " " << (hit ? "hit" : "insert") << " (" << i << "," << j
           << ")\xE2\x86\xA6" << forProvider << " (" << j << "," << i
           << ")\xE2\x86\xA6" << forDemand;
        line += os.str();
      }
      std::array<PortRef, 4> slots{{{D, 1}, {D, 2}, {P, 1}, {P, 2}}};
      auto ext = peers_of(st, slots);
      st.kill(D);
      st.kill(P);
      AgentId d1 = st.add(AgentKind::Fan);
      st.at(d1).fan = forDemand;
      AgentId d2 = st.add(AgentKind::Fan);
      st.at(d2).fan = j;
      AgentId p1 = st.add(AgentKind::Fan);
      st.at(p1).fan = forProvider;
      AgentId p2 = st.add(AgentKind::Fan);
      st.at(p2).fan = i;
      st.connect({d1, 1}, {p1, 1});
      st.connect({d1, 2}, {p2, 1});
      st.connect({d2, 1}, {p1, 2});
      st.connect({d2, 2}, {p2, 2});
      std::array<PortRef, 4> targets{{{d1, 0}, {d2, 0}, {p1, 0}, {p2, 0}}};
      splice(st, slots.data(), ext.data(), targets.data(), 4);
      break;
    }
  }

  st.stats.rules[static_cast<int>(*rule)]++;
  st.ruleLog.push_back(*rule);
  if (st.trace) st.trace->push_back(std::move(line));
  return *rule;
}

namespace {

// Walk state kept across rewrites: the chain of principal ports departed so
// far. A rewrite consumes exactly the chain's last agent (the demand side)
// and its provider, neither of which appears earlier in the chain, and only
// rewires their neighbors' port entries. Backing up one agent and
// re-following its wire therefore lands exactly where a fresh walk from the
// interface would.
class Walker {
 public:
  explicit Walker(NetState& st) {
    for (auto& a : st.agents) a.inChain = false;
  }

  NeededResult advance(NetState& st) {
    if (chain_.empty()) {
      chain_.push_back({st.interfaceId, 0});
      st.at(st.interfaceId).inChain = true;
    }
    PortRef cur = chain_.back();
    for (;;) {
      PortRef nxt = st.peer_at(cur);
      ++st.stats.walkSteps;
      Agent& b = st.at(nxt.agent);
      if (nxt.port == 0) {
        if (cur.agent == st.interfaceId && b.kind == AgentKind::Atom)
          return {NeededResult::Kind::TerminalAtom, cur.agent, nxt.agent,
                  b.atom, {}};
        return {NeededResult::Kind::Pair, cur.agent, nxt.agent, nullptr, {}};
      }
      if (b.inChain)
        return {NeededResult::Kind::Cycle, kNoAgent, kNoAgent, nullptr,
                "walk revisited " + agent_desc(st, nxt.agent)};
      b.inChain = true;
      chain_.push_back({nxt.agent, 0});
      cur = chain_.back();
    }
  }

  void on_rule_applied() { chain_.pop_back(); }

 private:
  std::vector<PortRef> chain_;
};

}  // namespace

RunOutcome run(NetState& st, const RunOptions& opt) {
  require(st.interfaceId != kNoAgent && st.at(st.interfaceId).alive,
          "net has no interface");
  Walker walker(st);
  std::uint64_t used = 0;
  for (;;) {
    NeededResult need = walker.advance(st);
    if (opt.verifyWalk) {
      NeededResult fresh = find_needed(st);
      require(fresh.kind == need.kind && fresh.demand == need.demand &&
                  fresh.provider == need.provider,
              "cached walk diverged from a fresh walk");
    }
    if (need.kind == NeededResult::Kind::TerminalAtom) {
      st.stats.residualAgents = st.aliveCount - 2;
      return {RunOutcome::Kind::NormalForm, need.atom, {}, {}, st.stats};
    }
    if (need.kind == NeededResult::Kind::Cycle) {
      st.stats.residualAgents = st.aliveCount;
      return {RunOutcome::Kind::Cycle, nullptr, need.diagnostic, st.snapshot(),
              st.stats};
    }
    if (!rule_for(st, need.demand, need.provider)) {
      st.stats.residualAgents = st.aliveCount;
      return {RunOutcome::Kind::Stuck, nullptr,
              "no interaction rule for " + agent_desc(st, need.demand) +
                  " \xC3\x97 " + agent_desc(st, need.provider),
              st.snapshot(), st.stats};
    }
    if (used == opt.maxInteractions) {
      st.stats.residualAgents = st.aliveCount;
      return {RunOutcome::Kind::FuelExhausted, nullptr,
              "interaction budget exhausted", {}, st.stats};
    }
    apply_rule(st, need);
    ++used;
    walker.on_rule_applied();
    if (opt.validateEachStep) validate(st);
  }
}

const std::vector<std::string>& dump_trace(const NetState& st) {
  static const std::vector<std::string> empty;
  return st.trace ? *st.trace : empty;
}

}  // namespace optlam
