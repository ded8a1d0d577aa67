#include "optlam/net.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

namespace optlam {

int port_count(AgentKind k) {
  switch (k) {
    case AgentKind::Interface:
    case AgentKind::Eraser:
    case AgentKind::Atom:
      return 1;
    case AgentKind::Reader:
      return 2;
    case AgentKind::Lam:
    case AgentKind::App:
    case AgentKind::Fan:
      return 3;
  }
  return 0;
}

std::string_view kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::Interface: return "p";
    case AgentKind::Eraser: return "eraser";
    case AgentKind::Lam: return "lam";
    case AgentKind::App: return "app";
    case AgentKind::Fan: return "fan";
    case AgentKind::Atom: return "atom";
    case AgentKind::Reader: return "reader";
  }
  return "?";
}

TermPtr plug(const Context& ctx, TermPtr t) {
  assert(t);
  for (std::size_t i = ctx.size(); i-- > 0;) {
    const ContextFrame& f = ctx[i];
    if (f.kind == ContextFrame::Kind::UnderLam)
      t = lam(f.binder, std::move(t));
    else
      t = app(f.fun, std::move(t));
  }
  return t;
}

Context extend_lambda(Context ctx, std::string binder) {
  ctx.push_back({ContextFrame::Kind::UnderLam, std::move(binder), nullptr});
  return ctx;
}

std::string context_to_string(const Context& ctx) {
  return to_string(plug(ctx, var("\xE2\x97\xBB")));  // hole marker
}

std::vector<std::tuple<FanId, FanId, FanId>> FanPairTable::sorted_entries() const {
  std::vector<std::tuple<FanId, FanId, FanId>> out;
  out.reserve(map_.size());
  for (const auto& [k, v] : map_)
    out.emplace_back(static_cast<FanId>(k >> 32), static_cast<FanId>(k), v);
  std::sort(out.begin(), out.end());
  return out;
}

int rule_number(Rule r) { return static_cast<int>(r) + 1; }

std::string rule_label(Rule r) { return "R" + std::to_string(rule_number(r)); }

std::uint64_t Stats::interactions() const {
  std::uint64_t total = 0;
  for (auto c : rules) total += c;
  return total;
}

bool operator==(const Stats& a, const Stats& b) {
  return a.rules == b.rules && a.phiInserts == b.phiInserts &&
         a.phiHits == b.phiHits && a.walkSteps == b.walkSteps &&
         a.residualAgents == b.residualAgents;
}

AgentId NetState::add(AgentKind kind) {
  AgentId id;
  if (!freeList.empty()) {
    id = freeList.back();
    freeList.pop_back();
  } else {
    id = static_cast<AgentId>(agents.size());
    agents.emplace_back();
  }
  Agent& a = agents[id];
  a.kind = kind;
  a.alive = true;
  a.inChain = false;
  a.fan = 0;
  a.atom = nullptr;
  a.ctx.clear();
  a.peer.fill(PortRef{});
  ++aliveCount;
  if (kind == AgentKind::Interface) interfaceId = id;
  return id;
}

void NetState::kill(AgentId id) {
  Agent& a = agents[id];
  assert(a.alive);
  a.alive = false;
  a.inChain = false;
  a.atom = nullptr;
  a.ctx.clear();
  a.peer.fill(PortRef{});
  --aliveCount;
  freeList.push_back(id);
}

void NetState::connect(PortRef a, PortRef b) {
  assert(a.agent != kNoAgent && b.agent != kNoAgent);
  agents[a.agent].peer[a.port] = b;
  agents[b.agent].peer[b.port] = a;
}

void NetState::enable_trace() {
  if (!trace) trace.emplace();
}

std::string NetState::snapshot() const {
  // Wire names are assigned in (agent id, port) order of first sighting,
  // so a given net always prints the same way.
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> wire;
  auto wire_id = [&](PortRef p) {
    PortRef q = peer_at(p);
    std::pair<std::uint64_t, std::uint64_t> a{p.agent, p.port};
    std::pair<std::uint64_t, std::uint64_t> b{q.agent, q.port};
    auto key = std::min(a, b);
    auto [it, fresh] = wire.emplace(key, wire.size());
    (void)fresh;
    return it->second;
  };
  std::ostringstream os;
  auto w = [&](PortRef p) { return "w" + std::to_string(wire_id(p)); };
  if (interfaceId != kNoAgent && agents[interfaceId].alive)
    os << "p = " << w({interfaceId, 0}) << "\n";
  for (AgentId id = 0; id < agents.size(); ++id) {
    const Agent& a = agents[id];
    if (!a.alive || a.kind == AgentKind::Interface) continue;
    os << w({id, 0}) << " = ";
    switch (a.kind) {
      case AgentKind::Eraser:
        os << "eraser";
        break;
      case AgentKind::Atom:
        os << "atom{" << to_string(a.atom) << "}";
        break;
      case AgentKind::Reader:
        os << "reader{" << context_to_string(a.ctx) << "}(" << w({id, 1}) << ")";
        break;
      case AgentKind::Lam:
        os << "lam(" << w({id, 1}) << ", " << w({id, 2}) << ")";
        break;
      case AgentKind::App:
        os << "app(" << w({id, 1}) << ", " << w({id, 2}) << ")";
        break;
      case AgentKind::Fan:
        os << "fan_" << a.fan << "(" << w({id, 1}) << ", " << w({id, 2}) << ")";
        break;
      case AgentKind::Interface:
        break;
    }
    os << "\n";
  }
  return os.str();
}

std::string NetState::phi_dump() const {
  std::ostringstream os;
  for (const auto& [i, j, v] : phi.sorted_entries())
    os << "(" << i << "," << j << ") \xE2\x86\xA6 " << v << "\n";
  return os.str();
}

std::string fresh_binder(NetState& st) {
  return st.binderPrefix + std::to_string(st.freshBinders++);
}

void validate(const NetState& st) {
  auto fail = [](const std::string& msg) { throw std::logic_error(msg); };
  std::size_t alive = 0;
  std::size_t interfaces = 0;
  for (AgentId id = 0; id < st.agents.size(); ++id) {
    const Agent& a = st.agents[id];
    if (!a.alive) continue;
    ++alive;
    if (a.kind == AgentKind::Interface) ++interfaces;
    if (a.kind == AgentKind::Fan && (a.fan == 0 || a.fan > st.fanCount))
      fail("fan id out of range");
    int n = port_count(a.kind);
    for (int p = 0; p < n; ++p) {
      PortRef q = a.peer[p];
      if (q.agent == kNoAgent || q.agent >= st.agents.size())
        fail("port wired to nothing");
      const Agent& b = st.agents[q.agent];
      if (!b.alive) fail("port wired to a dead agent");
      if (q.port >= port_count(b.kind)) fail("port index out of range");
      if (b.peer[q.port] != PortRef{id, static_cast<std::uint8_t>(p)})
        fail("wire endpoints disagree");
    }
  }
  if (alive != st.aliveCount) fail("alive count drifted");
  if (interfaces != 1) fail("expected exactly one interface");
}

}  // namespace optlam
