#include <vector>

#include "doctest.h"
#include "optlam/encode.hpp"
#include "optlam/harness.hpp"
#include "optlam/net.hpp"
#include "optlam/rand_term.hpp"
#include "optlam/term.hpp"

using namespace optlam;

namespace {

std::vector<AgentId> alive_of(const NetState& st, AgentKind k) {
  std::vector<AgentId> out;
  for (AgentId id = 0; id < st.agents.size(); ++id)
    if (st.agents[id].alive && st.agents[id].kind == k) out.push_back(id);
  return out;
}

AgentId only(const NetState& st, AgentKind k) {
  auto v = alive_of(st, k);
  REQUIRE(v.size() == 1);
  return v[0];
}

}  // namespace

TEST_CASE("mark_free leaves closed terms unchanged") {
  TermPtr t = parse("\\x.x");
  TermPtr m = mark_free(t);
  CHECK(m == t);  // structurally shared, nothing to mark
}

TEST_CASE("mark_free marks exactly the free occurrences") {
  TermPtr m = mark_free(parse("\\x.x y"));
  REQUIRE(m->kind == Term::Kind::Lam);
  const TermPtr& body = m->body();
  REQUIRE(body->kind == Term::Kind::App);
  CHECK(body->fun()->kind == Term::Kind::Var);
  CHECK(body->arg()->kind == Term::Kind::MarkedVar);
  CHECK(body->arg()->name == "y");

  TermPtr single = mark_free(var("x"));
  CHECK(single->kind == Term::Kind::MarkedVar);
  CHECK(single->name == "x");
}

TEST_CASE("mark_free rejects terms that already carry marks") {
  CHECK_THROWS_AS(mark_free(app(var("x"), marked_var("y"))), std::logic_error);
}

TEST_CASE("translating a marked variable yields a finished atom") {
  NetState st;
  AgentId anchor = st.add(AgentKind::Interface);
  NetBuilder b(st);
  int w = b.fresh_wire();
  b.attach(w, {anchor, 0});
  b.translate(marked_var("x"), w);
  b.finish();

  AgentId a = only(st, AgentKind::Atom);
  CHECK(st.at(a).atom->kind == Term::Kind::Var);
  CHECK(st.at(a).atom->name == "x");
  CHECK(st.at(a).peer[0] == PortRef{anchor, 0});
  CHECK(b.fan_nodes() == 0);
}

TEST_CASE("translating a plain variable aliases its wire to the binding") {
  NetState st;
  AgentId anchor = st.add(AgentKind::Interface);
  AgentId other = st.add(AgentKind::Eraser);
  NetBuilder b(st);
  int bound = b.fresh_wire();
  b.attach(bound, {anchor, 0});
  b.bind("x", bound);
  int w = b.fresh_wire();
  b.attach(w, {other, 0});
  b.translate(var("x"), w);
  b.finish();
  CHECK(st.at(anchor).peer[0] == PortRef{other, 0});
}

TEST_CASE("translating an unbound plain variable is a builder bug") {
  NetState st;
  st.add(AgentKind::Interface);
  NetBuilder b(st);
  int w = b.fresh_wire();
  CHECK_THROWS_AS(b.translate(var("x"), w), std::logic_error);
}

TEST_CASE("initial net of a free variable") {
  NetState st = build_initial(parse("x"));
  CHECK(st.aliveCount == 3);
  AgentId r = only(st, AgentKind::Reader);
  AgentId a = only(st, AgentKind::Atom);
  CHECK(st.at(r).ctx.empty());
  CHECK(st.at(r).peer[0] == PortRef{a, 0});           // input reads the atom
  CHECK(st.at(r).peer[1] == PortRef{st.interfaceId, 0});  // output to p
  CHECK(st.at(a).atom->name == "x");
  CHECK(st.fanCount == 0);
  CHECK(st.phi.size() == 0);
  validate(st);
}

TEST_CASE("initial net of the identity self-wires the binder to the body") {
  NetState st = build_initial(parse("\\x.x"));
  CHECK(st.aliveCount == 3);
  AgentId r = only(st, AgentKind::Reader);
  AgentId l = only(st, AgentKind::Lam);
  CHECK(st.at(r).peer[0] == PortRef{l, 0});
  CHECK(st.at(l).peer[1] == PortRef{l, 2});  // binder wired straight to body
  CHECK(st.fanCount == 0);
  validate(st);
}

TEST_CASE("initial net of a self-application has one numbered fan") {
  NetState st = build_initial(parse("\\x.x x"));
  CHECK(st.aliveCount == 5);
  AgentId l = only(st, AgentKind::Lam);
  AgentId a = only(st, AgentKind::App);
  AgentId f = only(st, AgentKind::Fan);
  CHECK(st.fanCount == 1);
  CHECK(st.at(f).fan == 1);
  CHECK(st.at(f).peer[0] == PortRef{l, 1});  // shared side at the binder
  CHECK(st.at(f).peer[1] == PortRef{a, 2});  // first copy feeds the argument
  CHECK(st.at(f).peer[2] == PortRef{a, 0});  // second copy is the function
  CHECK(st.at(a).peer[1] == PortRef{l, 2});  // application root is the body
  validate(st);
}

TEST_CASE("unused binders get an eraser") {
  NetState st = build_initial(parse("\\x.\\y.x"));
  auto lams = alive_of(st, AgentKind::Lam);
  CHECK(lams.size() == 2);
  AgentId e = only(st, AgentKind::Eraser);
  // the eraser hangs off the inner binder
  bool onBinder = false;
  for (AgentId l : lams)
    if (st.at(l).peer[1] == PortRef{e, 0}) onBinder = true;
  CHECK(onBinder);
  validate(st);
}

TEST_CASE("fan count matches the shared-name sum over applications") {
  auto fans = [](const char* src) {
    return build_initial(parse(src)).fanCount;
  };
  CHECK(fans("\\x.x x") == 1);
  CHECK(fans("(\\x.x x) (\\y.y y)") == 2);
  CHECK(fans("\\f.\\x.f (f x)") == 1);
  CHECK(fans("\\s.\\z.s (s (s z))") == 2);
  CHECK(fans("\\f.\\x.(\\d.d (d x)) (\\y.f (f y))") == 2);
  // marked (free) occurrences are constants and never share through fans
  CHECK(fans("(x y) x") == 0);
  CHECK(fans("x x x") == 0);
}

TEST_CASE("fans are numbered in emission order, function before argument") {
  // both binders are shared; the outer application splits d first, then
  // the recursion into its argument splits e
  NetState st = build_initial(parse("(\\d.d d) (\\e.e e)"));
  CHECK(st.fanCount == 2);
  auto fans = alive_of(st, AgentKind::Fan);
  REQUIRE(fans.size() == 2);
  auto lams = alive_of(st, AgentKind::Lam);
  REQUIRE(lams.size() == 2);
  // fan 1 sits under the function's binder, fan 2 under the argument's
  for (AgentId f : fans) {
    PortRef binder = st.at(f).peer[0];
    bool isLamBinder = false;
    for (AgentId l : lams) isLamBinder |= (binder == PortRef{l, 1});
    CHECK(isLamBinder);
  }
  validate(st);
}

TEST_CASE("encoding is invariant under renaming of binders") {
  CHECK(build_initial(parse("\\x.x x")).snapshot() ==
        build_initial(parse("\\q.q q")).snapshot());
  CHECK(build_initial(parse("\\f.\\x.f (f x)")).snapshot() ==
        build_initial(parse("\\g.\\y.g (g y)")).snapshot());
  // free names are part of the net and must show up verbatim
  CHECK(build_initial(parse("x")).snapshot() !=
        build_initial(parse("y")).snapshot());
  // building twice is byte-identical
  CHECK(build_initial(parse("(\\x.x x) z")).snapshot() ==
        build_initial(parse("(\\x.x x) z")).snapshot());
}

TEST_CASE("read-back binder prefix avoids the term's free names") {
  CHECK(build_initial(parse("x")).binderPrefix == "y");
  CHECK(build_initial(parse("y0 q")).binderPrefix == "yy");
  CHECK(build_initial(parse("y12")).binderPrefix == "yy");
  // a bare 'y' cannot collide with y0, y1, ...
  CHECK(build_initial(parse("y")).binderPrefix == "y");
  // 'yy3' is not 'y' + digits, so the single-y namespace is already safe
  CHECK(build_initial(parse("yy3")).binderPrefix == "y");
  // each escalation re-checks every free name
  CHECK(build_initial(parse("y1 yy2")).binderPrefix == "yyy");
}

TEST_CASE("every built net is linear and has one interface") {
  for (const auto& c : corpus()) validate(build_initial(c.term));
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    validate(build_initial(gen_random_term(seed, 25)));
}

TEST_CASE("agent count is linear in term size") {
  auto check_bound = [](const TermPtr& t) {
    NetState st = build_initial(t);
    CHECK(st.aliveCount <= 4 * term_size(t));
  };
  for (const auto& c : corpus()) check_bound(c.term);
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    check_bound(gen_random_term(seed, 25));
}
