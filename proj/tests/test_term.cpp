#include <string>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "optlam/rand_term.hpp"
#include "optlam/term.hpp"

using namespace optlam;

namespace {
const std::string kLam = "\xCE\xBB";  // UTF-8 lambda
}

TEST_CASE("parse identity") {
  TermPtr t = parse("\\x.x");
  REQUIRE(t->kind == Term::Kind::Lam);
  CHECK(t->name == "x");
  REQUIRE(t->body()->kind == Term::Kind::Var);
  CHECK(t->body()->name == "x");
  CHECK(to_string(t) == kLam + "x.x");
}

TEST_CASE("parse application is left associative") {
  TermPtr t = parse("f x y");
  REQUIRE(t->kind == Term::Kind::App);
  CHECK(t->arg()->name == "y");
  REQUIRE(t->fun()->kind == Term::Kind::App);
  CHECK(t->fun()->fun()->name == "f");
  CHECK(t->fun()->arg()->name == "x");
}

TEST_CASE("parse canonicalizes shadowed binders to distinct names") {
  TermPtr t = parse("\\x.\\x.x");
  REQUIRE(t->kind == Term::Kind::Lam);
  CHECK(t->name == "x1");
  REQUIRE(t->body()->kind == Term::Kind::Lam);
  CHECK(t->body()->name == "x2");
  CHECK(t->body()->body()->name == "x2");
}

TEST_CASE("parse keeps free names verbatim and renames colliding binders") {
  // the binder x would collide with the free occurrence of x in the argument
  TermPtr t = parse("(\\x.x) x");
  CHECK(free_vars(t) == std::vector<std::string>{"x"});
  CHECK(t->arg()->name == "x");
  CHECK(t->fun()->name != "x");
  // binders unique and collision-free keep their names
  CHECK(to_string(parse("\\a.\\b.a b")) == kLam + "a." + kLam + "b.a b");
}

TEST_CASE("parse accepts the unicode lambda and lambda-as-last-argument") {
  CHECK(alpha_eq(parse(kLam + "x.x"), parse("\\x.x")));
  // a trailing abstraction binds as the final argument
  TermPtr t = parse("f \\x.x");
  REQUIRE(t->kind == Term::Kind::App);
  CHECK(t->fun()->name == "f");
  CHECK(t->arg()->kind == Term::Kind::Lam);
}

TEST_CASE("parse reports syntax errors with a position") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("(\\x.x"), ParseError);
  CHECK_THROWS_AS(parse("\\x"), ParseError);
  CHECK_THROWS_AS(parse("\\.x"), ParseError);
  CHECK_THROWS_AS(parse("x )"), ParseError);
  CHECK_THROWS_AS(parse("x $ y"), ParseError);
  try {
    parse("x $");
  } catch (const ParseError& e) {
    CHECK(e.position == 2);
  }
}

TEST_CASE("print inserts minimal parentheses") {
  CHECK(to_string(lam("x", var("x"))) == kLam + "x.x");
  CHECK(to_string(app(var("f"), app(var("x"), var("y")))) == "f (x y)");
  CHECK(to_string(app(app(var("f"), var("x")), var("y"))) == "f x y");
  CHECK(to_string(app(lam("x", var("x")), var("y"))) ==
        "(" + kLam + "x.x) y");
  CHECK(to_string(lam("x", app(var("x"), var("x")))) == kLam + "x.x x");
}

TEST_CASE("print renders marked variables as bare names") {
  CHECK(to_string(marked_var("y")) == "y");
  CHECK(to_string(app(var("x"), marked_var("y"))) == "x y");
}

TEST_CASE("free_vars in first-occurrence order") {
  CHECK(free_vars(parse("\\x.x")).empty());
  CHECK(free_vars(parse("\\x.x y")) == std::vector<std::string>{"y"});
  CHECK(free_vars(parse("(x y) x")) == std::vector<std::string>{"x", "y"});
  CHECK(free_vars(app(marked_var("b"), var("a"))) ==
        std::vector<std::string>{"b", "a"});
}

TEST_CASE("alpha_eq compares modulo bound names") {
  CHECK(alpha_eq(parse("\\x.x"), parse("\\y.y")));
  CHECK_FALSE(alpha_eq(parse("\\x.y"), parse("\\x.z")));
  CHECK(alpha_eq(parse("\\x.\\y.x"), parse("\\a.\\b.a")));
  CHECK_FALSE(alpha_eq(parse("\\x.\\y.x"), parse("\\a.\\b.b")));
  CHECK_FALSE(alpha_eq(parse("\\x.x"), parse("\\x.x x")));
  // marks are ignored
  CHECK(alpha_eq(marked_var("y"), var("y")));
  CHECK(alpha_eq(lam("x", app(var("x"), marked_var("u"))),
                 lam("q", app(var("q"), var("u")))));
  // a bound occurrence never equals a free one
  CHECK_FALSE(alpha_eq(lam("x", var("x")), lam("x", var("y"))));
}

TEST_CASE("substitute replaces free occurrences") {
  TermPtr t = substitute(var("x"), "x", parse("\\z.z"));
  CHECK(to_string(t) == kLam + "z.z");
}

TEST_CASE("substitute avoids capture by renaming the binder") {
  // (\x.y)[y := x] must not let the binder capture the new x
  TermPtr t = substitute(lam("x", var("y")), "y", var("x"));
  CHECK(to_string(t) == kLam + "x'.x");
  CHECK(alpha_eq(t, lam("q", var("x"))));
}

TEST_CASE("substitute leaves bound occurrences untouched") {
  TermPtr id = lam("x", var("x"));
  TermPtr t = substitute(id, "x", var("y"));
  CHECK(alpha_eq(t, id));
  CHECK(to_string(t) == kLam + "x.x");
}

TEST_CASE("substitute under nested potential capture") {
  // (\x.\x'.x x' y)[y := x x'] needs two renames to stay capture-free
  TermPtr body = app(app(var("x"), var("x'")), var("y"));
  TermPtr t = lam("x", lam("x'", body));
  TermPtr r = app(var("x"), var("x'"));
  TermPtr got = substitute(t, "y", r);
  CHECK(alpha_eq(got, parse("\\a.\\b.a b (x x')")));
  auto fv = free_vars(got);
  std::unordered_set<std::string> fvSet(fv.begin(), fv.end());
  CHECK(fvSet == std::unordered_set<std::string>{"x", "x'"});
}

TEST_CASE("substitute_bounded gives up when the budget runs out") {
  TermPtr t = parse("\\a.\\b.a (a (a b))");
  std::uint64_t tiny = 2;
  CHECK(substitute_bounded(t, "q", var("r"), tiny) == nullptr);
  std::uint64_t plenty = 1000;
  TermPtr same = substitute_bounded(t, "q", var("r"), plenty);
  REQUIRE(same != nullptr);
  CHECK(alpha_eq(same, t));
  CHECK(plenty < 1000);  // visits were charged
}

TEST_CASE("term size counts constructors") {
  CHECK(term_size(var("x")) == 1);
  CHECK(term_size(parse("\\x.x")) == 2);
  CHECK(term_size(parse("(\\x.x x) y")) == 6);
}

TEST_CASE("round-trip property: parse(print(t)) is alpha-equal to t") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    TermPtr t = gen_random_term(seed, 30);
    CAPTURE(seed);
    CHECK(alpha_eq(parse(to_string(t)), t));
  }
}

TEST_CASE("substitution bounds free variables of the result") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    TermPtr closed = gen_random_term(seed, 25);
    REQUIRE(closed->kind == Term::Kind::Lam);
    // opening the top binder yields a term with (at most) one free name
    TermPtr t = closed->body();
    std::string x = closed->name;
    TermPtr s = gen_random_term(seed + 5000, 12);
    TermPtr got = substitute(t, x, s);

    std::unordered_set<std::string> allowed;
    for (const auto& n : free_vars(t))
      if (n != x) allowed.insert(n);
    for (const auto& n : free_vars(s)) allowed.insert(n);
    for (const auto& n : free_vars(got)) {
      CAPTURE(seed);
      CAPTURE(n);
      CHECK(allowed.count(n) == 1);
    }
  }
}

TEST_CASE("alpha_eq is an equivalence relation on random terms") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    TermPtr a = gen_random_term(seed, 25);
    TermPtr b = parse(to_string(a));
    TermPtr c = parse(to_string(b));
    CAPTURE(seed);
    CHECK(alpha_eq(a, a));
    CHECK(alpha_eq(a, b));
    CHECK(alpha_eq(b, a));
    CHECK((alpha_eq(a, b) && alpha_eq(b, c)));
    CHECK(alpha_eq(a, c));
  }
}

TEST_CASE("deep terms survive print, compare and destruction") {
  TermPtr t = var("x");
  for (int i = 0; i < 100000; ++i) t = lam("x", std::move(t));
  TermPtr u = var("y");
  for (int i = 0; i < 100000; ++i) u = lam("y", std::move(u));
  CHECK(to_string(t).size() > 100000);
  CHECK(free_vars(t).empty());
  CHECK(alpha_eq(t, u));
  TermPtr spine = var("z");
  for (int i = 0; i < 100000; ++i) spine = app(std::move(spine), var("z"));
  CHECK(free_vars(spine) == std::vector<std::string>{"z"});
  // the deep chains go out of scope here; iterative release must not crash
}
