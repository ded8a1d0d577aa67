#include "optlam/oracle.hpp"

#include <cassert>
#include <vector>

namespace optlam {

namespace {

struct Ctl {
  std::uint64_t fuel;
  std::uint64_t sizeLimit;
  std::uint64_t steps = 0;
  bool exhausted = false;
};

// Reduces the head until it is no longer a beta redex, rebuilding the
// surrounding applications. Uses an explicit spine so reduction depth is
// independent of the call stack.
TermPtr whnf(TermPtr t, Ctl& c) {
  std::vector<TermPtr> args;
  std::uint64_t pending = 0;  // combined size of the queued argument spine
  for (;;) {
    if (t->kind == Term::Kind::App) {
      pending += t->sub1->size + 1;
      args.push_back(t->sub1);
      t = t->sub0;
      continue;
    }
    if (t->kind == Term::Kind::Lam && !args.empty()) {
      if (c.steps == c.fuel) {
        c.exhausted = true;
        break;
      }
      ++c.steps;
      std::uint64_t budget = c.sizeLimit;
      TermPtr next = substitute_bounded(t->sub0, t->name, args.back(), budget);
      if (!next) {
        c.exhausted = true;
        break;
      }
      pending -= args.back()->size + 1;
      args.pop_back();
      // the size bound applies to the whole pending term, spine included
      if (pending > c.sizeLimit || next->size > c.sizeLimit - pending) {
        c.exhausted = true;
        t = std::move(next);
        break;
      }
      t = std::move(next);
      continue;
    }
    break;
  }
  for (std::size_t i = args.size(); i-- > 0;) t = app(std::move(t), args[i]);
  return t;
}

}  // namespace

OracleOutcome normalize_normal_order(const TermPtr& term, std::uint64_t fuel,
                                     std::uint64_t sizeLimit) {
  assert(term);
  Ctl c{fuel, sizeLimit};
  struct Frame {
    std::uint8_t op;  // 0 eval, 1 close Lam, 2 close App
    TermPtr t;
    std::string binder;
  };
  std::vector<Frame> stack;
  std::vector<TermPtr> vals;
  stack.push_back({0, term, {}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    switch (f.op) {
      case 0: {
        TermPtr t = whnf(std::move(f.t), c);
        if (c.exhausted) return {false, nullptr, c.steps};
        switch (t->kind) {
          case Term::Kind::Var:
          case Term::Kind::MarkedVar:
            vals.push_back(std::move(t));
            break;
          case Term::Kind::Lam:
            stack.push_back({1, nullptr, t->name});
            stack.push_back({0, t->sub0, {}});
            break;
          case Term::Kind::App:
            // head is not an abstraction here, so both parts normalize
            // independently, function first
            stack.push_back({2, nullptr, {}});
            stack.push_back({0, t->sub1, {}});
            stack.push_back({0, t->sub0, {}});
            break;
        }
        break;
      }
      case 1: {
        TermPtr b = std::move(vals.back());
        vals.pop_back();
        vals.push_back(lam(std::move(f.binder), std::move(b)));
        break;
      }
      case 2: {
        TermPtr a = std::move(vals.back());
        vals.pop_back();
        TermPtr fn = std::move(vals.back());
        vals.pop_back();
        vals.push_back(app(std::move(fn), std::move(a)));
        break;
      }
    }
  }
  assert(vals.size() == 1);
  return {true, std::move(vals.back()), c.steps};
}

}  // namespace optlam
