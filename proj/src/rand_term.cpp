#include "optlam/rand_term.hpp"

#include <random>
#include <string>
#include <vector>

namespace optlam {

namespace {

// std::mt19937_64 output is fully specified by the standard; raw modulo keeps
// the mapping to choices platform-independent (std::uniform_int_distribution
// is not portable across library implementations).
struct Gen {
  std::mt19937_64 rng;
  std::vector<std::string> scope;
  std::uint64_t nextBinder = 0;

  std::uint64_t pick(std::uint64_t n) { return rng() % n; }

  std::string fresh() { return "v" + std::to_string(nextBinder++); }

  // budget = maximum number of constructors for this subtree (>= 1)
  TermPtr emit(std::uint64_t budget) {
    if (budget >= 2 && scope.empty()) return emit_lam(budget);
    if (budget == 1) return var(scope[pick(scope.size())]);
    std::uint64_t roll = pick(100);
    if (roll < 40 && budget >= 4) {
      // application of an abstraction: a guaranteed redex
      std::uint64_t funBudget = 2 + pick(budget - 3);  // [2, budget-2]
      TermPtr f = emit_lam(funBudget);
      TermPtr a = emit(budget - 1 - funBudget);
      return app(std::move(f), std::move(a));
    }
    if (roll < 65 && budget >= 3) {
      std::uint64_t funBudget = 1 + pick(budget - 2);  // [1, budget-2]
      TermPtr f = emit(funBudget);
      TermPtr a = emit(budget - 1 - funBudget);
      return app(std::move(f), std::move(a));
    }
    if (roll < 85) return emit_lam(budget);
    return var(scope[pick(scope.size())]);
  }

  TermPtr emit_lam(std::uint64_t budget) {
    std::string binder = fresh();
    scope.push_back(binder);
    TermPtr body = emit(budget - 1);
    scope.pop_back();
    return lam(std::move(binder), std::move(body));
  }
};

}  // namespace

TermPtr gen_random_term(std::uint64_t seed, std::uint64_t maxSize) {
  Gen g{std::mt19937_64(seed), {}, 0};
  return g.emit(maxSize < 2 ? 2 : maxSize);
}

}  // namespace optlam
