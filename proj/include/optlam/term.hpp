#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace optlam {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable lambda-term node. Subterms are shared freely; never mutate
/// a node after construction.
struct Term {
  enum class Kind : std::uint8_t { Var, MarkedVar, Lam, App };

  Kind kind = Kind::Var;
  std::string name;  // Var/MarkedVar: variable name; Lam: binder name
  TermPtr sub0;      // Lam: body; App: function
  TermPtr sub1;      // App: argument
  std::uint64_t size = 1;  // constructor count, saturating

  const TermPtr& body() const { return sub0; }
  const TermPtr& fun() const { return sub0; }
  const TermPtr& arg() const { return sub1; }

  ~Term();  // releases deep chains iteratively
};

TermPtr var(std::string name);
TermPtr marked_var(std::string name);
TermPtr lam(std::string binder, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);

inline std::uint64_t term_size(const TermPtr& t) { return t ? t->size : 0; }

/// Names are nonempty strings over [A-Za-z0-9_'].
bool is_identifier(std::string_view s);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos);
};

/// Parses `\x.M` / `λx.M`, juxtaposition (left-associative) and parentheses.
/// Binders are canonicalized so that all binders are pairwise distinct and
/// distinct from every free name: a binder keeps its name when it is unique
/// and collision-free, otherwise each occurrence is renamed base+counter
/// (x, x -> x1, x2) in pre-order. Free names are kept verbatim.
TermPtr parse(std::string_view text);

/// Minimal-parentheses rendering; marked variables print as their bare name.
std::string to_string(const TermPtr& term);

/// Unbound names (Var and MarkedVar alike) in first-occurrence order.
std::vector<std::string> free_vars(const TermPtr& term);

/// Equality up to renaming of bound variables; free names compare verbatim;
/// marks are ignored.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

/// Capture-avoiding substitution of `replacement` for free `name`. Binders
/// that would capture are renamed by appending apostrophes.
TermPtr substitute(const TermPtr& term, const std::string& name,
                   const TermPtr& replacement);

/// Bounded variant used by the normalizer: gives up and returns nullptr once
/// `budget` node visits/constructions are spent.
TermPtr substitute_bounded(const TermPtr& term, const std::string& name,
                           const TermPtr& replacement, std::uint64_t& budget);

}  // namespace optlam
