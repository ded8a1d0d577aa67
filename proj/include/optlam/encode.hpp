#pragma once

#include "optlam/net.hpp"
#include "optlam/term.hpp"

namespace optlam {

/// Marks every free variable occurrence so the translation turns it into a
/// finished constant. Throws std::logic_error if the input already carries
/// marks.
TermPtr mark_free(const TermPtr& term);

/// Wiring helper for the term translation. Wires are created unbound, may be
/// aliased together, and complete once both endpoints are known.
class NetBuilder {
 public:
  explicit NetBuilder(NetState& st) : st_(st) {}

  int fresh_wire();
  void attach(int wire, PortRef port);
  void alias(int a, int b);

  /// Translates a marked term whose root lives on `wire`. Plain variables
  /// must be bound (either by an enclosing binder or by a prior bind()).
  /// Shared variables split through fan nodes placed at the innermost
  /// application containing both uses, function side on the second copy.
  void translate(const TermPtr& term, int wire);

  /// Binds a name for translate() without an enclosing Lam (testing hook).
  void bind(const std::string& name, int wire);

  std::size_t fan_nodes() const { return fans_.size(); }

  /// Numbers fan nodes 1..n in emission order and checks every wire got two
  /// endpoints. Call exactly once, after the last translate().
  void finish();

 private:
  int find(int w);

  NetState& st_;
  std::vector<int> parent_;
  std::vector<std::optional<PortRef>> end_;
  std::vector<AgentId> fans_;
  std::unordered_map<std::string, std::vector<int>> env_;
};

/// Net for a full run: interface, root reader with an empty context, and the
/// translation of the term with its free variables marked. Fan ids are
/// numbered from 1; the read-back binder prefix avoids the term's free names.
NetState build_initial(const TermPtr& term);

}  // namespace optlam
