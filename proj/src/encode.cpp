#include "optlam/encode.hpp"

#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace optlam {

namespace {

TermPtr mark_impl(const TermPtr& t, std::unordered_map<std::string, int>& bound) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = bound.find(t->name);
      if (it != bound.end() && it->second > 0) return t;
      return marked_var(t->name);
    }
    case Term::Kind::MarkedVar:
      throw std::logic_error("term already carries marks");
    case Term::Kind::Lam: {
      bound[t->name]++;
      TermPtr body = mark_impl(t->sub0, bound);
      bound[t->name]--;
      return body == t->sub0 ? t : lam(t->name, std::move(body));
    }
    case Term::Kind::App: {
      TermPtr f = mark_impl(t->sub0, bound);
      TermPtr a = mark_impl(t->sub1, bound);
      if (f == t->sub0 && a == t->sub1) return t;
      return app(std::move(f), std::move(a));
    }
  }
  return t;
}

// Plain (unmarked) variable occurrences that are free in `t`, in
// first-occurrence order. Marked occurrences are constants by the time the
// translation runs, so they never share through fans.
void plain_frees(const TermPtr& t, std::unordered_map<std::string, int>& bound,
                 std::vector<std::string>& order,
                 std::unordered_set<std::string>& seen) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = bound.find(t->name);
      if ((it == bound.end() || it->second == 0) && seen.insert(t->name).second)
        order.push_back(t->name);
      return;
    }
    case Term::Kind::MarkedVar:
      return;
    case Term::Kind::Lam:
      bound[t->name]++;
      plain_frees(t->sub0, bound, order, seen);
      bound[t->name]--;
      return;
    case Term::Kind::App:
      plain_frees(t->sub0, bound, order, seen);
      plain_frees(t->sub1, bound, order, seen);
      return;
  }
}

std::vector<std::string> plain_frees(const TermPtr& t) {
  std::unordered_map<std::string, int> bound;
  std::vector<std::string> order;
  std::unordered_set<std::string> seen;
  plain_frees(t, bound, order, seen);
  return order;
}

}  // namespace

TermPtr mark_free(const TermPtr& term) {
  assert(term);
  std::unordered_map<std::string, int> bound;
  return mark_impl(term, bound);
}

int NetBuilder::fresh_wire() {
  int id = static_cast<int>(parent_.size());
  parent_.push_back(id);
  end_.emplace_back();
  return id;
}

int NetBuilder::find(int w) {
  while (parent_[w] != w) {
    parent_[w] = parent_[parent_[w]];
    w = parent_[w];
  }
  return w;
}

void NetBuilder::attach(int wire, PortRef port) {
  int r = find(wire);
  if (end_[r]) {
    st_.connect(port, *end_[r]);
    end_[r].reset();
  } else {
    end_[r] = port;
  }
}

void NetBuilder::alias(int a, int b) {
  int ra = find(a);
  int rb = find(b);
  if (ra == rb) throw std::logic_error("wire aliased to itself");
  parent_[ra] = rb;
  if (end_[ra] && end_[rb]) {
    st_.connect(*end_[ra], *end_[rb]);
    end_[ra].reset();
    end_[rb].reset();
  } else if (end_[ra]) {
    end_[rb] = *end_[ra];
    end_[ra].reset();
  }
}

void NetBuilder::bind(const std::string& name, int wire) {
  env_[name].push_back(wire);
}

void NetBuilder::translate(const TermPtr& term, int wire) {
  switch (term->kind) {
    case Term::Kind::MarkedVar: {
      AgentId a = st_.add(AgentKind::Atom);
      st_.at(a).atom = var(term->name);
      attach(wire, {a, 0});
      return;
    }
    case Term::Kind::Var: {
      auto it = env_.find(term->name);
      if (it == env_.end() || it->second.empty())
        throw std::logic_error("unbound variable in translation: " + term->name);
      alias(it->second.back(), wire);
      return;
    }
    case Term::Kind::Lam: {
      AgentId l = st_.add(AgentKind::Lam);
      attach(wire, {l, 0});
      int binderWire = fresh_wire();
      attach(binderWire, {l, 1});
      int bodyWire = fresh_wire();
      attach(bodyWire, {l, 2});
      bool used = false;
      for (const auto& n : plain_frees(term->sub0))
        if (n == term->name) {
          used = true;
          break;
        }
      if (!used) {
        AgentId e = st_.add(AgentKind::Eraser);
        attach(binderWire, {e, 0});
        translate(term->sub0, bodyWire);
      } else {
        env_[term->name].push_back(binderWire);
        translate(term->sub0, bodyWire);
        env_[term->name].pop_back();
      }
      return;
    }
    case Term::Kind::App: {
      AgentId a = st_.add(AgentKind::App);
      int funWire = fresh_wire();
      attach(funWire, {a, 0});
      attach(wire, {a, 1});
      int argWire = fresh_wire();
      attach(argWire, {a, 2});

      // names used by both sides split here, one fan per name
      std::unordered_set<std::string> inArg;
      for (const auto& n : plain_frees(term->sub1)) inArg.insert(n);
      std::vector<std::string> shared;
      for (const auto& n : plain_frees(term->sub0))
        if (inArg.count(n)) shared.push_back(n);

      std::vector<int> funSide(shared.size()), argSide(shared.size());
      for (std::size_t k = 0; k < shared.size(); ++k) {
        auto it = env_.find(shared[k]);
        if (it == env_.end() || it->second.empty())
          throw std::logic_error("unbound variable in translation: " + shared[k]);
        AgentId fan = st_.add(AgentKind::Fan);
        fans_.push_back(fan);
        attach(it->second.back(), {fan, 0});
        argSide[k] = fresh_wire();
        attach(argSide[k], {fan, 1});
        funSide[k] = fresh_wire();
        attach(funSide[k], {fan, 2});
      }

      for (std::size_t k = 0; k < shared.size(); ++k)
        env_[shared[k]].push_back(funSide[k]);
      translate(term->sub0, funWire);
      for (std::size_t k = 0; k < shared.size(); ++k)
        env_[shared[k]].pop_back();

      for (std::size_t k = 0; k < shared.size(); ++k)
        env_[shared[k]].push_back(argSide[k]);
      translate(term->sub1, argWire);
      for (std::size_t k = 0; k < shared.size(); ++k)
        env_[shared[k]].pop_back();
      return;
    }
  }
}

void NetBuilder::finish() {
  for (std::size_t k = 0; k < fans_.size(); ++k)
    st_.at(fans_[k]).fan = static_cast<FanId>(k + 1);
  st_.fanCount = fans_.size();
  for (std::size_t w = 0; w < parent_.size(); ++w)
    if (parent_[w] == static_cast<int>(w) && end_[w])
      throw std::logic_error("dangling wire after translation");
}

NetState build_initial(const TermPtr& term) {
  assert(term);
  NetState st;
  AgentId p = st.add(AgentKind::Interface);
  AgentId r = st.add(AgentKind::Reader);
  st.connect({r, 1}, {p, 0});

  NetBuilder b(st);
  int root = b.fresh_wire();
  b.attach(root, {r, 0});
  b.translate(mark_free(term), root);
  b.finish();

  // keep minted read-back binders clear of the term's own free names
  auto frees = free_vars(term);
  auto clashes = [&](const std::string& prefix) {
    for (const auto& n : frees) {
      if (n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0)
        continue;
      bool digits = true;
      for (std::size_t i = prefix.size(); i < n.size(); ++i)
        if (n[i] < '0' || n[i] > '9') {
          digits = false;
          break;
        }
      if (digits) return true;
    }
    return false;
  };
  while (clashes(st.binderPrefix)) st.binderPrefix += 'y';
  return st;
}

}  // namespace optlam
