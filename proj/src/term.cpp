#include "optlam/term.hpp"

#include <cassert>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace optlam {

namespace {

constexpr std::uint64_t kSizeCap = 1'000'000'000'000'000'000ull;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a >= kSizeCap - b) return kSizeCap;
  return a + b;
}

bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

}  // namespace

Term::~Term() {
  // Steal children whose only owner is this node so destruction never
  // recurses down a long spine.
  std::vector<TermPtr> pending;
  pending.push_back(std::move(sub0));
  pending.push_back(std::move(sub1));
  while (!pending.empty()) {
    TermPtr t = std::move(pending.back());
    pending.pop_back();
    if (t && t.use_count() == 1) {
      auto* node = const_cast<Term*>(t.get());
      pending.push_back(std::move(node->sub0));
      pending.push_back(std::move(node->sub1));
    }
  }
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

TermPtr var(std::string name) {
  assert(is_identifier(name));
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr marked_var(std::string name) {
  assert(is_identifier(name));
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::MarkedVar;
  t->name = std::move(name);
  return t;
}

TermPtr lam(std::string binder, TermPtr body) {
  assert(is_identifier(binder));
  assert(body);
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Lam;
  t->name = std::move(binder);
  t->size = sat_add(1, body->size);
  t->sub0 = std::move(body);
  return t;
}

TermPtr app(TermPtr fun, TermPtr arg) {
  assert(fun && arg);
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->size = sat_add(1, sat_add(fun->size, arg->size));
  t->sub0 = std::move(fun);
  t->sub1 = std::move(arg);
  return t;
}

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)),
      position(pos) {}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Lambda, Dot, LParen, RParen, Ident, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '\\') {
      out.push_back({Token::Kind::Lambda, "\\", i});
      ++i;
      continue;
    }
    // UTF-8 lambda
    if (static_cast<unsigned char>(c) == 0xCE && i + 1 < src.size() &&
        static_cast<unsigned char>(src[i + 1]) == 0xBB) {
      out.push_back({Token::Kind::Lambda, "\xCE\xBB", i});
      i += 2;
      continue;
    }
    if (c == '.') {
      out.push_back({Token::Kind::Dot, ".", i});
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::Kind::LParen, "(", i});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({Token::Kind::RParen, ")", i});
      ++i;
      continue;
    }
    if (ident_char(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_char(src[i])) ++i;
      out.push_back(
          {Token::Kind::Ident, std::string(src.substr(start, i - start)), start});
      continue;
    }
    throw ParseError("unexpected character", i);
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  TermPtr parse_all() {
    TermPtr t = parse_expr();
    if (peek().kind != Token::Kind::End)
      throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  TermPtr parse_expr() {
    if (peek().kind == Token::Kind::Lambda) return parse_lambda();
    TermPtr t = parse_atom_required();
    for (;;) {
      switch (peek().kind) {
        case Token::Kind::Ident:
        case Token::Kind::LParen:
          t = app(std::move(t), parse_atom_required());
          break;
        case Token::Kind::Lambda:
          // trailing abstraction binds as the final argument
          t = app(std::move(t), parse_lambda());
          break;
        default:
          return t;
      }
    }
  }

  TermPtr parse_lambda() {
    take();  // lambda
    if (peek().kind != Token::Kind::Ident)
      throw ParseError("expected binder name", peek().pos);
    std::string binder = take().text;
    if (peek().kind != Token::Kind::Dot)
      throw ParseError("expected '.' after binder", peek().pos);
    take();
    return lam(std::move(binder), parse_expr());
  }

  TermPtr parse_atom_required() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::Ident:
        return var(take().text);
      case Token::Kind::LParen: {
        take();
        TermPtr inner = parse_expr();
        if (peek().kind != Token::Kind::RParen)
          throw ParseError("expected ')'", peek().pos);
        take();
        return inner;
      }
      default:
        throw ParseError("expected a term", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct CanonInfo {
  std::unordered_set<std::string> freeNames;
  std::unordered_map<std::string, int> binderCount;
  std::unordered_set<std::string> taken;  // names no new binder may claim
};

void canon_scan(const TermPtr& t, std::unordered_map<std::string, int>& bound,
                CanonInfo& info) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::MarkedVar:
      if (bound[t->name] == 0) info.freeNames.insert(t->name);
      return;
    case Term::Kind::Lam:
      info.binderCount[t->name]++;
      bound[t->name]++;
      canon_scan(t->sub0, bound, info);
      bound[t->name]--;
      return;
    case Term::Kind::App:
      canon_scan(t->sub0, bound, info);
      canon_scan(t->sub1, bound, info);
      return;
  }
}

using Renaming = std::vector<std::pair<std::string, std::string>>;

const std::string* lookup_renaming(const Renaming& env, const std::string& n) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

TermPtr canon_rebuild(const TermPtr& t, Renaming& env, CanonInfo& info) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::MarkedVar: {
      const std::string* renamed = lookup_renaming(env, t->name);
      if (!renamed || *renamed == t->name) return t;
      return t->kind == Term::Kind::Var ? var(*renamed) : marked_var(*renamed);
    }
    case Term::Kind::Lam: {
      std::string fresh = t->name;
      if (info.taken.count(t->name) == 0 && info.binderCount[t->name] == 1) {
        info.taken.insert(fresh);
      } else {
        for (int k = 1;; ++k) {
          std::string cand = t->name + std::to_string(k);
          if (info.taken.count(cand) == 0 && info.binderCount.count(cand) == 0) {
            fresh = cand;
            break;
          }
        }
        info.taken.insert(fresh);
      }
      env.emplace_back(t->name, fresh);
      TermPtr body = canon_rebuild(t->sub0, env, info);
      env.pop_back();
      if (fresh == t->name && body == t->sub0) return t;
      return lam(std::move(fresh), std::move(body));
    }
    case Term::Kind::App: {
      TermPtr f = canon_rebuild(t->sub0, env, info);
      TermPtr a = canon_rebuild(t->sub1, env, info);
      if (f == t->sub0 && a == t->sub1) return t;
      return app(std::move(f), std::move(a));
    }
  }
  return t;
}

TermPtr canonicalize_binders(const TermPtr& t) {
  CanonInfo info;
  std::unordered_map<std::string, int> bound;
  canon_scan(t, bound, info);
  // Binders that stay must not collide with free names; seed `taken` so a
  // unique binder sharing a free name still gets renamed.
  for (const auto& n : info.freeNames) info.taken.insert(n);
  Renaming env;
  return canon_rebuild(t, env, info);
}

}  // namespace

TermPtr parse(std::string_view text) {
  Parser p(lex(text));
  return canonicalize_binders(p.parse_all());
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string to_string(const TermPtr& term) {
  assert(term);
  enum class Pos : std::uint8_t { Top, Fun, Arg };
  struct Item {
    const Term* t;
    Pos pos;
    const char* lit;
  };
  std::string out;
  std::vector<Item> stack;
  stack.push_back({term.get(), Pos::Top, nullptr});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.lit) {
      out += it.lit;
      continue;
    }
    switch (it.t->kind) {
      case Term::Kind::Var:
      case Term::Kind::MarkedVar:
        out += it.t->name;
        break;
      case Term::Kind::Lam: {
        bool parens = it.pos != Pos::Top;
        if (parens) out += '(';
        out += "\xCE\xBB";
        out += it.t->name;
        out += '.';
        if (parens) stack.push_back({nullptr, Pos::Top, ")"});
        stack.push_back({it.t->sub0.get(), Pos::Top, nullptr});
        break;
      }
      case Term::Kind::App: {
        bool parens = it.pos == Pos::Arg;
        if (parens) out += '(';
        if (parens) stack.push_back({nullptr, Pos::Top, ")"});
        stack.push_back({it.t->sub1.get(), Pos::Arg, nullptr});
        stack.push_back({nullptr, Pos::Top, " "});
        stack.push_back({it.t->sub0.get(), Pos::Fun, nullptr});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

std::vector<std::string> free_vars(const TermPtr& term) {
  assert(term);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, int> bound;
  struct Item {
    const Term* t;
    const std::string* leave;  // when set, closes this binder's scope
  };
  std::vector<Item> stack;
  stack.push_back({term.get(), nullptr});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.leave) {
      bound[*it.leave]--;
      continue;
    }
    switch (it.t->kind) {
      case Term::Kind::Var:
      case Term::Kind::MarkedVar: {
        auto b = bound.find(it.t->name);
        if ((b == bound.end() || b->second == 0) && seen.insert(it.t->name).second)
          out.push_back(it.t->name);
        break;
      }
      case Term::Kind::Lam:
        bound[it.t->name]++;
        stack.push_back({it.t, &it.t->name});
        stack.push_back({it.t->sub0.get(), nullptr});
        break;
      case Term::Kind::App:
        stack.push_back({it.t->sub1.get(), nullptr});
        stack.push_back({it.t->sub0.get(), nullptr});
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alpha equivalence
// ---------------------------------------------------------------------------

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  assert(a && b);
  struct Scope {
    std::unordered_map<std::string, std::vector<std::uint32_t>> levels;
    std::uint32_t depth(const std::string& n) const {
      auto it = levels.find(n);
      if (it == levels.end() || it->second.empty()) return 0;  // 0 = free
      return it->second.back();
    }
  };
  Scope sa, sb;
  std::uint32_t level = 0;
  struct Item {
    const Term* a;
    const Term* b;
    bool close;  // pop one binder from each scope
  };
  std::vector<Item> stack;
  stack.push_back({a.get(), b.get(), false});
  std::vector<std::pair<const std::string*, const std::string*>> binders;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.close) {
      auto [na, nb] = binders.back();
      binders.pop_back();
      sa.levels[*na].pop_back();
      sb.levels[*nb].pop_back();
      --level;
      continue;
    }
    bool varA = it.a->kind == Term::Kind::Var || it.a->kind == Term::Kind::MarkedVar;
    bool varB = it.b->kind == Term::Kind::Var || it.b->kind == Term::Kind::MarkedVar;
    if (varA || varB) {
      if (!varA || !varB) return false;
      std::uint32_t da = sa.depth(it.a->name);
      std::uint32_t db = sb.depth(it.b->name);
      if (da != db) return false;
      if (da == 0 && it.a->name != it.b->name) return false;
      continue;
    }
    if (it.a->kind != it.b->kind) return false;
    if (it.a->kind == Term::Kind::Lam) {
      ++level;
      sa.levels[it.a->name].push_back(level);
      sb.levels[it.b->name].push_back(level);
      binders.emplace_back(&it.a->name, &it.b->name);
      stack.push_back({it.a, it.b, true});
      stack.push_back({it.a->sub0.get(), it.b->sub0.get(), false});
    } else {  // App
      stack.push_back({it.a->sub1.get(), it.b->sub1.get(), false});
      stack.push_back({it.a->sub0.get(), it.b->sub0.get(), false});
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

std::unordered_set<std::string> free_var_set(const TermPtr& t) {
  auto v = free_vars(t);
  return std::unordered_set<std::string>(v.begin(), v.end());
}

std::string freshen(const std::string& base,
                    const std::unordered_set<std::string>& avoid) {
  std::string cand = base;
  do {
    cand += '\'';
  } while (avoid.count(cand));
  return cand;
}

TermPtr subst_impl(const TermPtr& root, const std::string& x, const TermPtr& r,
                   const std::unordered_set<std::string>& fvR,
                   std::uint64_t& budget) {
  struct Frame {
    std::uint8_t op;  // 0 visit, 1 build App, 2 build Lam
    TermPtr t;        // op 0: node to visit; op 1/2: original node
    std::string binder;
  };
  std::vector<Frame> stack;
  std::vector<TermPtr> vals;
  stack.push_back({0, root, {}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (budget == 0) return nullptr;
    --budget;
    switch (f.op) {
      case 0: {
        const Term& t = *f.t;
        switch (t.kind) {
          case Term::Kind::Var:
          case Term::Kind::MarkedVar:
            vals.push_back(t.name == x ? r : f.t);
            break;
          case Term::Kind::App:
            stack.push_back({1, f.t, {}});
            stack.push_back({0, t.sub1, {}});
            stack.push_back({0, t.sub0, {}});
            break;
          case Term::Kind::Lam: {
            if (t.name == x) {
              vals.push_back(f.t);  // binder shadows the substituted name
              break;
            }
            if (fvR.count(t.name)) {
              // renaming the binder keeps `r`'s free occurrences free
              auto avoid = free_var_set(t.sub0);
              avoid.insert(fvR.begin(), fvR.end());
              avoid.insert(x);
              std::string nb = freshen(t.name, avoid);
              std::unordered_set<std::string> fvNb{nb};
              TermPtr body2 = subst_impl(t.sub0, t.name, var(nb), fvNb, budget);
              if (!body2) return nullptr;
              stack.push_back({2, f.t, nb});
              stack.push_back({0, std::move(body2), {}});
            } else {
              stack.push_back({2, f.t, t.name});
              stack.push_back({0, t.sub0, {}});
            }
            break;
          }
        }
        break;
      }
      case 1: {
        TermPtr a = std::move(vals.back());
        vals.pop_back();
        TermPtr fn = std::move(vals.back());
        vals.pop_back();
        if (fn == f.t->sub0 && a == f.t->sub1)
          vals.push_back(std::move(f.t));
        else
          vals.push_back(app(std::move(fn), std::move(a)));
        break;
      }
      case 2: {
        TermPtr b = std::move(vals.back());
        vals.pop_back();
        if (b == f.t->sub0 && f.binder == f.t->name)
          vals.push_back(std::move(f.t));
        else
          vals.push_back(lam(std::move(f.binder), std::move(b)));
        break;
      }
    }
  }
  assert(vals.size() == 1);
  return std::move(vals.back());
}

}  // namespace

TermPtr substitute(const TermPtr& term, const std::string& name,
                   const TermPtr& replacement) {
  assert(term && replacement);
  std::uint64_t budget = ~0ull;
  return subst_impl(term, name, replacement, free_var_set(replacement), budget);
}

TermPtr substitute_bounded(const TermPtr& term, const std::string& name,
                           const TermPtr& replacement, std::uint64_t& budget) {
  assert(term && replacement);
  return subst_impl(term, name, replacement, free_var_set(replacement), budget);
}

}  // namespace optlam
