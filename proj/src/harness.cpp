#include "optlam/harness.hpp"

#include <cassert>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "optlam/encode.hpp"
#include "optlam/rand_term.hpp"

namespace optlam {

TermPtr church(unsigned n) {
  TermPtr body = var("z");
  for (unsigned i = 0; i < n; ++i) body = app(var("s"), std::move(body));
  return lam("s", lam("z", std::move(body)));
}

TermPtr church_add() {
  return parse("\\m.\\n.\\s.\\z. m s (n s z)");
}

TermPtr church_mul() {
  return parse("\\m.\\n.\\s.\\z. m (n s) z");
}

TermPtr church_exp() {
  return parse("\\m.\\n. n m");
}

std::vector<CorpusCase> corpus() {
  std::vector<CorpusCase> out;
  auto add2 = [](const TermPtr& op, unsigned a, unsigned b) {
    return app(app(op, church(a)), church(b));
  };
  struct Op {
    const char* name;
    TermPtr term;
  };
  const Op ops[] = {
      {"add", church_add()}, {"mul", church_mul()}, {"exp", church_exp()}};
  for (const Op& op : ops)
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; b <= 3; ++b)
        out.push_back({std::string(op.name) + "_" + std::to_string(a) + "_" +
                           std::to_string(b),
                       add2(op.term, a, b)});

  auto named = [&](const char* name, const char* src) {
    out.push_back({name, parse(src)});
  };
  named("ident", "\\x.x");
  named("var_free", "x");
  named("ident_app", "(\\z.z) x");
  named("app_free", "x y");
  named("app_free_shared", "(x y) x");
  named("k_discard", "(\\x.\\y.x) a b");
  named("k_discard_inner", "(\\x.\\y.y) a b");
  named("self_apply_id", "(\\x.x x) (\\y.y)");
  named("self_apply_c2", "(\\x.x x) (\\s.\\z.s (s z))");
  named("shared_redex", "(\\x.x x) ((\\y.y) (\\w.w))");
  named("shared_under_lam", "\\a.(\\x.x (x a)) (\\y.y)");
  named("discard_redex", "(\\x.\\y.y) ((\\d.d d) (\\e.e)) b");
  named("nested_share", "\\f.\\x.(\\d.d (d x)) (\\y.f (f y))");
  out.push_back({"c2_c2", app(church(2), church(2))});
  out.push_back({"c2_c2_c2", app(app(church(2), church(2)), church(2))});
  return out;
}

std::string_view verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Match: return "Match";
    case Verdict::Kind::Mismatch: return "Mismatch";
    case Verdict::Kind::EngineStuck: return "EngineStuck";
    case Verdict::Kind::EngineCycle: return "EngineCycle";
    case Verdict::Kind::EngineFuel: return "EngineFuel";
    case Verdict::Kind::OracleFuel: return "OracleFuel";
  }
  return "?";
}

Verdict run_case(const TermPtr& term, std::uint64_t engineFuel,
                 std::uint64_t oracleFuel) {
  assert(term);
  OracleOutcome oracle = normalize_normal_order(term, oracleFuel);
  NetState st = build_initial(term);
  RunOutcome engine = run(st, {.maxInteractions = engineFuel});

  Verdict v;
  v.engineStats = engine.stats;
  v.oracleSteps = oracle.betaSteps;
  v.oracleTerm = oracle.term;
  v.engineTerm = engine.normalForm;
  if (!oracle.normalized) {
    v.kind = Verdict::Kind::OracleFuel;
    return v;
  }
  switch (engine.kind) {
    case RunOutcome::Kind::NormalForm:
      v.kind = alpha_eq(engine.normalForm, oracle.term) ? Verdict::Kind::Match
                                                        : Verdict::Kind::Mismatch;
      break;
    case RunOutcome::Kind::Stuck:
      v.kind = Verdict::Kind::EngineStuck;
      v.detail = engine.diagnostic + "\n" + engine.snapshot;
      break;
    case RunOutcome::Kind::Cycle:
      v.kind = Verdict::Kind::EngineCycle;
      v.detail = engine.diagnostic + "\n" + engine.snapshot;
      break;
    case RunOutcome::Kind::FuelExhausted:
      v.kind = Verdict::Kind::EngineFuel;
      break;
  }
  return v;
}

std::string write_counterexample(const std::string& dir,
                                 const std::string& fileName,
                                 const TermPtr& term, Verdict::Kind kind,
                                 std::uint64_t seed, std::uint64_t caseIndex) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = std::filesystem::path(dir) / fileName;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "# verdict=" << verdict_name(kind) << " seed=" << seed
    << " case=" << caseIndex << "\n";
  f << to_string(term) << "\n";
  f.close();
  if (!f) throw std::runtime_error("write failed for " + path.string());
  return path.string();
}

TermPtr read_term_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string text, line;
  while (std::getline(f, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    text += line;
    text += ' ';
  }
  return parse(text);
}

FuzzReport fuzz(const FuzzConfig& cfg) {
  if (cfg.cases == 0) throw std::invalid_argument("fuzz needs at least one case");
  FuzzReport report;
  report.seed = cfg.seed;
  report.cases = cfg.cases;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t k = 0; k < cfg.cases; ++k) {
    TermPtr term = gen_random_term(cfg.seed + k, cfg.maxSize);
    Verdict v = run_case(term, cfg.engineFuel, cfg.oracleFuel);
    report.counts[static_cast<std::size_t>(v.kind)]++;
    bool bad = v.kind == Verdict::Kind::Mismatch ||
               v.kind == Verdict::Kind::EngineStuck ||
               v.kind == Verdict::Kind::EngineCycle;
    if (bad && !cfg.outDir.empty()) {
      std::string name = "cex_seed" + std::to_string(cfg.seed) + "_case" +
                         std::to_string(k) + ".lam";
      try {
        report.artifacts.push_back(
            write_counterexample(cfg.outDir, name, term, v.kind, cfg.seed, k));
      } catch (const std::exception& e) {
        report.writeErrors.push_back(e.what());
      }
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::string fuzz_report_text(const FuzzReport& r, bool includeDuration) {
  std::ostringstream os;
  os << "seed: " << r.seed << "\n";
  os << "cases: " << r.cases << "\n";
  static constexpr Verdict::Kind order[] = {
      Verdict::Kind::Match,       Verdict::Kind::Mismatch,
      Verdict::Kind::EngineStuck, Verdict::Kind::EngineCycle,
      Verdict::Kind::EngineFuel,  Verdict::Kind::OracleFuel,
  };
  for (Verdict::Kind k : order)
    os << verdict_name(k) << ": " << r.of(k) << "\n";
  for (const auto& a : r.artifacts) os << "artifact: " << a << "\n";
  for (const auto& e : r.writeErrors) os << "write error: " << e << "\n";
  if (includeDuration) os << "duration: " << r.seconds << "s\n";
  return os.str();
}

}  // namespace optlam
