#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "optlam/encode.hpp"
#include "optlam/engine.hpp"
#include "optlam/harness.hpp"
#include "optlam/oracle.hpp"
#include "optlam/term.hpp"

namespace {

using json = nlohmann::json;
using namespace optlam;

constexpr int kExitOk = 0;
constexpr int kExitStuck = 2;     // also cycle
constexpr int kExitFuel = 3;
constexpr int kExitUsage = 4;     // also parse errors
constexpr int kExitMismatch = 5;

struct Source {
  std::string expr;
  std::string file;
};

TermPtr load_term(const Source& src) {
  std::string text;
  if (!src.expr.empty() && !src.file.empty())
    throw std::runtime_error("pass either --expr or --file, not both");
  if (!src.expr.empty()) {
    text = src.expr;
  } else if (!src.file.empty()) {
    return read_term_file(src.file);
  } else {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  }
  return parse(text);
}

json stats_json(const Stats& s, std::uint64_t fanCount) {
  json rules = json::object();
  for (int i = 0; i < kRuleCount; ++i)
    rules[rule_label(static_cast<Rule>(i))] = s.rules[i];
  return json{{"interactions", s.interactions()},
              {"rules", rules},
              {"phiInserts", s.phiInserts},
              {"phiHits", s.phiHits},
              {"walkSteps", s.walkSteps},
              {"residualAgents", s.residualAgents},
              {"fanCount", fanCount}};
}

void print_stats(const Stats& s, std::uint64_t fanCount, std::ostream& os) {
  os << "interactions: " << s.interactions() << "\n";
  for (int i = 0; i < kRuleCount; ++i)
    os << rule_label(static_cast<Rule>(i)) << ": " << s.rules[i] << "\n";
  os << "phi inserts: " << s.phiInserts << "\n";
  os << "phi hits: " << s.phiHits << "\n";
  os << "walk steps: " << s.walkSteps << "\n";
  os << "residual agents: " << s.residualAgents << "\n";
  os << "fan count: " << fanCount << "\n";
}

int cmd_normalize(const Source& src, std::uint64_t maxInteractions, bool trace,
                  bool stats, bool asJson) {
  TermPtr term = load_term(src);
  NetState st = build_initial(term);
  if (trace) st.enable_trace();
  RunOutcome out = run(st, {.maxInteractions = maxInteractions});
  if (trace)
    for (const auto& line : dump_trace(st)) std::cerr << line << "\n";
  if (asJson) {
    json j{{"term", to_string(term)}};
    switch (out.kind) {
      case RunOutcome::Kind::NormalForm:
        j["outcome"] = "normal_form";
        j["normalForm"] = to_string(out.normalForm);
        break;
      case RunOutcome::Kind::Stuck:
        j["outcome"] = "stuck";
        j["diagnostic"] = out.diagnostic;
        j["snapshot"] = out.snapshot;
        break;
      case RunOutcome::Kind::Cycle:
        j["outcome"] = "cycle";
        j["diagnostic"] = out.diagnostic;
        j["snapshot"] = out.snapshot;
        break;
      case RunOutcome::Kind::FuelExhausted:
        j["outcome"] = "fuel_exhausted";
        break;
    }
    if (stats) j["stats"] = stats_json(out.stats, st.fanCount);
    std::cout << j.dump(2) << "\n";
  } else {
    switch (out.kind) {
      case RunOutcome::Kind::NormalForm:
        std::cout << to_string(out.normalForm) << "\n";
        break;
      case RunOutcome::Kind::Stuck:
      case RunOutcome::Kind::Cycle:
        std::cout << (out.kind == RunOutcome::Kind::Stuck ? "stuck: " : "cycle: ")
                  << out.diagnostic << "\n"
                  << out.snapshot;
        break;
      case RunOutcome::Kind::FuelExhausted:
        std::cout << "fuel exhausted after " << out.stats.interactions()
                  << " interactions\n";
        break;
    }
    if (stats) print_stats(out.stats, st.fanCount, std::cout);
  }
  switch (out.kind) {
    case RunOutcome::Kind::NormalForm: return kExitOk;
    case RunOutcome::Kind::Stuck:
    case RunOutcome::Kind::Cycle: return kExitStuck;
    case RunOutcome::Kind::FuelExhausted: return kExitFuel;
  }
  return kExitOk;
}

int cmd_check(const Source& src, std::uint64_t engineFuel,
              std::uint64_t oracleFuel, bool stats, bool asJson) {
  TermPtr term = load_term(src);
  Verdict v = run_case(term, engineFuel, oracleFuel);
  if (asJson) {
    json j{{"term", to_string(term)},
           {"verdict", std::string(verdict_name(v.kind))},
           {"oracleSteps", v.oracleSteps}};
    if (v.engineTerm) j["engineTerm"] = to_string(v.engineTerm);
    if (v.oracleTerm) j["oracleTerm"] = to_string(v.oracleTerm);
    if (stats) j["stats"] = stats_json(v.engineStats, 0);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << verdict_name(v.kind) << "\n";
    if (v.kind == Verdict::Kind::Mismatch) {
      std::cout << "engine: " << to_string(v.engineTerm) << "\n";
      std::cout << "oracle: " << to_string(v.oracleTerm) << "\n";
    } else if (v.engineTerm && v.oracleTerm) {
      std::cout << "normal form: " << to_string(v.engineTerm) << "\n";
    }
    if (!v.detail.empty()) std::cerr << v.detail;
    if (stats) print_stats(v.engineStats, 0, std::cout);
  }
  switch (v.kind) {
    case Verdict::Kind::Match: return kExitOk;
    case Verdict::Kind::Mismatch: return kExitMismatch;
    case Verdict::Kind::EngineStuck:
    case Verdict::Kind::EngineCycle: return kExitStuck;
    case Verdict::Kind::EngineFuel:
    case Verdict::Kind::OracleFuel: return kExitFuel;
  }
  return kExitOk;
}

int cmd_corpus(std::uint64_t engineFuel, std::uint64_t oracleFuel, bool asJson) {
  auto cases = corpus();
  bool mismatch = false, stuck = false, fuel = false;
  json items = json::array();
  for (const auto& c : cases) {
    Verdict v = run_case(c.term, engineFuel, oracleFuel);
    switch (v.kind) {
      case Verdict::Kind::Mismatch: mismatch = true; break;
      case Verdict::Kind::EngineStuck:
      case Verdict::Kind::EngineCycle: stuck = true; break;
      case Verdict::Kind::EngineFuel:
      case Verdict::Kind::OracleFuel: fuel = true; break;
      case Verdict::Kind::Match: break;
    }
    if (asJson) {
      items.push_back(json{{"name", c.name},
                           {"verdict", std::string(verdict_name(v.kind))},
                           {"interactions", v.engineStats.interactions()},
                           {"oracleSteps", v.oracleSteps}});
    } else {
      std::cout << c.name << ": " << verdict_name(v.kind) << " (interactions "
                << v.engineStats.interactions() << ", oracle steps "
                << v.oracleSteps << ")\n";
    }
  }
  if (asJson) std::cout << items.dump(2) << "\n";
  if (mismatch) return kExitMismatch;
  if (stuck) return kExitStuck;
  if (fuel) return kExitFuel;
  return kExitOk;
}

int cmd_fuzz(const FuzzConfig& cfg, bool asJson) {
  FuzzReport r = fuzz(cfg);
  if (asJson) {
    json j{{"seed", r.seed},
           {"cases", r.cases},
           {"artifacts", r.artifacts},
           {"writeErrors", r.writeErrors}};
    static constexpr Verdict::Kind order[] = {
        Verdict::Kind::Match,       Verdict::Kind::Mismatch,
        Verdict::Kind::EngineStuck, Verdict::Kind::EngineCycle,
        Verdict::Kind::EngineFuel,  Verdict::Kind::OracleFuel,
    };
    json counts = json::object();
    for (auto k : order) counts[std::string(verdict_name(k))] = r.of(k);
    j["counts"] = counts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << fuzz_report_text(r, true);
  }
  if (r.of(Verdict::Kind::Mismatch) > 0) return kExitMismatch;
  if (r.of(Verdict::Kind::EngineStuck) + r.of(Verdict::Kind::EngineCycle) > 0)
    return kExitStuck;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"interaction-net normalizer for the untyped lambda calculus"};
  cli.require_subcommand(1);

  Source src;
  std::uint64_t maxInteractions = kDefaultEngineFuel;
  std::uint64_t oracleFuel = kDefaultOracleFuel;
  bool trace = false, stats = false, asJson = false;

  auto add_source = [&](CLI::App* c) {
    c->add_option("-e,--expr", src.expr, "term text");
    c->add_option("-f,--file", src.file, "file with one term ('#' comments)");
  };

  CLI::App* normalize = cli.add_subcommand("normalize", "reduce a term to normal form");
  add_source(normalize);
  normalize->add_option("--max-interactions", maxInteractions, "interaction budget");
  normalize->add_flag("--trace", trace, "log every interaction to stderr");
  normalize->add_flag("--stats", stats, "print reduction counters");
  normalize->add_flag("--json", asJson, "machine-readable output");

  CLI::App* check = cli.add_subcommand("check", "compare against the reference normalizer");
  add_source(check);
  check->add_option("--max-interactions", maxInteractions, "interaction budget");
  check->add_option("--oracle-fuel", oracleFuel, "reference beta-step budget");
  check->add_flag("--stats", stats, "print reduction counters");
  check->add_flag("--json", asJson, "machine-readable output");

  CLI::App* corpusCmd = cli.add_subcommand("corpus", "run the built-in regression corpus");
  corpusCmd->add_option("--max-interactions", maxInteractions, "interaction budget");
  corpusCmd->add_option("--oracle-fuel", oracleFuel, "reference beta-step budget");
  corpusCmd->add_flag("--json", asJson, "machine-readable output");

  FuzzConfig fuzzCfg;
  CLI::App* fuzzCmd = cli.add_subcommand("fuzz", "differential-test random terms");
  fuzzCmd->add_option("--seed", fuzzCfg.seed, "base seed");
  fuzzCmd->add_option("--cases", fuzzCfg.cases, "number of cases");
  fuzzCmd->add_option("--max-size", fuzzCfg.maxSize, "term size bound");
  fuzzCmd->add_option("--max-interactions", fuzzCfg.engineFuel, "interaction budget");
  fuzzCmd->add_option("--oracle-fuel", fuzzCfg.oracleFuel, "reference beta-step budget");
  fuzzCmd->add_option("--out", fuzzCfg.outDir, "counterexample directory");
  fuzzCmd->add_flag("--json", asJson, "machine-readable output");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (cli.got_subcommand(normalize))
      return cmd_normalize(src, maxInteractions, trace, stats, asJson);
    if (cli.got_subcommand(check))
      return cmd_check(src, maxInteractions, oracleFuel, stats, asJson);
    if (cli.got_subcommand(corpusCmd))
      return cmd_corpus(maxInteractions, oracleFuel, asJson);
    if (cli.got_subcommand(fuzzCmd))
      return cmd_fuzz(fuzzCfg, asJson);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
