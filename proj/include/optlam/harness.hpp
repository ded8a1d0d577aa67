#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "optlam/engine.hpp"
#include "optlam/net.hpp"
#include "optlam/oracle.hpp"
#include "optlam/term.hpp"

namespace optlam {

/// Church numeral: lambda s. lambda z. s^n z.
TermPtr church(unsigned n);
TermPtr church_add();  // \m.\n.\s.\z. m s (n s z)
TermPtr church_mul();  // \m.\n.\s.\z. m (n s) z
TermPtr church_exp();  // \m.\n. n m

struct CorpusCase {
  std::string name;
  TermPtr term;
};

/// Fixed regression corpus: Church arithmetic up to operand 3,
/// self-application, discarded arguments, shared redexes, plus the small
/// open-term cases.
std::vector<CorpusCase> corpus();

struct Verdict {
  enum class Kind : std::uint8_t {
    Match,        // both normalize, alpha-equivalent results
    Mismatch,     // both normalize, different results
    EngineStuck,  // net reached a pair with no rule
    EngineCycle,  // net walk looped
    EngineFuel,   // net ran out of interactions
    OracleFuel,   // reference normalizer ran out of steps
  };
  Kind kind = Kind::Match;
  Stats engineStats;
  std::uint64_t oracleSteps = 0;
  TermPtr engineTerm;  // when the engine produced a term
  TermPtr oracleTerm;  // when the oracle produced a term
  std::string detail;  // diagnostic and net snapshot for stuck/cycle
};

std::string_view verdict_name(Verdict::Kind k);

/// Runs both reducers on one closed-or-open term and compares. An oracle
/// timeout wins over any engine outcome since no expected value exists.
Verdict run_case(const TermPtr& term, std::uint64_t engineFuel,
                 std::uint64_t oracleFuel);

/// Writes `term` with a "# verdict=... seed=... case=..." header; returns
/// the path written.
std::string write_counterexample(const std::string& dir,
                                 const std::string& fileName,
                                 const TermPtr& term, Verdict::Kind kind,
                                 std::uint64_t seed, std::uint64_t caseIndex);

/// Reads a term file, ignoring '#' comment lines and blank lines.
TermPtr read_term_file(const std::string& path);

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::uint64_t cases = 100;
  std::uint64_t maxSize = 25;
  std::uint64_t engineFuel = kDefaultEngineFuel;
  std::uint64_t oracleFuel = kDefaultOracleFuel;
  std::string outDir = "counterexamples";  // empty disables persistence
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::uint64_t cases = 0;
  std::array<std::uint64_t, 6> counts{};  // indexed by Verdict::Kind
  std::vector<std::string> artifacts;     // persisted counterexample paths
  std::vector<std::string> writeErrors;
  double seconds = 0.0;

  std::uint64_t of(Verdict::Kind k) const {
    return counts[static_cast<std::size_t>(k)];
  }
};

/// Case k reduces gen_random_term(seed + k, maxSize); every case lands in
/// exactly one verdict bucket. Mismatch, EngineStuck and EngineCycle cases
/// are persisted to outDir; a failed write is recorded and the run goes on.
FuzzReport fuzz(const FuzzConfig& cfg);

/// Stable text rendering (duration line only when includeDuration).
std::string fuzz_report_text(const FuzzReport& r, bool includeDuration);

}  // namespace optlam
