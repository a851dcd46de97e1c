// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gasp/abduction.hpp"
#include "gasp/advisor/compliance.hpp"
#include "gasp/cli/cli.hpp"
#include "gasp/engine.hpp"
#include "property_checks.hpp"

using namespace gasp;
using namespace gasp::advisor;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kGoldenMs = 10.0;
constexpr double kEnumerateMs = 1000.0;
constexpr double kCheckMs = 10000.0;
constexpr std::size_t kOraclePrograms = 1000;
constexpr std::size_t kAbductionProblems = 200;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void report(const char* name, const std::function<Result()>& criterion) {
  Result r;
  try {
    r = criterion();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  if (!r.pass) ++failures;
  std::printf("%s  %s%s%s\n", r.pass ? "PASS" : "FAIL", name, r.detail.empty() ? "" : "  -- ", r.detail.c_str());
  std::fflush(stdout);
}

const char* kFourRule = "p :- not q.\nq :- not p.\nr :- not s.\ns :- not r.\n";

/// Parse, ground and solve; returns the rendered answers and the slowest
/// of five timed runs.
std::vector<std::string> timed_answers(const char* program, const char* query, double* worst_ms) {
  std::vector<std::string> out;
  *worst_ms = 0;
  for (int run = 0; run < 5; ++run) {
    auto t = Clock::now();
    GroundProgram gp = ground(parse_program(program));
    std::vector<std::string> answers;
    for (const auto& a : enumerate_all(gp, parse_query(query))) answers.push_back(render(a));
    *worst_ms = std::max(*worst_ms, ms_since(t));
    out = answers;
  }
  return out;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f ms", ms);
  return buf;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " | ") + x;
  return s;
}

}  // namespace

int main() {
  report("even-loop golden: q and (q, s) render exactly, each under 10 ms", [] {
    Result r;
    double q_ms = 0, qs_ms = 0;
    auto q = timed_answers(kFourRule, "q", &q_ms);
    auto qs = timed_answers(kFourRule, "q, s", &qs_ms);
    r.require(q == std::vector<std::string>{"{ q, not p }"}, "q gave " + joined(q));
    r.require(qs == std::vector<std::string>{"{ q, not p, s, not r }"}, "q, s gave " + joined(qs));
    r.require(q_ms < kGoldenMs, "q took " + fmt_ms(q_ms));
    r.require(qs_ms < kGoldenMs, "q, s took " + fmt_ms(qs_ms));
    if (r.pass) r.detail = "worst " + fmt_ms(std::max(q_ms, qs_ms));
    return r;
  });

  report("abduction golden: { p, not q, a, not b, not c } with abducibles { a, not b, not c }; d never abduced", [] {
    Result r;
    const Program theory = parse_program("p :- a, not q.\nq :- a, b.\nq :- c.\n");
    const Query obs = parse_query("p");
    for (bool with_d : {false, true}) {
      std::vector<Atom> abd = {parse_atom("a"), parse_atom("b"), parse_atom("c")};
      if (with_d) abd.push_back(parse_atom("d"));
      Abducer ab(AbductionProblem{theory, obs, abd});
      std::vector<std::string> answers, explanations;
      while (auto a = ab.next()) {
        answers.push_back(render_answer(*a, ab.patterns()));
        explanations.push_back(render(a->explanation));
      }
      const std::string tag = with_d ? "with d: " : "";
      r.require(answers == std::vector<std::string>{"{ p, not q, a, not b, not c }"}, tag + "answers " + joined(answers));
      r.require(explanations == std::vector<std::string>{"{ a, not b, not c }"},
                tag + "abducibles " + joined(explanations));
    }
    return r;
  });

  report("patient 1: lvef 16, isordil/hydralazine class 1 Rejected, class 2a one explanation, CLI line exact", [] {
    Result r;
    PatientProfile p = gasp::testing::load_patient(1);
    r.require(p.measurement("lvef") == Decimal::from_int(16), "lvef not normalized to 16");
    Advisor advisor;
    auto c1 = advisor.check_compliance(p, {"hydralazine_and_isosorbide_dinitrate", "class_1"});
    r.require(c1.verdict == Verdict::Rejected, std::string("class 1 verdict ") + std::string(to_string(c1.verdict)));
    auto c2 = advisor.check_compliance(p, {"hydralazine_and_isosorbide_dinitrate", "class_2a"});
    r.require(c2.verdict == Verdict::RepairableWithEvidence,
              std::string("class 2a verdict ") + std::string(to_string(c2.verdict)));
    r.require(c2.explanations.size() == 1, std::to_string(c2.explanations.size()) + " explanations");
    if (!c2.explanations.empty()) {
      std::vector<std::string> expected = {"history(angioedema)", "contraindication(arbs)"};
      auto got = gasp::testing::strings(c2.explanations[0].assumed_true());
      std::vector<std::string> a = got, b = expected;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      r.require(a == b, "explanation " + render(c2.explanations[0]));
    }
    std::ostringstream out, err;
    int code = gasp::cli::run({"check", "--kb", gasp::testing::data_path("hf_guideline.asp"), "--profile",
                               gasp::testing::patient_file(1), "--treatment", "hydralazine_and_isosorbide_dinitrate",
                               "--class", "class_2a"},
                              out, err);
    const std::string line = "Abducibles: { history(angioedema), contraindication(arbs) }\n";
    r.require(code == 0, "CLI exit " + std::to_string(code));
    r.require(out.str().find("\n" + line) != std::string::npos, "CLI output lacks the Abducibles line");
    return r;
  });

  report("sample patients 1 to 10: verdicts and abducibles", [] {
    Result r;
    Advisor advisor;
    for (const auto& c : gasp::testing::sample_cases()) {
      const std::string who = "No." + std::to_string(c.patient) + " ";
      auto rep = advisor.check_compliance(gasp::testing::load_patient(c.patient), c.proposed);
      if (rep.verdict != c.verdict) {
        r.require(false, who + "verdict " + std::string(to_string(rep.verdict)));
        continue;
      }
      if (c.verdict != Verdict::RepairableWithEvidence) continue;
      bool match = std::any_of(rep.explanations.begin(), rep.explanations.end(), [&](const Explanation& e) {
        auto got = gasp::testing::strings(e.assumed_true());
        auto want = c.assumed_true;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        return got == want;
      });
      r.require(match, who + "no explanation assumes " + joined(c.assumed_true));
    }
    if (r.pass) r.detail = std::to_string(gasp::testing::sample_cases().size()) + " cases";
    return r;
  });

  report("oracle equivalence: 1000 random programs, <= 8 atoms, <= 12 rules, negation density 0 to 0.6", [] {
    Result r;
    gasp::testing::RandomProgramShape shape;
    shape.max_atoms = 8;
    shape.max_rules = 12;
    auto rep = gasp::testing::check_oracle_equivalence(20240601, kOraclePrograms, shape, 0.0, 0.6);
    r.require(rep.programs >= kOraclePrograms, "only " + std::to_string(rep.programs) + " programs");
    r.require(rep.ok(), std::to_string(rep.violations.size()) + " violations, first: " +
                            (rep.violations.empty() ? "" : rep.violations.front()));
    if (r.pass)
      r.detail = std::to_string(rep.programs) + " programs, " + std::to_string(rep.queries) + " queries, " +
                 std::to_string(rep.answers) + " answers, 0 violations";
    return r;
  });

  report("abduction soundness: 200 random problems, every explanation verified by the oracle", [] {
    Result r;
    gasp::testing::RandomProgramShape shape;
    shape.max_atoms = 6;
    shape.max_rules = 10;
    shape.negation_density = 0.35;
    auto rep = gasp::testing::check_abduction_soundness(20240602, kAbductionProblems, shape);
    r.require(rep.programs >= kAbductionProblems, "only " + std::to_string(rep.programs) + " problems");
    r.require(rep.answers > 0, "no explanations produced");
    r.require(rep.ok(), std::to_string(rep.violations.size()) + " violations, first: " +
                            (rep.violations.empty() ? "" : rep.violations.front()));
    if (r.pass)
      r.detail = std::to_string(rep.programs) + " problems, " + std::to_string(rep.answers) + " explanations, 0 violations";
    return r;
  });

  report("timing envelope: enumeration under 1 s and every abductive check under 10 s per profile", [] {
    Result r;
    double worst_enum = 0, worst_check = 0;
    for (int n = 1; n <= 10; ++n) {
      PatientProfile p = gasp::testing::load_patient(n);
      Advisor advisor;  // fresh, so nothing is cached
      auto t = Clock::now();
      advisor.enumerate_recommendations(p);
      worst_enum = std::max(worst_enum, ms_since(t));
      for (const std::string& tr : treatments()) {
        for (const std::string& k : cor_classes()) {
          Advisor cold;
          auto t1 = Clock::now();
          cold.check_compliance(p, {tr, k});
          worst_check = std::max(worst_check, ms_since(t1));
        }
      }
    }
    r.require(worst_enum < kEnumerateMs, "enumeration took " + fmt_ms(worst_enum));
    r.require(worst_check < kCheckMs, "a check took " + fmt_ms(worst_check));
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("worst enumeration ") + fmt_ms(worst_enum) +
                ", worst check " + fmt_ms(worst_check);
    return r;
  });

  return failures;
}
