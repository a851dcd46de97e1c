#include "gasp/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gasp/abduction.hpp"
#include "gasp/advisor/compliance.hpp"
#include "gasp/advisor/json.hpp"
#include "gasp/engine.hpp"
#include "gasp/grounder.hpp"
#include "gasp/oracle.hpp"

namespace gasp::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

enum Exit { kFound = 0, kNone = 1, kError = 2 };

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_programs(const std::vector<std::string>& paths) {
  Program out;
  for (const std::string& path : paths) {
    Program p;
    try {
      p = parse_program(read_file(path));
    } catch (const SyntaxError& e) {
      throw InputError(path + ":" + e.what());
    } catch (const SafetyError& e) {
      throw InputError(path + ": " + e.what());
    }
    out.rules.insert(out.rules.end(), p.rules.begin(), p.rules.end());
    out.abducibles.insert(out.abducibles.end(), p.abducibles.begin(), p.abducibles.end());
    out.queries.insert(out.queries.end(), p.queries.begin(), p.queries.end());
  }
  return out;
}

/// The -q query, or the program's first `?-` query.
Query pick_query(const std::string& text, const Program& p) {
  if (!text.empty()) return parse_query(text);
  if (!p.queries.empty()) return p.queries.front();
  throw InputError("no query: pass -q or put `?- ...` in the program");
}

advisor::PatientProfile load_profile(const std::string& path) {
  advisor::PatientProfile p = advisor::normalize_profile(advisor::parse_profile(read_file(path)));
  advisor::validate_profile(p);
  return p;
}

Program load_kb(const std::string& path) { return path.empty() ? advisor::kb_rules() : load_programs({path}); }

struct Config {
  std::vector<std::string> programs;
  std::string query;
  std::vector<std::string> abducibles;
  std::size_t max_answers = 0;
  std::size_t depth_limit = SolveOptions{}.depth_limit;
  std::size_t max_atoms = oracle::OracleOptions{}.max_atoms;
  std::size_t max_explanations = advisor::AdvisorOptions{}.max_explanations;
  bool json = false;
  bool timing = false;
  bool minimal = false;
  std::string kb;
  std::string profile;
  std::string treatment;
  std::string cor_class;
};

SolveOptions solve_options(const Config& c) {
  SolveOptions o;
  o.depth_limit = c.depth_limit;
  return o;
}

json literals_json(const std::vector<Literal>& ls) {
  json out = json::array();
  for (const Literal& l : ls)
    if (!l.atom.hidden()) out.push_back(render(l));
  return out;
}

int cmd_solve(const Config& c, std::ostream& out, std::ostream& err) {
  auto t0 = Clock::now();
  Program p = load_programs(c.programs);
  Query q = pick_query(c.query, p);
  p.abducibles.clear();
  GroundProgram gp = ground(p);
  double grounding = ms_since(t0);

  auto t1 = Clock::now();
  Solver solver = solve(gp, q, solve_options(c));
  std::vector<PartialAnswerSet> answers;
  while (c.max_answers == 0 || answers.size() < c.max_answers) {
    auto a = solver.next();
    if (!a) break;
    answers.push_back(std::move(*a));
  }
  double solving = ms_since(t1);

  if (c.json) {
    json j = {{"answers", json::array()}, {"timings_ms", {{"grounding", grounding}, {"solving", solving}}}};
    for (const auto& a : answers) j["answers"].push_back(literals_json(a.literals));
    out << j.dump(2) << "\n";
  } else {
    for (const auto& a : answers) out << render(a) << "\n";
    if (answers.empty()) out << "false\n";
    if (c.timing) err << "Timing: grounding " << grounding << " ms, solving " << solving << " ms\n";
  }
  return answers.empty() ? kNone : kFound;
}

int cmd_abduce(const Config& c, std::ostream& out, std::ostream& err) {
  auto t0 = Clock::now();
  Program p = load_programs(c.programs);
  Query q = pick_query(c.query, p);
  std::vector<Atom> extra;
  for (const std::string& a : c.abducibles) extra.push_back(parse_atom(a));
  auto theory = prepare_theory(p, extra);
  double grounding = ms_since(t0);

  auto t1 = Clock::now();
  Abducer abducer(theory, q, solve_options(c));
  std::vector<Abduction> answers;
  while (c.max_answers == 0 || answers.size() < c.max_answers) {
    auto a = abducer.next();
    if (!a) break;
    answers.push_back(std::move(*a));
  }
  if (c.minimal) {
    std::vector<Explanation> keep = minimal_explanations(distinct_explanations(answers));
    std::vector<Abduction> filtered;
    for (Abduction& a : answers) {
      auto it = std::find_if(keep.begin(), keep.end(), [&](const Explanation& e) { return e.same_as(a.explanation); });
      if (it != keep.end()) {
        filtered.push_back(std::move(a));
        keep.erase(it);
      }
    }
    answers = std::move(filtered);
  }
  double abduction = ms_since(t1);

  if (c.json) {
    json j = {{"answers", json::array()}, {"timings_ms", {{"grounding", grounding}, {"abduction", abduction}}}};
    for (const auto& a : answers) {
      j["answers"].push_back({{"answer", literals_json(a.answer.literals)},
                              {"explanation", advisor::to_json(a.explanation)}});
    }
    out << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < answers.size(); ++i) {
      if (i > 0) out << "\n";
      out << render_answer(answers[i], theory->patterns) << "\n";
      out << "Abducibles: " << render(answers[i].explanation) << "\n";
    }
    if (answers.empty()) out << "false\n";
    if (c.timing) err << "Timing: grounding " << grounding << " ms, abduction " << abduction << " ms\n";
  }
  return answers.empty() ? kNone : kFound;
}

advisor::AdvisorOptions advisor_options(const Config& c) {
  advisor::AdvisorOptions o;
  o.solve = solve_options(c);
  o.max_explanations = c.max_explanations;
  o.minimal_only = c.minimal;
  return o;
}

void print_timings(std::ostream& err, const advisor::PhaseTimings& t) {
  err << "Timing: grounding " << t.grounding_ms << " ms, enumeration " << t.enumeration_ms << " ms, abduction "
      << t.abduction_ms << " ms\n";
}

int cmd_recommend(const Config& c, std::ostream& out, std::ostream& err) {
  advisor::Advisor adv(load_kb(c.kb), advisor_options(c));
  advisor::PatientProfile profile = load_profile(c.profile);
  advisor::PhaseTimings t;
  auto set = adv.enumerate_recommendations(profile, &t);
  if (c.json) {
    json j = {{"compliant_set", json::array()},
              {"profile_hash", advisor::profile_hash(profile)},
              {"timings_ms", advisor::to_json(t)}};
    for (const auto& r : set) j["compliant_set"].push_back(advisor::to_json(r));
    out << j.dump(2) << "\n";
  } else {
    for (const auto& r : set) out << to_string(r.atom()) << "\n";
    if (set.empty()) out << "none\n";
    if (c.timing) print_timings(err, t);
  }
  return set.empty() ? kNone : kFound;
}

int cmd_check(const Config& c, std::ostream& out, std::ostream& err) {
  advisor::Advisor adv(load_kb(c.kb), advisor_options(c));
  advisor::PatientProfile profile = load_profile(c.profile);
  auto report = adv.check_compliance(profile, {c.treatment, c.cor_class});
  if (c.json) {
    json j = advisor::to_json(report);
    j["profile_hash"] = advisor::profile_hash(profile);
    out << j.dump(2) << "\n";
  } else {
    out << advisor::render_text(report);
    if (c.timing) print_timings(err, report.timings);
  }
  return report.verdict == advisor::Verdict::Rejected ? kNone : kFound;
}

int cmd_oracle(const Config& c, std::ostream& out, std::ostream& err) {
  auto t0 = Clock::now();
  Program p = load_programs(c.programs);
  p.abducibles.clear();
  auto models = oracle::enumerate_stable_models(p, {c.max_atoms});
  double elapsed = ms_since(t0);
  if (c.json) {
    json j = {{"models", json::array()}, {"timings_ms", {{"oracle", elapsed}}}};
    for (const auto& m : models.models) {
      json atoms = json::array();
      for (const Atom& a : m) atoms.push_back(to_string(a));
      j["models"].push_back(std::move(atoms));
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& m : models.models) {
      std::vector<Literal> ls;
      for (const Atom& a : m) ls.push_back({a, false});
      out << render_set(ls) << "\n";
    }
    if (models.models.empty()) out << "no stable models\n";
    if (c.timing) err << "Timing: oracle " << elapsed << " ms\n";
  }
  return models.models.empty() ? kNone : kFound;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goal-directed ASP solver with abduction and a heart-failure guideline advisor", "gasp"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--depth-limit", c.depth_limit, "Maximum derivation depth")->check(CLI::PositiveNumber);
    sub->add_flag("--json", c.json, "Machine-readable output");
    sub->add_flag("--timing", c.timing, "Print phase durations on stderr");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Enumerate partial answer sets of a query");
  solve_cmd->add_option("-p,--program", c.programs, "Program file (repeatable)")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("-q,--query", c.query, "Query, e.g. \"q, s\"");
  solve_cmd->add_option("-n,--max-answers", c.max_answers, "Stop after N answers (0 = all)");
  common(solve_cmd);

  CLI::App* abduce_cmd = app.add_subcommand("abduce", "Explain an observation with abducibles");
  abduce_cmd->add_option("-p,--program", c.programs, "Program file (repeatable)")->required()->check(CLI::ExistingFile);
  abduce_cmd->add_option("-q,--query", c.query, "Observation");
  abduce_cmd->add_option("-a,--abducible", c.abducibles, "Extra abducible pattern (repeatable)");
  abduce_cmd->add_option("-n,--max-answers", c.max_answers, "Stop after N answers (0 = all)");
  abduce_cmd->add_flag("--minimal", c.minimal, "Keep only subset-minimal explanations");
  common(abduce_cmd);

  CLI::App* recommend_cmd = app.add_subcommand("recommend", "List guideline-compliant recommendations");
  recommend_cmd->add_option("--kb", c.kb, "Knowledge base (default: built-in)")->check(CLI::ExistingFile);
  recommend_cmd->add_option("--profile", c.profile, "Patient profile facts")->required()->check(CLI::ExistingFile);
  common(recommend_cmd);

  CLI::App* check_cmd = app.add_subcommand("check", "Check a proposed treatment against the guideline");
  check_cmd->add_option("--kb", c.kb, "Knowledge base (default: built-in)")->check(CLI::ExistingFile);
  check_cmd->add_option("--profile", c.profile, "Patient profile facts")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--treatment", c.treatment, "Proposed treatment")->required();
  check_cmd->add_option("--class", c.cor_class, "Class of recommendation")
      ->required()
      ->check(CLI::IsMember({"class_1", "class_2a", "class_2b", "class_3"}));
  check_cmd->add_option("--max-explanations", c.max_explanations, "Cap on distinct explanations");
  check_cmd->add_flag("--minimal", c.minimal, "Keep only subset-minimal explanations");
  common(check_cmd);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force all stable models (small programs)");
  oracle_cmd->add_option("-p,--program", c.programs, "Program file (repeatable)")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--max-atoms", c.max_atoms, "Herbrand base limit");
  common(oracle_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kFound : kError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(c, out, err);
    if (abduce_cmd->parsed()) return cmd_abduce(c, out, err);
    if (recommend_cmd->parsed()) return cmd_recommend(c, out, err);
    if (check_cmd->parsed()) return cmd_check(c, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(c, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gasp::cli
