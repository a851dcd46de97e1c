#include "gasp/advisor/hf_kb.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>
#include <sstream>

namespace gasp::advisor {

namespace {

Atom unary(const char* predicate, const char* arg) { return Atom{predicate, {Symbol{arg}}}; }
Atom prop(const char* name) { return Atom{name, {}}; }

bool contains(const std::vector<Atom>& v, const Atom& a) { return std::find(v.begin(), v.end(), a) != v.end(); }

void add_unique(std::vector<Atom>& v, const Atom& a) {
  if (!contains(v, a)) v.push_back(a);
}

// Exclusive groups: the profile settles a group when it holds one member.
const std::vector<std::vector<Atom>>& exclusive_groups() {
  static const std::vector<std::vector<Atom>> groups = {
      {unary("evidence", "accf_stage_a"), unary("evidence", "accf_stage_b"), unary("evidence", "accf_stage_c"),
       unary("evidence", "accf_stage_d")},
      {unary("evidence", "nyha_class_1"), unary("evidence", "nyha_class_2"), unary("evidence", "nyha_class_3"),
       unary("evidence", "nyha_class_4")},
      {unary("evidence", "female"), unary("evidence", "male")},
      {unary("diagnosis", "hf_with_reduced_ef"), unary("diagnosis", "hf_with_preserved_ef")},
  };
  return groups;
}

bool symbol_arg_starts_with(const Atom& a, std::string_view prefix) {
  if (a.arity() != 1) return false;
  const auto* s = std::get_if<Symbol>(&a.args[0]);
  return s && s->name.rfind(prefix, 0) == 0;
}

}  // namespace

std::optional<Decimal> PatientProfile::measurement(std::string_view name) const {
  for (const Measurement& m : measurements)
    if (m.name == name) return m.value;
  return std::nullopt;
}

bool PatientProfile::has_fact(const Atom& atom) const {
  if (atom.predicate == "measurement" && atom.arity() == 2) {
    const auto* name = std::get_if<Symbol>(&atom.args[0]);
    const auto* value = std::get_if<Decimal>(&atom.args[1]);
    auto m = name ? measurement(name->name) : std::nullopt;
    return m && value && *m == *value;
  }
  return contains(evidence, atom) || contains(diagnosis, atom) || contains(history, atom) ||
         contains(contraindications, atom) || contains(propositions, atom);
}

Atom Recommendation::atom() const { return Atom{"recommendation", {Symbol{treatment}, Symbol{cor_class}}}; }

Rule ThresholdRule::compile() const {
  Variable data{"Data"};
  Rule r;
  r.head = Atom{proposition, {}};
  r.body.push_back(Literal{Atom{"measurement", {Symbol{measurement}, data}}, false});
  r.body.push_back(Builtin{data, op, bound});
  return r;
}

std::span<const ThresholdRule> threshold_rules() {
  static const std::vector<ThresholdRule> rules = {
      {"lvef_less_than_30", "lvef", CompareOp::LessEq, Decimal::from_int(30)},
      {"lvef_less_than_or_equal_35", "lvef", CompareOp::LessEq, Decimal::from_int(35)},
      {"lvef_less_than_or_equal_40", "lvef", CompareOp::LessEq, Decimal::from_int(40)},
      {"potassium_greater_than_5", "potassium", CompareOp::Greater, Decimal::parse("5.0")},
      {"non_lbbb_qrs_greater_than_or_equal_150", "non_lbbb", CompareOp::GreaterEq, Decimal::from_int(150)},
      {"mi_post_40_days", "mi", CompareOp::GreaterEq, Decimal::from_int(40)},
      {"survival_year_greater_than_1", "expected_survival_years", CompareOp::Greater, Decimal::from_int(1)},
  };
  return rules;
}

const Program& kb_rules() {
  static const Program kb = parse_program(kb_source());
  return kb;
}

std::span<const Atom> vocabulary() {
  static const std::vector<Atom> vocab = [] {
    std::vector<Atom> v;
    for (const char* e : {"accf_stage_a", "accf_stage_b", "accf_stage_c", "accf_stage_d", "nyha_class_1", "nyha_class_2",
                          "nyha_class_3", "nyha_class_4", "female", "male", "african_american", "angina",
                          "fluid_retention", "sleep_apnea", "recent_mi"})
      v.push_back(unary("evidence", e));
    for (const char* d : {"hf_with_reduced_ef", "hf_with_preserved_ef", "diabetes", "dilated_cardiomyopathy",
                          "ischemic_heart_disease", "atrial_fibrillation", "cardioembolic_source", "hypertension"})
      v.push_back(unary("diagnosis", d));
    for (const char* h : {"standard_neurohumoral_antagonist_therapy", "ace_inhibitors", "beta_blockers", "angioedema",
                          "thromboembolism", "fluid_retention"})
      v.push_back(unary("history", h));
    for (const char* c : {"ace_inhibitors", "arbs", "beta_blockers", "diuretics", "icd", "crt", "anticoagulants"})
      v.push_back(unary("contraindication", c));
    for (const ThresholdRule& t : threshold_rules()) v.push_back(prop(t.proposition.c_str()));
    return v;
  }();
  return vocab;
}

bool in_vocabulary(const Atom& atom) {
  auto v = vocabulary();
  return std::find(v.begin(), v.end(), atom) != v.end();
}

std::span<const std::string> treatments() {
  static const std::vector<std::string> t = {"ace_inhibitors",
                                             "arbs",
                                             "beta_blockers",
                                             "diuretics",
                                             "aldosterone_antagonists",
                                             "hydralazine_and_isosorbide_dinitrate",
                                             "anticoagulants",
                                             "icd",
                                             "crt"};
  return t;
}

std::span<const std::string> cor_classes() {
  static const std::vector<std::string> c = {"class_1", "class_2a", "class_2b", "class_3"};
  return c;
}

// ---------------------------------------------------------------------------
// Profiles

PatientProfile parse_profile(std::string_view text) {
  PatientProfile p;

  static const std::regex absent_line(R"(^\s*%\s*known_absent\s*:\s*(.*?)\s*\.?\s*$)");
  std::istringstream lines{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(lines, line); ++n) {
    std::smatch m;
    if (!std::regex_match(line, m, absent_line)) continue;
    Atom a;
    try {
      a = parse_atom(m[1].str());
    } catch (const SyntaxError& e) {
      throw ProfileError("line " + std::to_string(n) + ": bad known_absent annotation: " + e.what());
    }
    if (!a.ground()) throw ProfileError("line " + std::to_string(n) + ": known_absent atom must be ground");
    add_unique(p.known_absent, a);
  }

  Program prog = parse_program(text);
  if (!prog.abducibles.empty() || !prog.queries.empty())
    throw ProfileError("a profile holds facts only, not directives or queries");
  for (const Rule& r : prog.rules) {
    const int line_no = r.position.line;
    auto fail = [&](const std::string& why) { throw ProfileError("line " + std::to_string(line_no) + ": " + why); };
    if (!r.is_fact() || !r.head->ground()) fail("expected a ground fact, got `" + to_string(r) + "`");
    const Atom& a = *r.head;
    const std::size_t k = a.arity();
    if (a.predicate == "evidence" && (k == 1 || k == 2)) {
      add_unique(p.evidence, a);
    } else if (a.predicate == "diagnosis" && k == 1) {
      add_unique(p.diagnosis, a);
    } else if (a.predicate == "history" && k == 1) {
      add_unique(p.history, a);
    } else if (a.predicate == "contraindication" && k == 1) {
      add_unique(p.contraindications, a);
    } else if (a.predicate == "measurement" && k == 2) {
      const auto* name = std::get_if<Symbol>(&a.args[0]);
      const auto* value = std::get_if<Decimal>(&a.args[1]);
      if (!name || !value) fail("measurement needs a name and a number: `" + to_string(a) + "`");
      if (p.measurement(name->name)) fail("measurement " + name->name + " given twice");
      p.measurements.push_back({name->name, *value});
    } else if (k == 0 && in_vocabulary(a)) {
      add_unique(p.propositions, a);
    } else {
      fail("unsupported fact `" + to_string(a) + "`");
    }
  }
  return p;
}

PatientProfile normalize_profile(PatientProfile raw) {
  for (Measurement& m : raw.measurements) {
    if (m.name == "lvef" && m.value < Decimal::from_int(1) && !m.value.is_negative()) {
      Decimal percent = m.value.shifted(2);
      raw.notes.push_back("lvef " + m.value.to_string() + " read as a fraction, stored as " + percent.to_string());
      m.value = percent;
    }
  }
  return raw;
}

void validate_profile(const PatientProfile& p) {
  auto count = [&](std::string_view prefix) {
    return std::count_if(p.evidence.begin(), p.evidence.end(),
                         [&](const Atom& a) { return symbol_arg_starts_with(a, prefix); });
  };
  if (count("accf_stage_") > 1) throw ProfileError("more than one ACCF/AHA stage");
  if (count("nyha_class_") > 1) throw ProfileError("more than one NYHA class");
  for (const Measurement& m : p.measurements) {
    if (m.value.is_negative()) throw ProfileError("negative measurement " + m.name);
    if (m.name == "lvef" && Decimal::from_int(100) < m.value) throw ProfileError("lvef above 100 percent");
  }
}

std::vector<Rule> profile_to_facts(const PatientProfile& p) {
  std::vector<Rule> out;
  auto fact = [&](const Atom& a) { out.push_back(Rule{a, {}, {}}); };
  for (const Atom& a : p.evidence) fact(a);
  for (const Atom& a : p.diagnosis) fact(a);
  for (const Atom& a : p.history) fact(a);
  for (const Measurement& m : p.measurements) fact(Atom{"measurement", {Symbol{m.name}, m.value}});
  for (const Atom& a : p.contraindications) fact(a);
  for (const Atom& a : p.propositions) fact(a);
  return out;
}

std::string to_text(const PatientProfile& p) {
  std::string out;
  for (const Rule& r : profile_to_facts(p)) out += to_string(r) + "\n";
  for (const Atom& a : p.known_absent) out += "% known_absent: " + to_string(a) + "\n";
  return out;
}

std::string profile_hash(const PatientProfile& p) {
  // FNV-1a, so the digest is the same on every platform and run.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : to_text(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Atom> excluded_abducibles(const PatientProfile& p) {
  std::vector<Atom> out = p.known_absent;
  for (const auto& group : exclusive_groups()) {
    bool settled = std::any_of(group.begin(), group.end(), [&](const Atom& a) { return p.has_fact(a); });
    if (!settled) continue;
    for (const Atom& a : group)
      if (!p.has_fact(a)) add_unique(out, a);
  }
  for (const ThresholdRule& t : threshold_rules())
    if (p.measurement(t.measurement)) add_unique(out, Atom{t.proposition, {}});
  return out;
}

Program theory_for(const Program& kb, const PatientProfile& p) {
  Program out;
  out.rules = profile_to_facts(p);
  for (const Rule& r : kb.rules) {
    bool unmeasured = false;
    if (r.head && r.head->arity() == 0) {
      for (const ThresholdRule& t : threshold_rules())
        if (r.head->predicate == t.proposition && !p.measurement(t.measurement)) unmeasured = true;
    }
    if (!unmeasured) out.rules.push_back(r);
  }
  out.abducibles = kb.abducibles;
  return out;
}

PatientProfile confirm_evidence(const PatientProfile& p, std::span<const Atom> atoms) {
  for (const Atom& a : atoms)
    if (!in_vocabulary(a)) throw UnknownAtom(to_string(a));
  PatientProfile out = p;
  for (const Atom& a : atoms) {
    std::erase(out.known_absent, a);
    if (out.has_fact(a)) continue;
    if (a.predicate == "evidence") out.evidence.push_back(a);
    else if (a.predicate == "diagnosis") out.diagnosis.push_back(a);
    else if (a.predicate == "history") out.history.push_back(a);
    else if (a.predicate == "contraindication") out.contraindications.push_back(a);
    else out.propositions.push_back(a);
  }
  validate_profile(out);
  return out;
}

}  // namespace gasp::advisor
