#include "gasp/advisor/compliance.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <mutex>

namespace gasp::advisor {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Compliant: return "Compliant";
    case Verdict::RepairableWithEvidence: return "RepairableWithEvidence";
    case Verdict::Rejected: return "Rejected";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

struct Advisor::Cache {
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const PreparedTheory>> entries;
  std::deque<std::string> age;
};

Advisor::Advisor(Program kb, AdvisorOptions options)
    : kb_(std::move(kb)), options_(options), cache_(std::make_unique<Cache>()) {}

Advisor::~Advisor() = default;

std::vector<Atom> Advisor::abducibles_for(const PatientProfile& p) const {
  std::vector<Atom> facts;
  for (const Rule& r : profile_to_facts(p)) facts.push_back(*r.head);
  std::vector<Atom> excluded = excluded_abducibles(p);
  // Atoms the KB derives are never abduced, nor are threshold propositions
  // whose rule survives for this profile.
  Program theory = theory_for(kb_, p);
  std::vector<Atom> out;
  for (const AbducibleDirective& d : generate_abducible_declarations(vocabulary(), facts, excluded)) {
    bool derived = std::any_of(theory.rules.begin(), theory.rules.end(),
                               [&](const Rule& r) { return r.head && unifiable(*r.head, d.pattern); });
    if (!derived) out.push_back(d.pattern);
  }
  return out;
}

std::shared_ptr<const PreparedTheory> Advisor::prepared(const PatientProfile& p, bool abductive,
                                                        PhaseTimings* t) const {
  std::string key = (abductive ? "a:" : "d:") + profile_hash(p);
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  auto start = Clock::now();
  std::vector<Atom> abducibles;
  if (abductive) abducibles = abducibles_for(p);
  auto theory = prepare_theory(theory_for(kb_, p), abducibles);
  if (t) t->grounding_ms += ms_since(start);

  std::lock_guard lock(cache_->mutex);
  auto [it, inserted] = cache_->entries.emplace(key, theory);
  if (inserted) {
    cache_->age.push_back(key);
    while (cache_->age.size() > std::max<std::size_t>(options_.cache_entries, 1)) {
      cache_->entries.erase(cache_->age.front());
      cache_->age.pop_front();
    }
  }
  return it->second;
}

std::vector<Recommendation> Advisor::enumerate_recommendations(const PatientProfile& p, PhaseTimings* timings) const {
  auto theory = prepared(p, false, timings);
  auto start = Clock::now();
  std::vector<Recommendation> out;
  for (const std::string& t : treatments()) {
    for (const std::string& c : cor_classes()) {
      Recommendation r{t, c};
      Solver solver(theory->gp, theory->classification, options_.solve);
      solver.start({Literal{r.atom(), false}});
      if (solver.next()) out.push_back(std::move(r));
    }
  }
  if (timings) timings->enumeration_ms += ms_since(start);
  return out;
}

ComplianceReport Advisor::check_compliance(const PatientProfile& p, const Recommendation& proposed) const {
  auto known = [](std::span<const std::string> set, const std::string& s) {
    return std::find(set.begin(), set.end(), s) != set.end();
  };
  if (!known(treatments(), proposed.treatment) || !known(cor_classes(), proposed.cor_class))
    throw UnknownAtom(gasp::to_string(proposed.atom()));

  ComplianceReport report;
  report.proposed = proposed;
  report.compliant_set = enumerate_recommendations(p, &report.timings);
  if (std::find(report.compliant_set.begin(), report.compliant_set.end(), proposed) != report.compliant_set.end()) {
    report.verdict = Verdict::Compliant;
    return report;
  }

  auto theory = prepared(p, true, &report.timings);
  auto start = Clock::now();
  Abducer abducer(theory, {Literal{proposed.atom(), false}}, options_.solve);
  std::vector<Explanation> found;
  while (found.size() < options_.max_explanations) {
    auto a = abducer.next();
    if (!a) break;
    bool dup = std::any_of(found.begin(), found.end(), [&](const Explanation& e) { return e.same_as(a->explanation); });
    if (!dup) found.push_back(std::move(a->explanation));
  }
  report.explanations = options_.minimal_only ? minimal_explanations(found) : std::move(found);
  report.timings.abduction_ms = ms_since(start);
  report.verdict = report.explanations.empty() ? Verdict::Rejected : Verdict::RepairableWithEvidence;
  return report;
}

std::string render_text(const ComplianceReport& r) {
  std::string out = "Proposed: " + gasp::to_string(r.proposed.atom()) + "\n";
  out += "Verdict: " + std::string(to_string(r.verdict)) + "\n";
  for (const Explanation& e : r.explanations) out += "Abducibles: " + render(e) + "\n";
  out += "Compliant recommendations:";
  if (r.compliant_set.empty()) out += " none";
  out += "\n";
  for (const Recommendation& c : r.compliant_set) out += "  " + gasp::to_string(c.atom()) + "\n";
  return out;
}

}  // namespace gasp::advisor
