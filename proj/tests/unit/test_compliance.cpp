#include <doctest.h>

#include "printers.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "fixtures.hpp"
#include "gasp/advisor/json.hpp"
#include "gasp/error.hpp"

using namespace gasp;
using namespace gasp::advisor;
using gasp::testing::load_patient;
using gasp::testing::strings;
using gasp::testing::sample_cases;

namespace {

const Recommendation kIsordil1{"hydralazine_and_isosorbide_dinitrate", "class_1"};
const Recommendation kIsordil2a{"hydralazine_and_isosorbide_dinitrate", "class_2a"};

const Advisor& kb_advisor() {
  static const Advisor a;
  return a;
}

bool in(const std::vector<Recommendation>& v, const Recommendation& r) {
  return std::find(v.begin(), v.end(), r) != v.end();
}

}  // namespace

TEST_CASE("patient 1: isordil class 1 is rejected") {
  ComplianceReport r = kb_advisor().check_compliance(load_patient(1), kIsordil1);
  CHECK(r.verdict == Verdict::Rejected);
  CHECK(r.explanations.empty());
  CHECK_FALSE(in(r.compliant_set, kIsordil1));
}

TEST_CASE("patient 1: isordil class 2a needs angioedema history and an ARB contraindication") {
  ComplianceReport r = kb_advisor().check_compliance(load_patient(1), kIsordil2a);
  CHECK(r.verdict == Verdict::RepairableWithEvidence);
  REQUIRE(r.explanations.size() == 1);
  CHECK(render(r.explanations[0]) == "{ history(angioedema), contraindication(arbs) }");
  CHECK(r.explanations[0].assumed_false().empty());
  CHECK(r.compliant_set == std::vector<Recommendation>{{"beta_blockers", "class_1"}});
  CHECK(render_text(r) ==
        "Proposed: recommendation(hydralazine_and_isosorbide_dinitrate, class_2a)\n"
        "Verdict: RepairableWithEvidence\n"
        "Abducibles: { history(angioedema), contraindication(arbs) }\n"
        "Compliant recommendations:\n"
        "  recommendation(beta_blockers, class_1)\n");
}

TEST_CASE("sample patient verdicts") {
  for (const auto& c : sample_cases()) {
    CAPTURE(c.patient);
    ComplianceReport r = kb_advisor().check_compliance(load_patient(c.patient), c.proposed);
    CHECK(r.verdict == c.verdict);
    if (c.verdict == Verdict::RepairableWithEvidence) {
      REQUIRE(r.explanations.size() == 1);
      CHECK(strings(r.explanations[0].assumed_true()) == c.assumed_true);
    }
  }
}

TEST_CASE("ICD explanation keeps the contraindication open") {
  ComplianceReport r = kb_advisor().check_compliance(load_patient(5), {"icd", "class_1"});
  REQUIRE(r.explanations.size() == 1);
  CHECK(render(r.explanations[0]) == "{ survival_year_greater_than_1, not contraindication(icd) }");
}

TEST_CASE("repair closure") {
  for (const auto& c : sample_cases()) {
    if (c.verdict != Verdict::RepairableWithEvidence) continue;
    CAPTURE(c.patient);
    PatientProfile p = load_patient(c.patient);
    ComplianceReport r = kb_advisor().check_compliance(p, c.proposed);
    for (const Explanation& e : r.explanations) {
      auto falsified = e.assumed_false();
      REQUIRE(std::none_of(falsified.begin(), falsified.end(), [&](const Atom& a) { return p.has_fact(a); }));
      auto assumed = e.assumed_true();
      PatientProfile fixed = confirm_evidence(p, assumed);
      ComplianceReport again = kb_advisor().check_compliance(fixed, c.proposed);
      CHECK(again.verdict == Verdict::Compliant);
      CHECK(in(again.compliant_set, c.proposed));

    }
  }
}

TEST_CASE("verdicts partition the reports") {
  for (int n = 1; n <= 10; ++n) {
    PatientProfile p = load_patient(n);
    for (const std::string& t : treatments()) {
      for (const std::string& k : cor_classes()) {
        ComplianceReport r = kb_advisor().check_compliance(p, {t, k});
        switch (r.verdict) {
          case Verdict::Compliant:
            CHECK(r.explanations.empty());
            CHECK(in(r.compliant_set, r.proposed));
            break;
          case Verdict::RepairableWithEvidence:
            CHECK_FALSE(r.explanations.empty());
            CHECK_FALSE(in(r.compliant_set, r.proposed));
            break;
          case Verdict::Rejected:
            CHECK(r.explanations.empty());
            CHECK_FALSE(in(r.compliant_set, r.proposed));
            break;
        }
        for (const Explanation& e : r.explanations)
          for (const Literal& l : e.literals) CHECK_FALSE(p.has_fact(l.atom));
      }
    }
  }
}

TEST_CASE("patient 1 is never recommended isordil at class 1") {
  CHECK_FALSE(in(kb_advisor().enumerate_recommendations(load_patient(1)), kIsordil1));
}

TEST_CASE("empty profile has no recommendations") {
  CHECK(kb_advisor().enumerate_recommendations(PatientProfile{}).empty());
}

TEST_CASE("beta blockers and diuretics go together under fluid retention") {
  PatientProfile p = load_patient(9);
  auto set = kb_advisor().enumerate_recommendations(p);
  CHECK(in(set, {"beta_blockers", "class_1"}));
  CHECK(in(set, {"diuretics", "class_1"}));

  std::vector<Atom> ci = {parse_atom("contraindication(diuretics)")};
  auto blocked = kb_advisor().enumerate_recommendations(confirm_evidence(p, ci));
  CHECK_FALSE(in(blocked, {"beta_blockers", "class_1"}));
  CHECK_FALSE(in(blocked, {"diuretics", "class_1"}));
}

TEST_CASE("high potassium contraindicates aldosterone antagonists") {
  for (int n : {8, 10}) {
    PatientProfile p = load_patient(n);
    CHECK(kb_advisor().check_compliance(p, {"aldosterone_antagonists", "class_1"}).verdict == Verdict::Rejected);
  }
}

TEST_CASE("unknown treatments and classes") {
  CHECK_THROWS_AS(kb_advisor().check_compliance(load_patient(1), {"aspirin", "class_1"}), UnknownAtom);
  CHECK_THROWS_AS(kb_advisor().check_compliance(load_patient(1), {"icd", "class_9"}), UnknownAtom);
}

TEST_CASE("abducibles offered for a profile") {
  PatientProfile p = load_patient(1);
  auto abd = kb_advisor().abducibles_for(p);
  auto has = [&](const char* a) { return std::find(abd.begin(), abd.end(), parse_atom(a)) != abd.end(); };
  CHECK(has("history(angioedema)"));
  CHECK(has("diagnosis(atrial_fibrillation)"));
  CHECK(has("survival_year_greater_than_1"));
  CHECK_FALSE(has("contraindication(ace_inhibitors)"));
  CHECK_FALSE(has("lvef_less_than_30"));
  CHECK_FALSE(has("evidence(accf_stage_d)"));
  CHECK_FALSE(has("evidence(male)"));
}

TEST_CASE("explanation cap and minimal filter") {
  AdvisorOptions o;
  o.max_explanations = 1;
  Advisor capped(kb_rules(), o);
  PatientProfile p = parse_profile("evidence(accf_stage_c).\n");
  ComplianceReport r = capped.check_compliance(p, {"beta_blockers", "class_1"});
  CHECK(r.explanations.size() <= 1);

  o.max_explanations = 32;
  o.minimal_only = true;
  Advisor minimal(kb_rules(), o);
  ComplianceReport m = minimal.check_compliance(p, {"beta_blockers", "class_1"});
  ComplianceReport all = kb_advisor().check_compliance(p, {"beta_blockers", "class_1"});
  CHECK(m.verdict == all.verdict);
  CHECK(m.explanations.size() <= all.explanations.size());
  for (const Explanation& a : m.explanations)
    for (const Explanation& b : m.explanations)
      if (&a != &b) CHECK_FALSE(b.subset_of(a));
}

TEST_CASE("report JSON shape") {
  ComplianceReport r = kb_advisor().check_compliance(load_patient(1), kIsordil2a);
  nlohmann::json j = to_json(r);
  nlohmann::json proposed = {{"treatment", "hydralazine_and_isosorbide_dinitrate"}, {"cor_class", "class_2a"}};
  CHECK(j["proposed"] == proposed);
  CHECK(j["verdict"] == "RepairableWithEvidence");
  auto explanations =
      nlohmann::json::parse(R"J([{"assumed_true": ["history(angioedema)", "contraindication(arbs)"], "assumed_false": []}])J");
  auto compliant = nlohmann::json::parse(R"([{"treatment": "beta_blockers", "cor_class": "class_1"}])");
  CHECK(j["explanations"] == explanations);
  CHECK(j["compliant_set"] == compliant);
  for (const char* k : {"grounding", "enumeration", "abduction"}) {
    CHECK(j["timings_ms"][k].is_number());
    CHECK(j["timings_ms"][k].get<double>() >= 0.0);
  }
  CHECK(recommendation_from_json(j["proposed"]) == kIsordil2a);
  nlohmann::json partial = {{"treatment", "icd"}};
  CHECK_THROWS(recommendation_from_json(partial));
}

TEST_CASE("profile JSON shape") {
  nlohmann::json j = to_json(load_patient(1));
  nlohmann::json lvef = {{"name", "lvef"}, {"value", "16"}};
  nlohmann::json contra = {"contraindication(crt)", "contraindication(ace_inhibitors)"};
  CHECK(j["measurements"][1] == lvef);
  CHECK(j["contraindications"] == contra);
  CHECK(j["notes"].size() == 1);
  CHECK(j["profile_hash"] == profile_hash(load_patient(1)));
  CHECK(parse_profile(j["facts"].get<std::string>()) == load_patient(1));
}

TEST_CASE("concurrent checks agree with serial ones") {
  std::vector<std::string> serial;
  for (const auto& c : sample_cases())
    serial.push_back(render_text(kb_advisor().check_compliance(load_patient(c.patient), c.proposed)));

  AdvisorOptions o;
  o.cache_entries = 3;
  Advisor shared(kb_rules(), o);
  std::vector<std::future<std::vector<std::string>>> futures;
  for (int t = 0; t < 8; ++t) {
    futures.push_back(std::async(std::launch::async, [&shared, t] {
      std::vector<std::string> out(sample_cases().size());
      for (std::size_t i = 0; i < sample_cases().size(); ++i) {
        std::size_t k = (i + t) % sample_cases().size();
        const auto& c = sample_cases()[k];
        out[k] = render_text(shared.check_compliance(load_patient(c.patient), c.proposed));
      }
      return out;
    }));
  }
  for (auto& f : futures) CHECK(f.get() == serial);
}
