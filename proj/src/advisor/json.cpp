#include "gasp/advisor/json.hpp"

namespace gasp::advisor {

using nlohmann::json;

namespace {

json atoms(const std::vector<Atom>& v) {
  json out = json::array();
  for (const Atom& a : v) out.push_back(gasp::to_string(a));
  return out;
}

}  // namespace

json to_json(const Recommendation& r) { return {{"treatment", r.treatment}, {"cor_class", r.cor_class}}; }

json to_json(const Explanation& e) {
  return {{"assumed_true", atoms(e.assumed_true())}, {"assumed_false", atoms(e.assumed_false())}};
}

json to_json(const PhaseTimings& t) {
  return {{"grounding", t.grounding_ms}, {"enumeration", t.enumeration_ms}, {"abduction", t.abduction_ms}};
}

json to_json(const ComplianceReport& r) {
  json explanations = json::array();
  for (const Explanation& e : r.explanations) explanations.push_back(to_json(e));
  json compliant = json::array();
  for (const Recommendation& c : r.compliant_set) compliant.push_back(to_json(c));
  return {{"proposed", to_json(r.proposed)},
          {"verdict", std::string(to_string(r.verdict))},
          {"explanations", std::move(explanations)},
          {"compliant_set", std::move(compliant)},
          {"timings_ms", to_json(r.timings)}};
}

json to_json(const PatientProfile& p) {
  json measurements = json::array();
  for (const Measurement& m : p.measurements) measurements.push_back({{"name", m.name}, {"value", m.value.to_string()}});
  return {{"evidence", atoms(p.evidence)},
          {"diagnosis", atoms(p.diagnosis)},
          {"history", atoms(p.history)},
          {"measurements", std::move(measurements)},
          {"contraindications", atoms(p.contraindications)},
          {"propositions", atoms(p.propositions)},
          {"known_absent", atoms(p.known_absent)},
          {"notes", p.notes},
          {"facts", to_text(p)},
          {"profile_hash", profile_hash(p)}};
}

Recommendation recommendation_from_json(const json& j) {
  return Recommendation{j.at("treatment").get<std::string>(), j.at("cor_class").get<std::string>()};
}

}  // namespace gasp::advisor
