#pragma once

// JSON shapes shared by the CLI and the HTTP service.

#include <json.hpp>

#include "gasp/abduction.hpp"
#include "gasp/advisor/compliance.hpp"
#include "gasp/advisor/hf_kb.hpp"

namespace gasp::advisor {

nlohmann::json to_json(const Recommendation& r);
nlohmann::json to_json(const Explanation& e);
nlohmann::json to_json(const PhaseTimings& t);
/// {proposed, verdict, explanations, compliant_set, timings_ms}
nlohmann::json to_json(const ComplianceReport& r);
/// Grouped facts plus `facts` (fact-format text) and `profile_hash`.
nlohmann::json to_json(const PatientProfile& p);

/// Parses `{"treatment": ..., "cor_class": ...}`. Throws
/// nlohmann::json::exception on a malformed body.
Recommendation recommendation_from_json(const nlohmann::json& j);

}  // namespace gasp::advisor
