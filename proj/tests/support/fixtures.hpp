#pragma once

// Shipped data files and the expected verdict for each sample patient.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gasp/advisor/compliance.hpp"
#include "gasp/advisor/hf_kb.hpp"

namespace gasp::testing {

inline std::string data_path(const std::string& rel) { return std::string(GASP_SOURCE_DIR) + "/data/" + rel; }

inline std::string read_data(const std::string& rel) {
  std::ifstream in(data_path(rel));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string patient_file(int n) { return data_path("patients/patient" + std::to_string(n) + ".facts"); }

inline advisor::PatientProfile load_patient(int n) {
  advisor::PatientProfile p =
      advisor::normalize_profile(advisor::parse_profile(read_data("patients/patient" + std::to_string(n) + ".facts")));
  advisor::validate_profile(p);
  return p;
}

struct SampleCase {
  int patient;
  advisor::Recommendation proposed;
  advisor::Verdict verdict;
  /// assumed_true of the single expected explanation, in derivation order.
  std::vector<std::string> assumed_true;
};

inline const std::vector<SampleCase>& sample_cases() {
  using V = advisor::Verdict;
  static const std::vector<SampleCase> cases = {
      {1, {"hydralazine_and_isosorbide_dinitrate", "class_2a"}, V::RepairableWithEvidence,
       {"history(angioedema)", "contraindication(arbs)"}},
      {2, {"beta_blockers", "class_1"}, V::Compliant, {}},
      {3, {"ace_inhibitors", "class_1"}, V::Compliant, {}},
      {4, {"anticoagulants", "class_1"}, V::Rejected, {}},
      {5, {"icd", "class_1"}, V::RepairableWithEvidence, {"survival_year_greater_than_1"}},
      {6, {"hydralazine_and_isosorbide_dinitrate", "class_2a"}, V::RepairableWithEvidence,
       {"history(angioedema)", "contraindication(arbs)"}},
      {7, {"aldosterone_antagonists", "class_1"}, V::RepairableWithEvidence, {"evidence(recent_mi)"}},
      {8, {"aldosterone_antagonists", "class_1"}, V::Rejected, {}},
      {9, {"diuretics", "class_1"}, V::Compliant, {}},
      {10, {"aldosterone_antagonists", "class_1"}, V::Rejected, {}},
  };
  return cases;
}

inline std::vector<std::string> strings(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  for (const Atom& a : atoms) out.push_back(to_string(a));
  return out;
}

}  // namespace gasp::testing
