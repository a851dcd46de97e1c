#pragma once

// Guideline adherence: the compliant recommendation set of a profile, and
// abductive repair of a proposed treatment that is not in it.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gasp/abduction.hpp"
#include "gasp/advisor/hf_kb.hpp"
#include "gasp/engine.hpp"

namespace gasp::advisor {

enum class Verdict { Compliant, RepairableWithEvidence, Rejected };

std::string_view to_string(Verdict v);

struct PhaseTimings {
  double grounding_ms = 0;
  double enumeration_ms = 0;
  double abduction_ms = 0;
};

struct ComplianceReport {
  Recommendation proposed;
  Verdict verdict = Verdict::Rejected;
  std::vector<Explanation> explanations;
  std::vector<Recommendation> compliant_set;
  PhaseTimings timings;
};

struct AdvisorOptions {
  std::size_t max_explanations = 32;
  /// Keep only subset-minimal explanations.
  bool minimal_only = false;
  SolveOptions solve;
  /// Prepared ground programs kept per advisor.
  std::size_t cache_entries = 64;
};

/// Thread-safe: ground programs are cached by profile hash and shared
/// read-only; every call runs its own solvers.
class Advisor {
 public:
  explicit Advisor(Program kb = kb_rules(), AdvisorOptions options = {});
  ~Advisor();

  std::vector<Recommendation> enumerate_recommendations(const PatientProfile& p, PhaseTimings* timings = nullptr) const;

  /// Throws UnknownAtom if the treatment or class is not in the KB
  /// vocabulary.
  ComplianceReport check_compliance(const PatientProfile& p, const Recommendation& proposed) const;

  /// Abducible atoms offered to the solver for this profile, in
  /// vocabulary order.
  std::vector<Atom> abducibles_for(const PatientProfile& p) const;

  const Program& kb() const noexcept { return kb_; }
  const AdvisorOptions& options() const noexcept { return options_; }

 private:
  struct Cache;
  std::shared_ptr<const PreparedTheory> prepared(const PatientProfile& p, bool abductive, PhaseTimings* t) const;

  Program kb_;
  AdvisorOptions options_;
  std::unique_ptr<Cache> cache_;
};

/// Human-readable report; the explanation lines follow the
/// `Abducibles: { ... }` layout.
std::string render_text(const ComplianceReport& r);

}  // namespace gasp::advisor
