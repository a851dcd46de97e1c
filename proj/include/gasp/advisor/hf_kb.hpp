#pragma once

// Heart-failure knowledge base, clinical vocabulary and patient profiles.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gasp/decimal.hpp"
#include "gasp/syntax.hpp"

namespace gasp::advisor {

struct Measurement {
  std::string name;
  Decimal value;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Clinical facts about one patient. Atoms are stored whole, e.g.
/// `evidence(accf_stage_c)` or `evidence(age, 60)`.
struct PatientProfile {
  std::vector<Atom> evidence;
  std::vector<Atom> diagnosis;
  std::vector<Atom> history;
  std::vector<Measurement> measurements;
  std::vector<Atom> contraindications;
  /// Confirmed threshold propositions such as survival_year_greater_than_1.
  std::vector<Atom> propositions;
  /// Conditions the record explicitly rules out.
  std::vector<Atom> known_absent;
  /// Normalization provenance; not part of the clinical content.
  std::vector<std::string> notes;

  bool operator==(const PatientProfile& o) const {
    return evidence == o.evidence && diagnosis == o.diagnosis && history == o.history &&
           measurements == o.measurements && contraindications == o.contraindications &&
           propositions == o.propositions && known_absent == o.known_absent;
  }

  std::optional<Decimal> measurement(std::string_view name) const;
  /// True if `atom` is one of the profile's facts.
  bool has_fact(const Atom& atom) const;
};

struct Recommendation {
  std::string treatment;
  std::string cor_class;

  Atom atom() const;
  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// A numeric finding reduced to a proposition:
/// `proposition :- measurement(name, Data), Data op bound.`
struct ThresholdRule {
  std::string proposition;
  std::string measurement;
  CompareOp op;
  Decimal bound;

  Rule compile() const;
};

std::span<const ThresholdRule> threshold_rules();

/// Text of the shipped hf_guideline.asp.
std::string_view kb_source();

/// The shipped KB, parsed.
const Program& kb_rules();

/// Every clinical atom the KB reads, plus the threshold propositions.
/// Append-only.
std::span<const Atom> vocabulary();
bool in_vocabulary(const Atom& atom);

std::span<const std::string> treatments();
std::span<const std::string> cor_classes();

/// Parses the fact format (one fact per line, `% known_absent: <atom>`
/// annotations). Throws SyntaxError or ProfileError.
PatientProfile parse_profile(std::string_view text);

/// LVEF below 1.0 is read as a fraction and scaled to percent.
PatientProfile normalize_profile(PatientProfile raw);

/// Throws ProfileError unless: at most one ACCF/AHA stage, at most one
/// NYHA class, no negative measurement, LVEF within [0, 100].
void validate_profile(const PatientProfile& p);

/// One fact per atom and measurement; known_absent yields nothing.
std::vector<Rule> profile_to_facts(const PatientProfile& p);

/// Fact-format text, readable by parse_profile.
std::string to_text(const PatientProfile& p);

/// Stable 64-bit digest of the clinical content, as 16 hex digits.
std::string profile_hash(const PatientProfile& p);

/// Vocabulary atoms that must not be abduced for this profile: the known
/// absent ones, the other members of an exclusive group that the profile
/// settles (stage, NYHA class, sex, ejection-fraction type) and threshold
/// propositions whose measurement is present.
std::vector<Atom> excluded_abducibles(const PatientProfile& p);

/// KB plus profile facts. Threshold rules whose measurement the profile
/// lacks are left out, so those propositions carry no rule and may be
/// abduced.
Program theory_for(const Program& kb, const PatientProfile& p);

/// Adds confirmed atoms as facts and drops them from known_absent.
/// Throws UnknownAtom for atoms outside the vocabulary.
PatientProfile confirm_evidence(const PatientProfile& p, std::span<const Atom> atoms);

}  // namespace gasp::advisor
