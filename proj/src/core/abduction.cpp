#include "gasp/abduction.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace gasp {

std::vector<Atom> Explanation::assumed_true() const {
  std::vector<Atom> out;
  for (const Literal& l : literals)
    if (!l.negated) out.push_back(l.atom);
  return out;
}

std::vector<Atom> Explanation::assumed_false() const {
  std::vector<Atom> out;
  for (const Literal& l : literals)
    if (l.negated) out.push_back(l.atom);
  return out;
}

bool Explanation::subset_of(const Explanation& other) const {
  return std::all_of(literals.begin(), literals.end(), [&](const Literal& l) {
    return std::find(other.literals.begin(), other.literals.end(), l) != other.literals.end();
  });
}

bool Explanation::same_as(const Explanation& other) const {
  return literals.size() == other.literals.size() && subset_of(other);
}

// ---------------------------------------------------------------------------
// Unification of flat atoms

namespace {

class Bindings {
 public:
  Term deref(Term t) const {
    while (const auto* v = std::get_if<Variable>(&t)) {
      auto it = map_.find(v->name);
      if (it == map_.end()) break;
      t = it->second;
    }
    return t;
  }

  bool unify(const Term& a, const Term& b) {
    Term x = deref(a), y = deref(b);
    if (const auto* v = std::get_if<Variable>(&x)) {
      if (x != y) map_[v->name] = y;
      return true;
    }
    if (const auto* v = std::get_if<Variable>(&y)) {
      map_[v->name] = x;
      return true;
    }
    return x == y;
  }

 private:
  std::map<std::string, Term> map_;
};

Term tag(const Term& t, char side) {
  if (const auto* v = std::get_if<Variable>(&t)) return Variable{std::string(1, side) + ":" + v->name};
  return t;
}

}  // namespace

bool unifiable(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return false;
  Bindings env;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!env.unify(tag(a.args[i], 'L'), tag(b.args[i], 'R'))) return false;
  }
  return true;
}

bool matches(const Atom& pattern, const Atom& atom) { return atom.ground() && unifiable(pattern, atom); }

void check_abducibles(const Program& theory, std::span<const Atom> patterns) {
  for (const Atom& p : patterns) {
    if (p.hidden()) throw AbducibleConflict("abducible uses an auxiliary predicate: " + to_string(p));
    for (const Rule& r : theory.rules) {
      if (r.head && unifiable(p, *r.head)) {
        throw AbducibleConflict("abducible " + to_string(p) + " unifies with the head of `" + to_string(r) + "`");
      }
    }
  }
}

namespace {

Atom renamed(const Atom& a, std::string_view prefix) {
  return Atom{std::string(prefix) + a.predicate, a.args};
}

Literal pos(Atom a) { return Literal{std::move(a), false}; }
Literal neg(Atom a) { return Literal{std::move(a), true}; }

std::vector<Atom> distinct_patterns(const Program& program) {
  std::vector<Atom> out;
  for (const AbducibleDirective& d : program.abducibles)
    if (std::find(out.begin(), out.end(), d.pattern) == out.end()) out.push_back(d.pattern);
  return out;
}

}  // namespace

Program expand_abducibles(const Program& program) {
  std::vector<Atom> patterns = distinct_patterns(program);
  check_abducibles(program, patterns);
  Program out = program;
  out.abducibles.clear();
  for (const Atom& g : patterns) {
    Atom not_g = renamed(g, kNegPrefix);
    Atom abd = renamed(g, kAbdPrefix);
    Atom not_abd = renamed(g, kNegAbdPrefix);
    out.rules.push_back(Rule{g, {neg(not_g), pos(abd)}, {}});
    out.rules.push_back(Rule{not_g, {neg(g)}, {}});
    out.rules.push_back(Rule{abd, {neg(not_abd)}, {}});
    out.rules.push_back(Rule{not_abd, {neg(abd)}, {}});
  }
  return out;
}

Program expand_abducibles_two_rule(const Program& program) {
  std::vector<Atom> patterns = distinct_patterns(program);
  check_abducibles(program, patterns);
  Program out = program;
  out.abducibles.clear();
  for (const Atom& g : patterns) {
    Atom not_g = renamed(g, kNegPrefix);
    out.rules.push_back(Rule{g, {neg(not_g)}, {}});
    out.rules.push_back(Rule{not_g, {neg(g)}, {}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Abducer

std::shared_ptr<const PreparedTheory> prepare_theory(const Program& theory, std::span<const Atom> abducibles,
                                                     const GroundOptions& options) {
  Program t = theory;
  t.queries.clear();
  for (const Atom& a : abducibles) t.abducibles.push_back({a, {}});
  auto out = std::make_shared<PreparedTheory>();
  out->patterns = distinct_patterns(t);
  out->gp = ground(expand_abducibles(t), options);
  out->classification = classify_rules(out->gp);
  return out;
}

struct Abducer::State {
  std::shared_ptr<const PreparedTheory> theory;
  std::optional<Solver> solver;

  bool abducible(const Atom& a) const {
    const auto& ps = theory->patterns;
    return std::any_of(ps.begin(), ps.end(), [&](const Atom& p) { return matches(p, a); });
  }
};

Abducer::Abducer(const AbductionProblem& problem, SolveOptions options)
    : Abducer(prepare_theory(problem.theory, problem.abducibles), problem.observation, options) {}

Abducer::Abducer(std::shared_ptr<const PreparedTheory> theory, const Query& observation, SolveOptions options)
    : s_(std::make_unique<State>()) {
  s_->theory = std::move(theory);
  s_->solver.emplace(s_->theory->gp, s_->theory->classification, options);
  s_->solver->start(observation);
}

Abducer::~Abducer() = default;
Abducer::Abducer(Abducer&&) noexcept = default;

std::optional<Abduction> Abducer::next() {
  auto answer = s_->solver->next();
  if (!answer) return std::nullopt;
  Abduction out;
  for (const Literal& l : answer->literals)
    if (!l.atom.hidden() && s_->abducible(l.atom)) out.explanation.literals.push_back(l);
  out.answer = std::move(*answer);
  return out;
}

const GroundProgram& Abducer::ground_program() const { return s_->theory->gp; }

std::span<const Atom> Abducer::patterns() const { return s_->theory->patterns; }

std::vector<Abduction> abduce_all(const AbductionProblem& problem, SolveOptions options, std::size_t limit) {
  Abducer abducer(problem, options);
  std::vector<Abduction> out;
  while (limit == 0 || out.size() < limit) {
    auto a = abducer.next();
    if (!a) break;
    out.push_back(std::move(*a));
  }
  return out;
}

std::vector<Explanation> distinct_explanations(const std::vector<Abduction>& answers) {
  std::vector<Explanation> out;
  for (const Abduction& a : answers) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const Explanation& e) { return e.same_as(a.explanation); });
    if (!dup) out.push_back(a.explanation);
  }
  return out;
}

std::vector<Explanation> minimal_explanations(const std::vector<Explanation>& explanations) {
  std::vector<Explanation> out;
  for (const Explanation& e : explanations) {
    bool dominated = std::any_of(explanations.begin(), explanations.end(), [&](const Explanation& other) {
      return other.subset_of(e) && !e.subset_of(other);
    });
    bool dup = std::any_of(out.begin(), out.end(), [&](const Explanation& k) { return k.same_as(e); });
    if (!dominated && !dup) out.push_back(e);
  }
  return out;
}

std::vector<AbducibleDirective> generate_abducible_declarations(std::span<const Atom> vocabulary,
                                                                std::span<const Atom> profile_facts,
                                                                std::span<const Atom> excluded) {
  auto in = [](std::span<const Atom> set, const Atom& a) { return std::find(set.begin(), set.end(), a) != set.end(); };
  std::vector<AbducibleDirective> out;
  for (const Atom& a : vocabulary) {
    if (in(profile_facts, a) || in(excluded, a)) continue;
    bool dup = std::any_of(out.begin(), out.end(), [&](const AbducibleDirective& d) { return d.pattern == a; });
    if (!dup) out.push_back({a, {}});
  }
  return out;
}

std::string render(const Explanation& e) { return render_set(e.literals); }

std::string render_answer(const Abduction& a, std::span<const Atom> patterns) {
  auto abducible = [&](const Atom& atom) {
    return std::any_of(patterns.begin(), patterns.end(), [&](const Atom& p) { return matches(p, atom); });
  };
  std::vector<Literal> ordered;
  for (const Literal& l : a.answer.literals)
    if (!abducible(l.atom)) ordered.push_back(l);
  for (const Literal& l : a.answer.literals)
    if (abducible(l.atom)) ordered.push_back(l);
  return render_set(ordered);
}

}  // namespace gasp
