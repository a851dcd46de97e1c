#include "gasp/grounder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

namespace gasp {

AtomId GroundProgram::intern(const Atom& atom) {
  if (auto it = index_.find(atom); it != index_.end()) return it->second;
  auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(atom);
  index_.emplace(atom, id);
  defining_.emplace_back();
  return id;
}

std::optional<AtomId> GroundProgram::find(const Atom& atom) const {
  if (auto it = index_.find(atom); it != index_.end()) return it->second;
  return std::nullopt;
}

void GroundProgram::add_rule(GroundRule rule) {
  if (rule.head) defining_[*rule.head].push_back(static_cast<std::uint32_t>(rules_.size()));
  rules_.push_back(std::move(rule));
}

std::span<const std::uint32_t> GroundProgram::rules_for(AtomId id) const {
  if (id >= defining_.size()) return {};
  return defining_[id];
}

Program GroundProgram::to_program() const {
  Program p;
  for (const GroundRule& gr : rules_) {
    Rule r;
    if (gr.head) r.head = atoms_[*gr.head];
    for (const GroundLiteral& l : gr.body) r.body.emplace_back(Literal{atoms_[l.atom], l.negated});
    p.rules.push_back(std::move(r));
  }
  return p;
}

namespace {

void add_unique(std::vector<Term>& out, const Term& t) {
  if (is_variable(t)) return;
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

void add_atom_terms(std::vector<Term>& out, const Atom& a) {
  for (const Term& t : a.args) add_unique(out, t);
}

using PredicateKey = std::pair<std::string, std::size_t>;

/// Atoms that may become true, indexed by predicate for joining.
class Domain {
 public:
  bool insert(const Atom& a) {
    if (!seen_.insert(a).second) return false;
    by_predicate_[{a.predicate, a.arity()}].push_back(a);
    return true;
  }

  const std::vector<Atom>& matching(const Atom& pattern) const {
    static const std::vector<Atom> empty;
    auto it = by_predicate_.find({pattern.predicate, pattern.arity()});
    return it == by_predicate_.end() ? empty : it->second;
  }

 private:
  std::unordered_set<Atom, AtomHash> seen_;
  std::map<PredicateKey, std::vector<Atom>> by_predicate_;
};

class Substitution {
 public:
  const Term* lookup(const std::string& name) const {
    for (const auto& [k, v] : bindings_)
      if (k == name) return &v;
    return nullptr;
  }
  void bind(const std::string& name, Term value) { bindings_.emplace_back(name, std::move(value)); }
  std::size_t size() const { return bindings_.size(); }
  void truncate(std::size_t n) { bindings_.resize(n); }

  Term apply(const Term& t) const {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (const Term* bound = lookup(v->name)) return *bound;
    }
    return t;
  }

  Atom apply(const Atom& a) const {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(apply(t));
    return out;
  }

 private:
  std::vector<std::pair<std::string, Term>> bindings_;
};

bool match(const Atom& pattern, const Atom& ground, Substitution& s) {
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& p = pattern.args[i];
    if (const auto* v = std::get_if<Variable>(&p)) {
      if (const Term* bound = s.lookup(v->name)) {
        if (*bound != ground.args[i]) return false;
      } else {
        s.bind(v->name, ground.args[i]);
      }
    } else if (p != ground.args[i]) {
      return false;
    }
  }
  return true;
}

bool builtin_bound(const Builtin& b, const Substitution& s) {
  auto ok = [&](const Term& t) {
    const auto* v = std::get_if<Variable>(&t);
    return !v || s.lookup(v->name) != nullptr;
  };
  return ok(b.left) && ok(b.right);
}

bool builtins_hold(const std::vector<const Builtin*>& builtins, const Substitution& s, bool require_all) {
  for (const Builtin* b : builtins) {
    if (!builtin_bound(*b, s)) {
      if (require_all) return false;
      continue;
    }
    if (!evaluate(Builtin{s.apply(b->left), b->op, s.apply(b->right)})) return false;
  }
  return true;
}

/// Enumerates the substitutions of one rule against the domain.
class RuleInstantiator {
 public:
  RuleInstantiator(const Rule& rule, const Domain& domain, const std::vector<Term>& universe)
      : domain_(domain), universe_(universe) {
    for (const BodyElement& e : rule.body) {
      if (const auto* l = std::get_if<Literal>(&e)) {
        if (!l->negated) positives_.push_back(&l->atom);
      } else {
        builtins_.push_back(&std::get<Builtin>(e));
      }
    }
    std::vector<std::string> seen;
    auto note = [&](const Term& t) {
      if (const auto* v = std::get_if<Variable>(&t)) {
        if (std::find(seen.begin(), seen.end(), v->name) == seen.end()) seen.push_back(v->name);
      }
    };
    for (const Atom* a : positives_)
      for (const Term& t : a->args) note(t);
    std::size_t bound_by_body = seen.size();
    if (rule.head)
      for (const Term& t : rule.head->args) note(t);
    for (const BodyElement& e : rule.body) {
      if (const auto* l = std::get_if<Literal>(&e)) {
        for (const Term& t : l->atom.args) note(t);
      } else {
        note(std::get<Builtin>(e).left);
        note(std::get<Builtin>(e).right);
      }
    }
    free_vars_.assign(seen.begin() + static_cast<std::ptrdiff_t>(bound_by_body), seen.end());
  }

  void run(const std::function<void(const Substitution&)>& emit) {
    Substitution s;
    join(0, s, emit);
  }

 private:
  void join(std::size_t i, Substitution& s, const std::function<void(const Substitution&)>& emit) {
    if (i == positives_.size()) {
      spread(0, s, emit);
      return;
    }
    const Atom& pattern = *positives_[i];
    const std::vector<Atom>& candidates = domain_.matching(pattern);
    // The domain may grow while we iterate; only look at what existed on entry.
    std::size_t n = candidates.size();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t mark = s.size();
      if (match(pattern, candidates[k], s) && builtins_hold(builtins_, s, false)) join(i + 1, s, emit);
      s.truncate(mark);
    }
  }

  void spread(std::size_t i, Substitution& s, const std::function<void(const Substitution&)>& emit) {
    if (i == free_vars_.size()) {
      if (builtins_hold(builtins_, s, true)) emit(s);
      return;
    }
    for (const Term& value : universe_) {
      std::size_t mark = s.size();
      s.bind(free_vars_[i], value);
      spread(i + 1, s, emit);
      s.truncate(mark);
    }
  }

  const Domain& domain_;
  const std::vector<Term>& universe_;
  std::vector<const Atom*> positives_;
  std::vector<const Builtin*> builtins_;
  std::vector<std::string> free_vars_;
};

}  // namespace

std::vector<Term> herbrand_universe(const Program& program) {
  std::vector<Term> out;
  for (const Rule& r : program.rules) {
    if (r.head) add_atom_terms(out, *r.head);
    for (const BodyElement& e : r.body) {
      if (const auto* l = std::get_if<Literal>(&e)) {
        add_atom_terms(out, l->atom);
      } else {
        add_unique(out, std::get<Builtin>(e).left);
        add_unique(out, std::get<Builtin>(e).right);
      }
    }
  }
  for (const AbducibleDirective& d : program.abducibles) add_atom_terms(out, d.pattern);
  for (const Query& q : program.queries)
    for (const Literal& l : q) add_atom_terms(out, l.atom);
  return out;
}

GroundProgram ground(const Program& program, const GroundOptions& options) {
  const std::vector<Term> universe = herbrand_universe(program);
  Domain domain;
  std::size_t work = 0;
  auto count = [&] {
    if (++work > options.max_instances) throw GroundingExplosion(options.max_instances);
  };

  // Fixpoint of the positive part: which head atoms can possibly be derived.
  for (bool changed = true; changed;) {
    changed = false;
    work = 0;
    for (const Rule& rule : program.rules) {
      if (!rule.head) continue;
      std::vector<Atom> derived;
      RuleInstantiator(rule, domain, universe).run([&](const Substitution& s) {
        count();
        derived.push_back(s.apply(*rule.head));
      });
      for (const Atom& a : derived) changed |= domain.insert(a);
    }
  }

  GroundProgram gp;
  std::set<std::pair<std::optional<AtomId>, std::vector<std::pair<AtomId, bool>>>> emitted;
  work = 0;
  for (const Rule& rule : program.rules) {
    RuleInstantiator(rule, domain, universe).run([&](const Substitution& s) {
      count();
      GroundRule gr;
      if (rule.head) gr.head = gp.intern(s.apply(*rule.head));
      std::vector<std::pair<AtomId, bool>> key;
      for (const BodyElement& e : rule.body) {
        const auto* l = std::get_if<Literal>(&e);
        if (!l) continue;
        AtomId id = gp.intern(s.apply(l->atom));
        gr.body.push_back({id, l->negated});
        key.emplace_back(id, l->negated);
      }
      if (emitted.emplace(gr.head, std::move(key)).second) gp.add_rule(std::move(gr));
    });
  }
  return gp;
}

}  // namespace gasp
