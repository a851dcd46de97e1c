#include "gasp/engine.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <string>

namespace gasp {

// ---------------------------------------------------------------------------
// Rule classification

namespace {

// Reachability states per atom: bit (parity | saw_negation << 1).
constexpr std::uint8_t bit(int parity, int saw_negation) {
  return static_cast<std::uint8_t>(1u << (parity | (saw_negation << 1)));
}

class Reachability {
 public:
  explicit Reachability(const GroundProgram& gp) : gp_(gp), memo_(gp.atom_count()) {}

  /// For every atom, which (parity, saw_negation) states are reachable
  /// from `from` along head -> body edges. `from` itself is reachable with
  /// the empty path.
  const std::vector<std::uint8_t>& from(AtomId start) {
    auto& slot = memo_[start];
    if (slot) return *slot;
    std::vector<std::uint8_t> seen(gp_.atom_count(), 0);
    std::deque<std::pair<AtomId, int>> queue;
    seen[start] |= bit(0, 0);
    queue.emplace_back(start, 0);
    while (!queue.empty()) {
      auto [atom, state] = queue.front();
      queue.pop_front();
      int parity = state & 1, saw = state >> 1;
      for (std::uint32_t ri : gp_.rules_for(atom)) {
        for (const GroundLiteral& l : gp_.rule(ri).body) {
          int np = parity ^ (l.negated ? 1 : 0);
          int ns = saw | (l.negated ? 1 : 0);
          std::uint8_t b = bit(np, ns);
          if (!(seen[l.atom] & b)) {
            seen[l.atom] |= b;
            queue.emplace_back(l.atom, np | (ns << 1));
          }
        }
      }
    }
    slot = std::move(seen);
    return *slot;
  }

 private:
  const GroundProgram& gp_;
  std::vector<std::optional<std::vector<std::uint8_t>>> memo_;
};

}  // namespace

RuleClassification classify_rules(const GroundProgram& gp) {
  RuleClassification out;
  Reachability reach(gp);
  for (std::uint32_t ri = 0; ri < gp.rules().size(); ++ri) {
    const GroundRule& r = gp.rule(ri);
    if (!r.head) {
      out.nmr_checks.push_back({ri, std::nullopt, r.body});
      continue;
    }
    bool odd = false, even = false, has_non_odd_path = r.body.empty();
    for (const GroundLiteral& l : r.body) {
      const std::uint8_t states = reach.from(l.atom)[*r.head];
      int s = l.negated ? 1 : 0;
      bool lit_odd = false, lit_non_odd = states == 0;
      for (int parity = 0; parity < 2; ++parity) {
        for (int saw = 0; saw < 2; ++saw) {
          if (!(states & bit(parity, saw))) continue;
          if ((parity ^ s) == 1) {
            lit_odd = true;
          } else {
            lit_non_odd = true;
            if (s || saw) even = true;
          }
        }
      }
      odd |= lit_odd;
      has_non_odd_path |= lit_non_odd;
    }
    if (odd) {
      out.olon_rules.push_back(ri);
      out.nmr_checks.push_back({ri, r.head, r.body});
    }
    if (has_non_odd_path) out.ordinary_rules.push_back(ri);
    if (even) out.even_loop_rules.push_back(ri);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solver machine

namespace {

enum class GoalKind : std::uint8_t { CallPos, CallNeg, ExitPos, ExitNeg, FailRule, Check, Emit };

struct Goal {
  GoalKind kind;
  std::uint32_t atom;   // atom, or check index for Check
  std::uint32_t rule;   // rule index for FailRule
  std::uint32_t negs;   // negations crossed from the root call
};

struct Node {
  Goal goal;
  std::int32_t next;
};

enum class Mark : std::uint8_t { None, PosOpen, PosDone, NegOpen, NegDone };

enum class ChoiceKind : std::uint8_t { Rules, FailRule, Check };

struct ChoicePoint {
  ChoiceKind kind;
  std::uint32_t atom;  // atom, or check index
  std::uint32_t rule;
  std::uint32_t alt;
  std::uint32_t negs;
  std::int32_t rest;
  std::size_t trail;
  std::size_t arena;
  std::size_t order;
  std::size_t depth;
};

}  // namespace

struct Solver::Machine {
  const GroundProgram& gp;
  std::unique_ptr<RuleClassification> owned;
  const RuleClassification* cls;
  SolveOptions options;

  // Query atoms unknown to the program get ids after the program's atoms.
  std::vector<Atom> extra_atoms;

  std::vector<Mark> mark;
  std::vector<std::uint32_t> frame_negs;
  std::vector<std::pair<AtomId, Mark>> trail;
  std::vector<AtomId> order;
  std::vector<Node> arena;
  std::vector<ChoicePoint> choices;
  std::int32_t cont = -1;
  std::size_t depth = 0;
  std::size_t steps = 0;

  std::vector<std::vector<GroundLiteral>> instances;
  std::size_t instance = 0;
  bool running = false;   // an instance is loaded
  bool resume = false;    // last call emitted; backtrack before continuing
  std::set<std::vector<std::pair<AtomId, bool>>> seen;

  Machine(const GroundProgram& g, const RuleClassification* c, SolveOptions o)
      : gp(g), cls(c), options(o) {
    if (!cls) {
      owned = std::make_unique<RuleClassification>(classify_rules(gp));
      cls = owned.get();
    }
  }

  std::size_t atom_total() const { return gp.atom_count() + extra_atoms.size(); }

  const Atom& atom(AtomId id) const {
    return id < gp.atom_count() ? gp.atom(id) : extra_atoms[id - gp.atom_count()];
  }

  std::span<const std::uint32_t> rules_for(AtomId id) const {
    return id < gp.atom_count() ? gp.rules_for(id) : std::span<const std::uint32_t>{};
  }

  AtomId resolve(const Atom& a) {
    if (auto id = gp.find(a)) return *id;
    for (std::size_t i = 0; i < extra_atoms.size(); ++i)
      if (extra_atoms[i] == a) return static_cast<AtomId>(gp.atom_count() + i);
    extra_atoms.push_back(a);
    return static_cast<AtomId>(gp.atom_count() + extra_atoms.size() - 1);
  }

  // -- query instantiation ---------------------------------------------------

  void instantiate(const Query& q, std::size_t i, std::vector<std::pair<std::string, Term>>& env,
                   std::vector<GroundLiteral>& acc) {
    if (i == q.size()) {
      instances.push_back(acc);
      return;
    }
    auto lookup = [&](const std::string& n) -> const Term* {
      for (const auto& [k, v] : env)
        if (k == n) return &v;
      return nullptr;
    };
    Atom partial{q[i].atom.predicate, {}};
    for (const Term& t : q[i].atom.args) {
      const auto* v = std::get_if<Variable>(&t);
      const Term* b = v ? lookup(v->name) : nullptr;
      partial.args.push_back(b ? *b : t);
    }
    if (partial.ground()) {
      acc.push_back({resolve(partial), q[i].negated});
      instantiate(q, i + 1, env, acc);
      acc.pop_back();
      return;
    }
    if (q[i].negated) {
      throw QueryError("variable in negated query literal `" + to_string(q[i]) + "` is not bound by an earlier positive literal");
    }
    for (AtomId id = 0; id < gp.atom_count(); ++id) {
      const Atom& cand = gp.atom(id);
      if (cand.predicate != partial.predicate || cand.arity() != partial.arity()) continue;
      std::size_t mark_env = env.size();
      bool ok = true;
      for (std::size_t k = 0; k < partial.args.size() && ok; ++k) {
        const Term& p = partial.args[k];
        if (const auto* v = std::get_if<Variable>(&p)) {
          if (const Term* b = lookup(v->name)) {
            ok = *b == cand.args[k];
          } else {
            env.emplace_back(v->name, cand.args[k]);
          }
        } else {
          ok = p == cand.args[k];
        }
      }
      if (ok) {
        acc.push_back({id, false});
        instantiate(q, i + 1, env, acc);
        acc.pop_back();
      }
      env.resize(mark_env);
    }
  }

  void start(const Query& q) {
    instances.clear();
    extra_atoms.clear();
    seen.clear();
    std::vector<std::pair<std::string, Term>> env;
    std::vector<GroundLiteral> acc;
    instantiate(q, 0, env, acc);
    instance = 0;
    running = false;
    resume = false;
    steps = 0;
  }

  // -- machine state ---------------------------------------------------------

  std::int32_t push(Goal g, std::int32_t next) {
    arena.push_back({g, next});
    return static_cast<std::int32_t>(arena.size() - 1);
  }

  void set_mark(AtomId a, Mark m) {
    Mark prev = mark[a];
    trail.emplace_back(a, prev);
    mark[a] = m;
    if (prev == Mark::None) order.push_back(a);
  }

  void open(AtomId a, Mark m, std::uint32_t negs) {
    set_mark(a, m);
    frame_negs[a] = negs;
    if (++depth > options.depth_limit) throw DepthLimitExceeded(options.depth_limit);
  }

  void undo_to(const ChoicePoint& cp) {
    while (trail.size() > cp.trail) {
      mark[trail.back().first] = trail.back().second;
      trail.pop_back();
    }
    arena.resize(cp.arena);
    order.resize(cp.order);
    depth = cp.depth;
  }

  void load_instance(const std::vector<GroundLiteral>& query) {
    std::size_t n = atom_total();
    mark.assign(n, Mark::None);
    frame_negs.assign(n, 0);
    trail.clear();
    order.clear();
    arena.clear();
    choices.clear();
    depth = 0;
    std::int32_t c = push({GoalKind::Emit, 0, 0, 0}, -1);
    for (std::size_t i = cls->nmr_checks.size(); i-- > 0;) c = push({GoalKind::Check, static_cast<std::uint32_t>(i), 0, 0}, c);
    for (std::size_t i = query.size(); i-- > 0;) {
      c = push({query[i].negated ? GoalKind::CallNeg : GoalKind::CallPos, query[i].atom, 0, 0}, c);
    }
    cont = c;
    running = true;
  }

  /// Goal that makes literal `l` fail, called at negation count `negs`.
  static Goal refute(const GroundLiteral& l, std::uint32_t negs) {
    return l.negated ? Goal{GoalKind::CallPos, l.atom, 0, negs + 1} : Goal{GoalKind::CallNeg, l.atom, 0, negs};
  }

  static Goal call(const GroundLiteral& l, std::uint32_t negs) {
    return l.negated ? Goal{GoalKind::CallNeg, l.atom, 0, negs + 1} : Goal{GoalKind::CallPos, l.atom, 0, negs};
  }

  /// Applies the next alternative of the top choice point. Returns false
  /// when it has none left.
  bool try_next(ChoicePoint& cp) {
    switch (cp.kind) {
      case ChoiceKind::Rules: {
        auto rules = rules_for(cp.atom);
        if (cp.alt >= rules.size()) return false;
        undo_to(cp);
        const GroundRule& r = gp.rule(rules[cp.alt++]);
        open(cp.atom, Mark::PosOpen, cp.negs);
        std::int32_t c = push({GoalKind::ExitPos, cp.atom, 0, 0}, cp.rest);
        for (std::size_t i = r.body.size(); i-- > 0;) c = push(call(r.body[i], cp.negs), c);
        cont = c;
        return true;
      }
      case ChoiceKind::FailRule: {
        const GroundRule& r = gp.rule(cp.rule);
        if (cp.alt >= r.body.size()) return false;
        undo_to(cp);
        cont = push(refute(r.body[cp.alt++], cp.negs), cp.rest);
        return true;
      }
      case ChoiceKind::Check: {
        const NmrCheck& chk = cls->nmr_checks[cp.atom];
        std::size_t n = chk.body.size() + (chk.head ? 1 : 0);
        if (cp.alt >= n) return false;
        undo_to(cp);
        std::uint32_t k = cp.alt++;
        Goal g = k < chk.body.size() ? refute(chk.body[k], 0) : Goal{GoalKind::CallPos, *chk.head, 0, 0};
        cont = push(g, cp.rest);
        return true;
      }
    }
    return false;
  }

  bool backtrack() {
    while (!choices.empty()) {
      if (try_next(choices.back())) return true;
      choices.pop_back();
    }
    return false;
  }

  bool branch(ChoiceKind kind, std::uint32_t atom, std::uint32_t rule, std::uint32_t negs, std::int32_t rest) {
    choices.push_back({kind, atom, rule, 0, negs, rest, trail.size(), arena.size(), order.size(), depth});
    return backtrack();
  }

  /// Runs until the next emitted answer; false when exhausted.
  bool run() {
    for (;;) {
      ++steps;
      const Node node = arena[static_cast<std::size_t>(cont)];
      const Goal& g = node.goal;
      std::int32_t rest = node.next;
      bool ok = true;
      switch (g.kind) {
        case GoalKind::CallPos: {
          switch (mark[g.atom]) {
            case Mark::PosDone: cont = rest; break;
            case Mark::PosOpen:
              // Same literal on the stack: positive loop when no negation
              // lies between, coinductive success otherwise.
              if (g.negs == frame_negs[g.atom]) {
                ok = false;
              } else {
                cont = rest;
              }
              break;
            case Mark::NegOpen:
            case Mark::NegDone: ok = false; break;
            case Mark::None:
              if (rules_for(g.atom).empty()) {
                ok = false;
              } else {
                ok = branch(ChoiceKind::Rules, g.atom, 0, g.negs, rest);
                if (!ok) return false;
                continue;
              }
              break;
          }
          break;
        }
        case GoalKind::CallNeg: {
          switch (mark[g.atom]) {
            case Mark::NegDone:
            case Mark::NegOpen: cont = rest; break;
            case Mark::PosOpen:
            case Mark::PosDone: ok = false; break;
            case Mark::None: {
              auto rules = rules_for(g.atom);
              if (rules.empty()) {
                set_mark(g.atom, Mark::NegDone);
                cont = rest;
              } else {
                open(g.atom, Mark::NegOpen, g.negs);
                std::int32_t c = push({GoalKind::ExitNeg, g.atom, 0, 0}, rest);
                for (std::size_t i = rules.size(); i-- > 0;) c = push({GoalKind::FailRule, g.atom, rules[i], g.negs}, c);
                cont = c;
              }
              break;
            }
          }
          break;
        }
        case GoalKind::ExitPos:
          set_mark(g.atom, Mark::PosDone);
          --depth;
          cont = rest;
          break;
        case GoalKind::ExitNeg:
          set_mark(g.atom, Mark::NegDone);
          --depth;
          cont = rest;
          break;
        case GoalKind::FailRule:
          if (gp.rule(g.rule).body.empty()) {
            ok = false;
          } else {
            if (!branch(ChoiceKind::FailRule, g.atom, g.rule, g.negs, rest)) return false;
            continue;
          }
          break;
        case GoalKind::Check:
          if (!branch(ChoiceKind::Check, g.atom, 0, 0, rest)) return false;
          continue;
        case GoalKind::Emit:
          if (well_founded()) return true;
          ok = false;
          break;
      }
      if (!ok && !backtrack()) return false;
    }
  }

  /// Coinductive success on a positive ancestor may leave positive atoms
  /// that only support each other. Accept the CHS only if its positive part
  /// is the least fixpoint of the rules whose negated atoms are all in it.
  bool well_founded() const {
    std::vector<char> derived(mark.size(), 0);
    std::size_t pending = 0;
    for (AtomId a : order) pending += mark[a] == Mark::PosDone;
    for (bool changed = true; changed && pending > 0;) {
      changed = false;
      for (AtomId a : order) {
        if (mark[a] != Mark::PosDone || derived[a]) continue;
        for (std::uint32_t ri : rules_for(a)) {
          const GroundRule& r = gp.rule(ri);
          bool fires = std::all_of(r.body.begin(), r.body.end(), [&](const GroundLiteral& l) {
            return l.negated ? mark[l.atom] == Mark::NegDone : derived[l.atom] != 0;
          });
          if (fires) {
            derived[a] = 1;
            --pending;
            changed = true;
            break;
          }
        }
      }
    }
    return pending == 0;
  }

  PartialAnswerSet snapshot() const {
    PartialAnswerSet s;
    s.literals.reserve(order.size());
    for (AtomId a : order) {
      assert(mark[a] == Mark::PosDone || mark[a] == Mark::NegDone);
      s.literals.push_back({atom(a), mark[a] == Mark::NegDone});
    }
    return s;
  }

  std::vector<std::pair<AtomId, bool>> visible_key() const {
    std::vector<std::pair<AtomId, bool>> key;
    for (AtomId a : order)
      if (!atom(a).hidden()) key.emplace_back(a, mark[a] == Mark::NegDone);
    std::sort(key.begin(), key.end());
    return key;
  }

  std::optional<PartialAnswerSet> next() {
    for (;;) {
      if (!running) {
        if (instance >= instances.size()) return std::nullopt;
        load_instance(instances[instance++]);
        if (run()) {
          resume = true;
        } else {
          running = false;
          continue;
        }
      } else if (resume) {
        if (backtrack() && run()) {
          resume = true;
        } else {
          running = false;
          resume = false;
          continue;
        }
      }
      if (options.unique && !seen.insert(visible_key()).second) continue;
      return snapshot();
    }
  }
};

Solver::Solver(const GroundProgram& gp, SolveOptions options)
    : m_(std::make_unique<Machine>(gp, nullptr, options)) {}

Solver::Solver(const GroundProgram& gp, const RuleClassification& classification, SolveOptions options)
    : m_(std::make_unique<Machine>(gp, &classification, options)) {}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;

void Solver::start(const Query& query) { m_->start(query); }

std::optional<PartialAnswerSet> Solver::next() { return m_->next(); }

std::size_t Solver::steps() const noexcept { return m_->steps; }

Solver solve(const GroundProgram& gp, const Query& query, SolveOptions options) {
  Solver s(gp, options);
  s.start(query);
  return s;
}

std::vector<PartialAnswerSet> enumerate_all(const GroundProgram& gp, const Query& query, SolveOptions options) {
  options.unique = true;
  Solver s = solve(gp, query, options);
  std::vector<PartialAnswerSet> out;
  while (auto a = s.next()) out.push_back(std::move(*a));
  return out;
}

}  // namespace gasp
