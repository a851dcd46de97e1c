#include "gasp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gasp {

// ---------------------------------------------------------------------------
// Terms and atoms

std::size_t hash_term(const Term& t) noexcept {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Decimal>) {
          return v.hash() * 3u + 1u;
        } else if constexpr (std::is_same_v<T, Symbol>) {
          return std::hash<std::string>{}(v.name) * 3u;
        } else {
          return std::hash<std::string>{}(v.name) * 3u + 2u;
        }
      },
      t);
}

bool Atom::ground() const noexcept {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return is_variable(t); });
}

std::weak_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  }
  return std::weak_ordering::equivalent;
}

std::size_t AtomHash::operator()(const Atom& a) const noexcept {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  for (const Term& t : a.args) h = h * 1000003u ^ hash_term(t);
  return h ^ a.args.size();
}

bool evaluate(const Builtin& b) {
  if (is_number(b.left) && is_number(b.right)) {
    const auto& x = std::get<Decimal>(b.left);
    const auto& y = std::get<Decimal>(b.right);
    switch (b.op) {
      case CompareOp::LessEq: return x <= y;
      case CompareOp::GreaterEq: return x >= y;
      case CompareOp::Less: return x < y;
      case CompareOp::Greater: return x > y;
      case CompareOp::Equal: return x == y;
      case CompareOp::NotEqual: return x != y;
    }
  }
  switch (b.op) {
    case CompareOp::Equal: return b.left == b.right;
    case CompareOp::NotEqual: return b.left != b.right;
    default: return false;
  }
}

bool is_reserved_predicate(std::string_view predicate) noexcept {
  return predicate.starts_with(kNegPrefix) || predicate.starts_with(kAbdPrefix) ||
         predicate.starts_with(kNegAbdPrefix);
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident,     // starts with a lowercase letter, or underscores then lowercase
  Var,       // starts with an uppercase letter or underscore
  Number,
  LParen,
  RParen,
  Comma,
  Dot,
  If,        // :-
  QueryMark, // ?-
  Directive, // #name
  Op,        // comparison operator
  Minus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, c), line, col});
      };
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word = take_word();
        out.push_back({classify_word(word), word, line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::Number, take_number(), line, col});
      } else if (c == '(') {
        single(Tok::LParen);
      } else if (c == ')') {
        single(Tok::RParen);
      } else if (c == ',') {
        single(Tok::Comma);
      } else if (c == '.') {
        single(Tok::Dot);
      } else if (c == '-') {
        single(Tok::Minus);
      } else if (c == ':' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::If, ":-", line, col});
      } else if (c == '?' && peek(1) == '-') {
        advance(2);
        out.push_back({Tok::QueryMark, "?-", line, col});
      } else if (c == '#') {
        advance();
        if (pos_ >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
          throw SyntaxError("expected directive name after '#'", line, col);
        }
        out.push_back({Tok::Directive, take_word(), line, col});
      } else if (c == '=' && peek(1) == '<') {
        advance(2);
        out.push_back({Tok::Op, "=<", line, col});
      } else if (c == '>' && peek(1) == '=') {
        advance(2);
        out.push_back({Tok::Op, ">=", line, col});
      } else if (c == '\\' && peek(1) == '=') {
        advance(2);
        out.push_back({Tok::Op, "\\=", line, col});
      } else if (c == '<' || c == '>' || c == '=') {
        advance();
        out.push_back({Tok::Op, std::string(1, c), line, col});
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string take_word() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string take_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    // A dot is a fraction separator only when a digit follows; otherwise it ends the statement.
    if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  static Tok classify_word(const std::string& w) {
    std::size_t i = 0;
    while (i < w.size() && w[i] == '_') ++i;
    if (i < w.size() && std::islower(static_cast<unsigned char>(w[i]))) return Tok::Ident;
    return Tok::Var;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options) : tokens_(Lexer(text).run()), options_(options) {}

  Program program() {
    Program prog;
    while (!at(Tok::End)) statement(prog);
    return prog;
  }

  Query query() {
    if (at(Tok::QueryMark) || at(Tok::If)) next();
    Query q;
    if (at(Tok::End) || at(Tok::Dot)) error("empty query");
    q.push_back(literal());
    while (at(Tok::Comma)) {
      next();
      q.push_back(literal());
    }
    if (at(Tok::Dot)) next();
    expect(Tok::End, "end of query");
    return q;
  }

  Atom lone_atom() {
    Atom a = atom();
    if (at(Tok::Dot)) next();
    expect(Tok::End, "end of input");
    return a;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const std::string& msg) const { throw SyntaxError(msg, cur().line, cur().column); }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) {
      error(std::string("expected ") + what + (cur().kind == Tok::End ? " at end of input" : ", found '" + cur().text + "'"));
    }
    return next();
  }

  void statement(Program& prog) {
    SourcePosition where{cur().line, cur().column};
    anon_counter_ = 0;
    if (at(Tok::Directive)) {
      const Token& d = next();
      if (d.text != "abducible") throw SyntaxError("unknown directive #" + d.text, d.line, d.column);
      Atom pattern = atom();
      expect(Tok::Dot, "'.' after directive");
      prog.abducibles.push_back({std::move(pattern), where});
      return;
    }
    if (at(Tok::QueryMark)) {
      next();
      Query q;
      q.push_back(literal());
      while (at(Tok::Comma)) {
        next();
        q.push_back(literal());
      }
      expect(Tok::Dot, "'.' after query");
      prog.queries.push_back(std::move(q));
      return;
    }
    Rule rule;
    rule.position = where;
    if (at(Tok::If)) {
      next();
      rule.body = body();
    } else {
      rule.head = atom();
      if (at(Tok::If)) {
        next();
        rule.body = body();
      }
    }
    expect(Tok::Dot, "'.' at end of rule");
    check_safety(rule);
    prog.rules.push_back(std::move(rule));
  }

  std::vector<BodyElement> body() {
    std::vector<BodyElement> out;
    out.push_back(element());
    while (at(Tok::Comma)) {
      next();
      out.push_back(element());
    }
    return out;
  }

  BodyElement element() {
    if (at(Tok::Ident) && cur().text == "not" && tokens_[pos_ + 1].kind == Tok::Ident) {
      next();
      return Literal{atom(), true};
    }
    if (at(Tok::Var) || at(Tok::Number) || at(Tok::Minus)) {
      Term left = term();
      return builtin_rest(std::move(left));
    }
    Atom a = atom();
    if (at(Tok::Op)) {
      if (a.arity() != 0) error("compound terms are not supported in comparisons");
      return builtin_rest(Symbol{a.predicate});
    }
    return Literal{std::move(a), false};
  }

  Builtin builtin_rest(Term left) {
    const Token& op = expect(Tok::Op, "comparison operator");
    Builtin b;
    b.left = std::move(left);
    b.op = op.text == "=<"   ? CompareOp::LessEq
           : op.text == ">=" ? CompareOp::GreaterEq
           : op.text == "<"  ? CompareOp::Less
           : op.text == ">"  ? CompareOp::Greater
           : op.text == "="  ? CompareOp::Equal
                             : CompareOp::NotEqual;
    b.right = term();
    return b;
  }

  Literal literal() {
    if (at(Tok::Ident) && cur().text == "not" && tokens_[pos_ + 1].kind == Tok::Ident) {
      next();
      return Literal{atom(), true};
    }
    return Literal{atom(), false};
  }

  Atom atom() {
    if (!at(Tok::Ident)) error("expected atom" + (at(Tok::End) ? std::string() : ", found '" + cur().text + "'"));
    const Token& name = next();
    if (name.text == "not") throw SyntaxError("'not' must be followed by an atom", name.line, name.column);
    if (!options_.allow_reserved && is_reserved_predicate(name.text)) {
      throw SyntaxError("predicate prefix reserved for abducible expansion: " + name.text, name.line, name.column);
    }
    Atom a{name.text, {}};
    if (at(Tok::LParen)) {
      next();
      a.args.push_back(term());
      while (at(Tok::Comma)) {
        next();
        a.args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  Term term() {
    if (at(Tok::Minus)) {
      next();
      if (!at(Tok::Number)) error("expected number after '-'");
      return Decimal::parse("-" + next().text);
    }
    if (at(Tok::Number)) {
      const Token& t = next();
      try {
        return Decimal::parse(t.text);
      } catch (const std::exception& e) {
        throw SyntaxError(e.what(), t.line, t.column);
      }
    }
    if (at(Tok::Var)) {
      const Token& t = next();
      if (t.text == "_") return Variable{"_Anon" + std::to_string(++anon_counter_)};
      return Variable{t.text};
    }
    if (at(Tok::Ident)) {
      const Token& t = next();
      if (at(Tok::LParen)) error("compound terms are not supported");
      return Symbol{t.text};
    }
    error("expected term" + (at(Tok::End) ? std::string() : ", found '" + cur().text + "'"));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions options_;
  int anon_counter_ = 0;
};

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (const auto* v = std::get_if<Variable>(&t)) out.push_back(v->name);
}

void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).program();
}

Query parse_query(std::string_view text) {
  return Parser(text, ParseOptions{true}).query();
}

Atom parse_atom(std::string_view text) {
  return Parser(text, ParseOptions{true}).lone_atom();
}

void check_safety(const Rule& rule) {
  std::set<std::string> bound;
  for (const BodyElement& e : rule.body) {
    if (const auto* l = std::get_if<Literal>(&e); l && !l->negated) {
      std::vector<std::string> vs;
      collect_vars(l->atom, vs);
      bound.insert(vs.begin(), vs.end());
    }
  }
  std::vector<std::string> needed;
  if (rule.head) collect_vars(*rule.head, needed);
  for (const BodyElement& e : rule.body) {
    if (const auto* l = std::get_if<Literal>(&e)) {
      if (l->negated) collect_vars(l->atom, needed);
    } else {
      const auto& b = std::get<Builtin>(e);
      collect_vars(b.left, needed);
      collect_vars(b.right, needed);
    }
  }
  for (const std::string& v : needed) {
    if (!bound.count(v)) throw SafetyError(v, to_string(rule), rule.position.line);
  }
}

// ---------------------------------------------------------------------------
// Partial answer sets

bool PartialAnswerSet::contains(const Literal& l) const {
  return std::find(literals.begin(), literals.end(), l) != literals.end();
}

std::vector<Atom> PartialAnswerSet::positive() const {
  std::vector<Atom> out;
  for (const Literal& l : literals)
    if (!l.negated) out.push_back(l.atom);
  return out;
}

std::vector<Atom> PartialAnswerSet::negative() const {
  std::vector<Atom> out;
  for (const Literal& l : literals)
    if (l.negated) out.push_back(l.atom);
  return out;
}

std::vector<Literal> PartialAnswerSet::visible_sorted() const {
  std::vector<Literal> out;
  for (const Literal& l : literals)
    if (!l.atom.hidden()) out.push_back(l);
  std::sort(out.begin(), out.end(), [](const Literal& a, const Literal& b) {
    if (a.negated != b.negated) return !a.negated;
    return a.atom < b.atom;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Decimal>) {
          return v.to_string();
        } else {
          return v.name;
        }
      },
      t);
}

std::string to_string(const Atom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(a.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string to_string(const Literal& l) { return l.negated ? "not " + to_string(l.atom) : to_string(l.atom); }

std::string to_string(CompareOp op) {
  switch (op) {
    case CompareOp::LessEq: return "=<";
    case CompareOp::GreaterEq: return ">=";
    case CompareOp::Less: return "<";
    case CompareOp::Greater: return ">";
    case CompareOp::Equal: return "=";
    case CompareOp::NotEqual: return "\\=";
  }
  return "?";
}

std::string to_string(const Builtin& b) { return to_string(b.left) + " " + to_string(b.op) + " " + to_string(b.right); }

std::string to_string(const Rule& r) {
  std::string out;
  if (r.head) out = to_string(*r.head);
  if (!r.body.empty()) {
    out += r.head ? " :- " : ":- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += std::visit([](const auto& e) { return to_string(e); }, r.body[i]);
    }
  }
  return out + ".";
}

std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const Rule& r : p.rules) os << to_string(r) << '\n';
  for (const AbducibleDirective& d : p.abducibles) os << "#abducible " << to_string(d.pattern) << ".\n";
  for (const Query& q : p.queries) {
    os << "?- ";
    for (std::size_t i = 0; i < q.size(); ++i) os << (i ? ", " : "") << to_string(q[i]);
    os << ".\n";
  }
  return os.str();
}

std::string render(const Literal& l) { return to_string(l); }

std::string render_set(const std::vector<Literal>& literals) {
  std::string out = "{";
  bool first = true;
  for (const Literal& l : literals) {
    if (l.atom.hidden()) continue;
    out += first ? " " : ", ";
    out += to_string(l);
    first = false;
  }
  return out + " }";
}

std::string render(const PartialAnswerSet& s) { return render_set(s.literals); }

}  // namespace gasp
