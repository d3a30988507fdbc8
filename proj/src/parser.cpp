#include "mucalc/parser.hpp"

#include <cctype>
#include <sstream>

namespace mucalc {

namespace {

struct Lexer {
  const std::string& text;
  const ParseOptions& opts;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse error at offset " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool try_token(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!try_token(tok)) fail("expected '" + tok + "'");
  }
  bool ident_ahead() {
    skip_ws();
    return pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos]));
  }
  std::string ident() {
    skip_ws();
    if (!ident_ahead()) fail("expected identifier");
    std::size_t start = pos;
    auto ident_char = [&](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    // the reserved boxed-variable marker "#b", "#b2", ... is only readable
    // when explicitly allowed (round-tripping transform output)
    if (opts.allow_reserved && pos < text.size() && text[pos] == '#') {
      std::size_t save = pos;
      ++pos;
      if (pos < text.size() && text[pos] == 'b') {
        ++pos;
        while (pos < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[pos])))
          ++pos;
      } else {
        pos = save;
      }
    }
    std::string name = text.substr(start, pos - start);
    if (!opts.allow_reserved && pos < text.size() && text[pos] == '#')
      fail("'#' is reserved and not allowed in identifiers");
    return name;
  }
};

struct Parser {
  Lexer lex;
  bool expanded_negation = false;

  static bool keyword(const std::string& id) {
    return id == "true" || id == "false" || id == "mu" || id == "nu";
  }

  Formula formula() { return or_expr(); }

  Formula or_expr() {
    Formula acc = and_expr();
    while (lex.try_token("\\/")) acc = Formula::disj(acc, and_expr());
    return acc;
  }

  Formula and_expr() {
    Formula acc = unary();
    while (lex.try_token("/\\")) acc = Formula::conj(acc, unary());
    return acc;
  }

  Formula binder(bool least) {
    std::string v = lex.ident();
    if (keyword(v)) lex.fail("keyword '" + v + "' cannot be a variable");
    lex.expect(".");
    Formula body = formula();  // fixpoints yield priority: body runs to the end
    try {
      return least ? Formula::mu(v, body) : Formula::nu(v, body);
    } catch (const Error& e) {
      lex.fail(e.what());
    }
  }

  Formula unary() {
    lex.skip_ws();
    if (lex.try_token("(")) {
      Formula f = formula();
      lex.expect(")");
      return f;
    }
    if (lex.try_token("~")) {
      Formula f = unary();
      if (f.kind() == Kind::Var) return Formula::neg_var(f.name());
      expanded_negation = true;
      return dualize(f);
    }
    if (lex.try_token("<")) {
      std::string a = lex.ident();
      lex.expect(">");
      return Formula::dia(a, unary());
    }
    if (lex.try_token("[")) {
      std::string a = lex.ident();
      lex.expect("]");
      return Formula::box(a, unary());
    }
    if (lex.ident_ahead()) {
      std::size_t save = lex.pos;
      std::string id = lex.ident();
      if (id == "true") return Formula::top();
      if (id == "false") return Formula::bot();
      if (id == "mu") return binder(true);
      if (id == "nu") return binder(false);
      if (keyword(id)) {
        lex.pos = save;
        lex.fail("unexpected keyword '" + id + "'");
      }
      return Formula::var(id);
    }
    lex.fail("expected a formula");
  }
};

enum Level { kBinder = 0, kOr = 1, kAnd = 2, kUnary = 3 };

void print_rec(const Formula& f, int min_level, std::string& out) {
  int level = kUnary;
  std::string s;
  switch (f.kind()) {
    case Kind::Var:
      out += f.name();
      return;
    case Kind::NegVar:
      level = kUnary;
      s = "~" + f.name();
      break;
    case Kind::Top:
      out += "true";
      return;
    case Kind::Bot:
      out += "false";
      return;
    case Kind::And: {
      level = kAnd;
      print_rec(f.left(), kAnd, s);
      s += " /\\ ";
      print_rec(f.right(), kAnd + 1, s);
      break;
    }
    case Kind::Or: {
      level = kOr;
      print_rec(f.left(), kOr, s);
      s += " \\/ ";
      print_rec(f.right(), kOr + 1, s);
      break;
    }
    case Kind::Dia:
    case Kind::Box: {
      level = kUnary;
      s = f.kind() == Kind::Dia ? "<" + f.name() + "> " : "[" + f.name() + "] ";
      print_rec(f.body(), kUnary, s);
      break;
    }
    case Kind::Mu:
    case Kind::Nu: {
      level = kBinder;
      s = (f.kind() == Kind::Mu ? "mu " : "nu ") + f.name() + ". ";
      print_rec(f.body(), kBinder, s);
      break;
    }
  }
  if (level < min_level)
    out += "(" + s + ")";
  else
    out += s;
}

}  // namespace

ParseResult parse_formula(const std::string& text, const ParseOptions& opts) {
  Parser p{Lexer{text, opts, 0}};
  Formula f = p.formula();
  if (!p.lex.eof()) p.lex.fail("trailing input");
  return ParseResult{f, p.expanded_negation};
}

Formula parse(const std::string& text, const ParseOptions& opts) {
  return parse_formula(text, opts).formula;
}

std::string print(const Formula& f) {
  std::string out;
  print_rec(f, kBinder, out);
  return out;
}

}  // namespace mucalc
