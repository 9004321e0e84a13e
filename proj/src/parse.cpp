#include "jetcalc/parse.hpp"

#include <cctype>

namespace jetcalc {

ParseError::ParseError(const std::string& message, unsigned line, unsigned column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

constexpr unsigned kUnboundedOrder = 64;

enum class Tok { number, name, plus, minus, star, slash, caret, lparen, rparen, equals, end };

struct Token {
  Tok kind;
  std::string text;
  unsigned primes = 0;
  unsigned line = 1;
  unsigned column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::end;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::number;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) t.text += advance();
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::name;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        t.text += advance();
      }
      while (pos_ < text_.size() && text_[pos_] == '\'') {
        advance();
        ++t.primes;
      }
      return t;
    }
    advance();
    switch (c) {
      case '+':
        t.kind = Tok::plus;
        break;
      case '-':
        t.kind = Tok::minus;
        break;
      case '*':
        t.kind = Tok::star;
        break;
      case '/':
        t.kind = Tok::slash;
        break;
      case '^':
        t.kind = Tok::caret;
        break;
      case '(':
        t.kind = Tok::lparen;
        break;
      case ')':
        t.kind = Tok::rparen;
        break;
      case '=':
        t.kind = Tok::equals;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
    }
    t.text = std::string(1, c);
    return t;
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
  unsigned column_ = 1;
};

bool is_jet_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'u') return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, unsigned truncation, unsigned max_jet)
      : lexer_(text), n_(truncation), max_jet_(max_jet) {
    tok_ = lexer_.next();
  }

  EpsSeries parse_all() {
    EpsSeries v = expr();
    if (tok_.kind != Tok::end) fail("unexpected '" + tok_.text + "'");
    return v;
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    tok_ = lexer_.next();
    return t;
  }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, tok_.line, tok_.column); }
  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    take();
  }

  EpsSeries expr() {
    EpsSeries v = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      bool minus = take().kind == Tok::minus;
      EpsSeries r = term();
      v = minus ? v - r : v + r;
    }
    return v;
  }

  EpsSeries term() {
    EpsSeries v = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      Token op = take();
      EpsSeries r = unary();
      if (op.kind == Tok::star) {
        v = v * r;
      } else {
        v = v.scaled(invertible(r, op).inverse());
      }
    }
    return v;
  }

  EpsSeries unary() {
    if (tok_.kind == Tok::minus) {
      take();
      return -unary();
    }
    if (tok_.kind == Tok::plus) {
      take();
      return unary();
    }
    return power();
  }

  EpsSeries power() {
    EpsSeries base = atom();
    if (tok_.kind != Tok::caret) return base;
    Token op = take();
    bool negative = false;
    if (tok_.kind == Tok::minus) {
      take();
      negative = true;
    }
    if (tok_.kind != Tok::number) fail("expected an integer exponent");
    Token e = take();
    if (e.text.size() > 4) throw ParseError("exponent too large", e.line, e.column);
    int exponent = std::stoi(e.text);
    if (negative) {
      return constant(invertible(base, op).pow(-exponent));
    }
    EpsSeries out = constant(CoeffExpr(1L));
    for (int i = 0; i < exponent; ++i) out = out * base;
    return out;
  }

  EpsSeries atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::number: {
        take();
        return constant(CoeffExpr(Rational(Integer(t.text))));
      }
      case Tok::lparen: {
        take();
        EpsSeries v = expr();
        expect(Tok::rparen, "')'");
        return v;
      }
      case Tok::name:
        return named();
      default:
        fail(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  EpsSeries named() {
    Token t = take();
    const std::string& name = t.text;
    if (name == "Dx") {
      if (t.primes) throw ParseError("Dx takes no primes", t.line, t.column);
      expect(Tok::lparen, "'(' after Dx");
      EpsSeries inner = expr();
      expect(Tok::rparen, "')'");
      try {
        return inner.map_components([&](const DiffPoly& p) { return total_x_derivative(p, max_jet_); });
      } catch (const Error& e) {
        throw ParseError(e.what(), t.line, t.column);
      }
    }
    if (name == "eps") {
      if (t.primes) throw ParseError("eps takes no primes", t.line, t.column);
      return EpsSeries(SeriesKind::general, n_, {{1, DiffPoly(1L)}});
    }
    if (is_jet_name(name)) {
      if (t.primes) throw ParseError("jet variables take no primes", t.line, t.column);
      unsigned j = static_cast<unsigned>(std::stoul(name.substr(1)));
      if (j == 0) throw ParseError("jet variables start at u1", t.line, t.column);
      if (j > max_jet_) throw ParseError("jet variable exceeds the bound u" + std::to_string(max_jet_), t.line, t.column);
      return EpsSeries(SeriesKind::general, n_, {{0, DiffPoly::jet(j)}});
    }
    if (name == "u" || name == "id") {
      if (t.primes) throw ParseError("u takes no primes", t.line, t.column);
      return constant(CoeffExpr::u());
    }
    CoeffExpr value;
    try {
      if (is_declared_constant(name)) {
        if (t.primes) throw ParseError("constants take no primes", t.line, t.column);
        value = CoeffExpr::constant(name);
      } else {
        value = CoeffExpr::function(name, t.primes);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), t.line, t.column);
    }
    // Optional argument: f(u) or f'(u).
    if (tok_.kind == Tok::lparen && !value.atoms().empty() && value.atoms()[0].is_function()) {
      take();
      Token arg = peek();
      if (arg.kind != Tok::name || (arg.text != "u" && arg.text != "id") || arg.primes) {
        fail("functions take the single argument u");
      }
      take();
      expect(Tok::rparen, "')'");
    }
    return constant(value);
  }

  EpsSeries constant(const CoeffExpr& c) const { return EpsSeries(SeriesKind::general, n_, {{0, DiffPoly(c)}}); }

  CoeffExpr invertible(const EpsSeries& v, const Token& op) const {
    const auto& comps = v.components();
    if (comps.empty()) throw ParseError("division by zero", op.line, op.column);
    if (comps.size() != 1 || comps.begin()->first != 0 || comps.begin()->second.off_degree_term(0)) {
      throw ParseError("only jet-free, eps-free expressions can be inverted", op.line, op.column);
    }
    return comps.begin()->second.constant_part();
  }

 private:
  Lexer lexer_;
  Token tok_;
  unsigned n_;
  unsigned max_jet_;
};

EpsSeries parse_unbounded(std::string_view text, unsigned max_jet) {
  Parser p(text, kUnboundedOrder, max_jet);
  return p.parse_all();
}

}  // namespace

EpsSeries parse_series(std::string_view text, unsigned truncation, unsigned max_jet) {
  Parser p(text, truncation, max_jet);
  return p.parse_all();
}

DiffPoly parse_diffpoly(std::string_view text, unsigned max_jet) {
  EpsSeries s = parse_unbounded(text, max_jet);
  for (const auto& [k, q] : s.components()) {
    if (k != 0) throw ParseError("eps is not allowed in a differential polynomial", 1, 1);
  }
  return s.component(0);
}

CoeffExpr parse_coeff(std::string_view text) {
  DiffPoly p = parse_diffpoly(text, kDefaultMaxJet);
  if (auto bad = p.off_degree_term(0)) {
    throw ParseError("jet variable " + bad->to_string() + " is not allowed in a coefficient", 1, 1);
  }
  return p.constant_part();
}

Atom parse_constant_declaration(std::string_view text) {
  Lexer lex(text);
  Token name = lex.next();
  if (name.kind != Tok::name || name.primes) throw ParseError("expected a constant name", name.line, name.column);
  Token t = lex.next();
  if (t.kind == Tok::end) {
    try {
      return declare_constant(name.text);
    } catch (const Error& e) {
      throw ParseError(e.what(), name.line, name.column);
    }
  }
  if (t.kind != Tok::caret) throw ParseError("expected '^2 =' or end of declaration", t.line, t.column);
  Token two = lex.next();
  if (two.kind != Tok::number || two.text != "2") throw ParseError("only quadratic relations are supported", two.line, two.column);
  Token eq = lex.next();
  if (eq.kind != Tok::equals) throw ParseError("expected '='", eq.line, eq.column);
  std::size_t offset = 0;
  // Locate the right-hand side in the original text.
  offset = text.find('=') + 1;
  CoeffExpr rhs = parse_coeff(text.substr(offset));
  if (!rhs.is_polynomial() || rhs.num().size() != 1) {
    throw ParseError("relation right-hand side must be a rational times a product of constants", eq.line, eq.column);
  }
  const Term& term = rhs.num().terms()[0];
  ConstRelation rel{term.coeff, {}};
  for (const Factor& f : term.mono.factors()) {
    Atom a = Atom::from_key(f.key);
    if (!a.is_constant()) {
      throw ParseError("relation may only involve declared constants, found '" + a.to_string() + "'", eq.line,
                       eq.column);
    }
    rel.others.emplace_back(a.name(), f.exp);
  }
  try {
    return declare_constant(name.text, rel);
  } catch (const Error& e) {
    throw ParseError(e.what(), name.line, name.column);
  }
}

}  // namespace jetcalc
