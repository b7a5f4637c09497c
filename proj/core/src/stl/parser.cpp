#include "probsafe/stl/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace probsafe::stl {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  kEnd,
  kIdent,
  kNumber,
  kTrue,
  kFalse,
  kInf,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kUntil,
  kEventually,
  kAlways,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;

    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      t.text = std::string(text_.substr(pos_, end - pos_));
      advance(end - pos_);
      if (t.text == "true") t.kind = Tok::kTrue;
      else if (t.text == "false") t.kind = Tok::kFalse;
      else if (t.text == "inf") t.kind = Tok::kInf;
      else if (t.text == "U") t.kind = Tok::kUntil;
      else if (t.text == "F") t.kind = Tok::kEventually;
      else if (t.text == "G") t.kind = Tok::kAlways;
      else t.kind = Tok::kIdent;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        (c == '-' && pos_ + 1 < text_.size() &&
         (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '.'))) {
      std::size_t end = pos_ + 1;
      while (end < text_.size()) {
        const char d = text_[end];
        const bool exp_sign = (d == '+' || d == '-') && (text_[end - 1] == 'e' || text_[end - 1] == 'E');
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' || exp_sign) {
          ++end;
        } else {
          break;
        }
      }
      t.text = std::string(text_.substr(pos_, end - pos_));
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size()) {
        throw ParseError(t.line, t.column, "malformed number '" + t.text + "'");
      }
      advance(end - pos_);
      t.kind = Tok::kNumber;
      return t;
    }

    auto single = [&](Tok kind) {
      t.kind = kind;
      t.text = std::string(1, c);
      advance(1);
      return t;
    };
    const char n = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    switch (c) {
      case '!':
        if (n == '=') unknown_operator(t, "!=");
        return single(Tok::kNot);
      case '&':
        if (n == '&') unknown_operator(t, "&&");
        return single(Tok::kAnd);
      case '|':
        if (n == '|') unknown_operator(t, "||");
        return single(Tok::kOr);
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case '[': return single(Tok::kLBracket);
      case ']': return single(Tok::kRBracket);
      case ',': return single(Tok::kComma);
      case '=':
        if (n == '>') {
          t.kind = Tok::kImplies;
          t.text = "=>";
          advance(2);
          return t;
        }
        unknown_operator(t, n == '=' ? "==" : "=");
      case '-':
        unknown_operator(t, n == '>' ? "->" : "-");
      default: {
        std::string op(1, c);
        if (std::ispunct(static_cast<unsigned char>(n)) && n != '(' && n != ')' && n != '[') op += n;
        unknown_operator(t, op);
      }
    }
  }

 private:
  [[noreturn]] static void unknown_operator(const Token& at, const std::string& op) {
    throw ParseError(at.line, at.column, "unknown operator '" + op + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance(1);
  }

  void advance(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        // Count UTF-8 code points, not continuation bytes.
        ++column_;
      }
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kIdent: return "identifier";
    case Tok::kNumber: return "number";
    case Tok::kTrue: return "'true'";
    case Tok::kFalse: return "'false'";
    case Tok::kInf: return "'inf'";
    case Tok::kNot: return "'!'";
    case Tok::kAnd: return "'&'";
    case Tok::kOr: return "'|'";
    case Tok::kImplies: return "'=>'";
    case Tok::kUntil: return "'U'";
    case Tok::kEventually: return "'F'";
    case Tok::kAlways: return "'G'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kComma: return "','";
  }
  return "token";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  Formula parse() {
    Formula f = implication();
    if (cur_.kind != Tok::kEnd) fail("unexpected " + std::string(describe(cur_.kind)) + " after formula");
    return f;
  }

 private:
  Formula implication() {
    Formula lhs = disjunct();
    if (accept(Tok::kImplies)) return implies(std::move(lhs), implication());
    return lhs;
  }

  Formula disjunct() {
    Formula f = conjunct();
    while (accept(Tok::kOr)) f = disjunction(std::move(f), conjunct());
    return f;
  }

  Formula conjunct() {
    Formula f = temporal();
    while (accept(Tok::kAnd)) f = conjunction(std::move(f), temporal());
    return f;
  }

  Formula temporal() {
    Formula lhs = unary();
    if (cur_.kind == Tok::kUntil) {
      advance();
      if (cur_.kind != Tok::kLBracket) fail("'U' requires a time window '[a,b]'");
      const Interval w = window();
      return until(std::move(lhs), temporal(), w);
    }
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::kNot)) return negate(unary());
    if (cur_.kind == Tok::kEventually || cur_.kind == Tok::kAlways) {
      const Tok kind = cur_.kind;
      advance();
      const Interval w = cur_.kind == Tok::kLBracket ? window() : Interval::unbounded();
      Formula operand = unary();
      return kind == Tok::kEventually ? eventually(std::move(operand), w)
                                      : always(std::move(operand), w);
    }
    return atom();
  }

  Formula atom() {
    switch (cur_.kind) {
      case Tok::kTrue: advance(); return Formula::top();
      case Tok::kFalse: advance(); return Formula::bottom();
      case Tok::kIdent: {
        std::string name = cur_.text;
        advance();
        return Formula::predicate(std::move(name));
      }
      case Tok::kLParen: {
        advance();
        Formula inner = implication();
        expect(Tok::kRParen, "to close '('");
        return inner;
      }
      default: fail("expected a formula but found " + std::string(describe(cur_.kind)));
    }
  }

  Interval window() {
    const Token open = cur_;
    expect(Tok::kLBracket, "to open a time window");
    const double lo = bound(false);
    expect(Tok::kComma, "between window bounds");
    const double hi = bound(true);
    expect(Tok::kRBracket, "to close a time window");
    try {
      return Interval::checked(lo, hi);
    } catch (const std::invalid_argument& e) {
      throw ParseError(open.line, open.column, std::string("malformed interval: ") + e.what());
    }
  }

  double bound(bool allow_inf) {
    if (cur_.kind == Tok::kNumber) {
      const double v = cur_.number;
      advance();
      return v;
    }
    if (allow_inf && cur_.kind == Tok::kInf) {
      advance();
      return kInfinity;
    }
    fail(std::string("malformed interval: expected ") + (allow_inf ? "a number or 'inf'" : "a number") +
         " but found " + describe(cur_.kind));
  }

  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    advance();
    return true;
  }

  void expect(Tok kind, const char* context) {
    if (!accept(kind)) {
      fail(std::string("expected ") + describe(kind) + " " + context + " but found " + describe(cur_.kind));
    }
  }

  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(cur_.line, cur_.column, message);
  }

  Lexer lexer_;
  Token cur_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace probsafe::stl
