#include "lbiq/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace lbiq {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

Lexer::Lexer(std::string_view src) {
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Tok::Arrow, t.text = "->", i += 2;
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '<') {
      t.kind = Tok::ExclOp, t.text = "-<", i += 2;
    } else if (c == '|' && i + 1 < src.size() && src[i + 1] == '-') {
      t.kind = Tok::Turnstile, t.text = "|-", i += 2;
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case '.': t.kind = Tok::Dot; break;
        case '&': t.kind = Tok::Amp; break;
        case '|': t.kind = Tok::Bar; break;
        case ';': t.kind = Tok::Semi; break;
        case ':': t.kind = Tok::Colon; break;
        case '<': t.kind = Tok::Lt; break;
        case '=': t.kind = Tok::Eq; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      t.text = std::string(1, c);
      ++i;
    }
    toks_.push_back(std::move(t));
  }
  Token end;
  end.pos = src.size();
  toks_.push_back(end);
}

Token Lexer::next() {
  Token t = toks_[i_];
  if (i_ + 1 < toks_.size()) ++i_;
  return t;
}

bool Lexer::accept(Tok k) {
  if (peek().kind != k) return false;
  next();
  return true;
}

Token Lexer::expect(Tok k, const char* what) {
  if (peek().kind != k) {
    std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
    throw ParseError(std::string("expected ") + what + ", got " + got, peek().pos);
  }
  return next();
}

void FormulaParser::note_function(const std::string& name, int arity, std::size_t pos) {
  auto it = sig_.functions.find(name);
  if (it == sig_.functions.end()) {
    if (!extend_) throw ParseError("unknown function symbol '" + name + "'", pos);
    if (sig_.predicates.count(name)) throw ParseError("'" + name + "' is already a predicate", pos);
    sig_.functions[name] = arity;
  } else if (it->second != arity) {
    throw ParseError("arity mismatch for '" + name + "': expected " + std::to_string(it->second) +
                         ", got " + std::to_string(arity),
                     pos);
  }
}

void FormulaParser::note_predicate(const std::string& name, int arity, std::size_t pos) {
  auto it = sig_.predicates.find(name);
  if (it == sig_.predicates.end()) {
    if (!extend_) throw ParseError("unknown predicate '" + name + "'", pos);
    if (sig_.functions.count(name)) throw ParseError("'" + name + "' is already a function", pos);
    sig_.predicates[name] = arity;
  } else if (it->second != arity) {
    throw ParseError("arity mismatch for '" + name + "': expected " + std::to_string(it->second) +
                         ", got " + std::to_string(arity),
                     pos);
  }
}

Term FormulaParser::term() {
  Token id = lx_.expect(Tok::Ident, "term");
  if (id.text == "forall" || id.text == "exists" || id.text == "bot" || id.text == "top")
    throw ParseError("keyword '" + id.text + "' used as a term", id.pos);
  if (lx_.accept(Tok::LParen)) {
    std::vector<Term> args;
    if (!lx_.accept(Tok::RParen)) {
      do args.push_back(term());
      while (lx_.accept(Tok::Comma));
      lx_.expect(Tok::RParen, "')'");
    }
    note_function(id.text, static_cast<int>(args.size()), id.pos);
    return Term::app(id.text, std::move(args));
  }
  bool shadowed = std::find(bound_.begin(), bound_.end(), id.text) != bound_.end();
  if (!shadowed && sig_.is_constant(id.text)) return Term::app(id.text);
  if (!shadowed && sig_.functions.count(id.text))
    throw ParseError("arity mismatch for '" + id.text + "': used without arguments", id.pos);
  return Term::var(id.text);
}

Formula FormulaParser::formula() { return impl(); }

Formula FormulaParser::impl() {
  Formula a = excl();
  if (lx_.accept(Tok::Arrow)) return mk_impl(a, impl());
  return a;
}

Formula FormulaParser::excl() {
  Formula a = disj();
  while (lx_.accept(Tok::ExclOp)) a = mk_excl(a, disj());
  return a;
}

Formula FormulaParser::disj() {
  Formula a = conj();
  while (lx_.accept(Tok::Bar)) a = mk_or(a, conj());
  return a;
}

Formula FormulaParser::conj() {
  Formula a = unary();
  while (lx_.accept(Tok::Amp)) a = mk_and(a, unary());
  return a;
}

Formula FormulaParser::unary() {
  if (lx_.accept(Tok::LParen)) {
    Formula f = formula();
    lx_.expect(Tok::RParen, "')'");
    return f;
  }
  Token id = lx_.expect(Tok::Ident, "formula");
  if (id.text == "bot") return mk_bot();
  if (id.text == "top") return mk_top();
  if (id.text == "forall" || id.text == "exists") {
    Token x = lx_.expect(Tok::Ident, "bound variable");
    lx_.expect(Tok::Dot, "'.'");
    bound_.push_back(x.text);
    Formula body = unary();
    bound_.pop_back();
    return mk_quant(id.text == "forall" ? Kind::Forall : Kind::Exists, x.text, body);
  }
  std::vector<Term> args;
  if (lx_.accept(Tok::LParen)) {
    if (!lx_.accept(Tok::RParen)) {
      do args.push_back(term());
      while (lx_.accept(Tok::Comma));
      lx_.expect(Tok::RParen, "')'");
    }
  }
  note_predicate(id.text, static_cast<int>(args.size()), id.pos);
  return mk_atom(id.text, std::move(args));
}

}  // namespace lbiq
