#pragma once

// Tokenizer and formula parser shared by the formula, sequent, proof and model readers.

#include <string>
#include <string_view>
#include <vector>

#include "lbiq/syntax.hpp"

namespace lbiq {

enum class Tok {
  Ident, LParen, RParen, Comma, Dot, Amp, Bar, Arrow, ExclOp, Turnstile, Semi, Colon, Lt, Eq, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src);

  const Token& peek() const { return toks_[i_]; }
  const Token& peek2() const { return toks_[i_ + 1 < toks_.size() ? i_ + 1 : i_]; }
  Token next();
  bool accept(Tok k);
  Token expect(Tok k, const char* what);
  bool at_end() const { return peek().kind == Tok::End; }
  std::size_t pos() const { return peek().pos; }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

class FormulaParser {
 public:
  FormulaParser(Lexer& lx, Signature& sig, bool extend) : lx_(lx), sig_(sig), extend_(extend) {}

  Formula formula();
  Term term();

 private:
  Formula impl();
  Formula excl();
  Formula disj();
  Formula conj();
  Formula unary();
  void note_function(const std::string& name, int arity, std::size_t pos);
  void note_predicate(const std::string& name, int arity, std::size_t pos);

  Lexer& lx_;
  Signature& sig_;
  bool extend_;
  std::vector<std::string> bound_;
};

}  // namespace lbiq
