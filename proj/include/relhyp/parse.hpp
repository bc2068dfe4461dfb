#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relhyp/formula.hpp"
#include "relhyp/hypersequent.hpp"

namespace relhyp {

struct SyntaxError : std::runtime_error {
  std::size_t position;
  std::string expected;
  SyntaxError(std::size_t pos, std::string what_expected)
      : std::runtime_error("syntax error at position " + std::to_string(pos) + ": expected " + what_expected),
        position(pos),
        expected(std::move(what_expected)) {}
};

namespace detail {

// Recursive-descent parser over the grammar
//   implies := or ('->' implies)?            right-associative
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := ('~' | '[]' | '<>') unary | atom | '(' implies ')'
// plus the hypersequent layer:
//   hyperseq := sequent (';' sequent)*
//   sequent  := [formula (',' formula)*] '=>' [formula (',' formula)*]
class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula formula() {
    Formula f = implies();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
    return f;
  }

  Hypersequent hypersequent() {
    std::vector<Sequent> comps;
    comps.push_back(sequent());
    while (try_consume(";")) comps.push_back(sequent());
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "';' or end of input");
    return Hypersequent(std::move(comps));
  }

private:
  Formula implies() {
    Formula lhs = disj();
    if (try_consume("->")) return Formula::implication(std::move(lhs), implies());
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (try_consume("|")) f = Formula::disjunction(std::move(f), conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (try_consume("&")) f = Formula::conjunction(std::move(f), unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (try_consume("~")) return Formula::negation(unary());
    if (try_consume("[]")) return Formula::box(unary());
    if (try_consume("<>")) return Formula::diamond(unary());
    if (try_consume("(")) {
      Formula f = implies();
      if (!try_consume(")")) throw SyntaxError(pos_, "')'");
      return f;
    }
    return atom();
  }

  Formula atom() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || text_[pos_] < 'a' || text_[pos_] > 'z')
      throw SyntaxError(pos_, "formula");
    ++pos_;
    while (pos_ < text_.size() && (islowernum(text_[pos_]) || text_[pos_] == '_')) ++pos_;
    return Formula::atom(std::string(text_.substr(start, pos_ - start)));
  }

  Sequent sequent() {
    std::vector<Formula> ante = formula_list("'=>'");
    if (!try_consume("=>")) throw SyntaxError(pos_, "'=>'");
    std::vector<Formula> succ = formula_list("';' or end of input");
    return Sequent(std::move(ante), std::move(succ));
  }

  // Possibly empty comma-separated list; stops before '=>', ';' or the end.
  std::vector<Formula> formula_list(const std::string& stop_desc) {
    std::vector<Formula> fs;
    skip_ws();
    if (pos_ >= text_.size() || peek_is("=>") || peek_is(";")) return fs;
    fs.push_back(implies());
    while (try_consume(",")) fs.push_back(implies());
    skip_ws();
    if (pos_ < text_.size() && !peek_is("=>") && !peek_is(";")) throw SyntaxError(pos_, "',' or " + stop_desc);
    return fs;
  }

  static bool islowernum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool peek_is(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool try_consume(std::string_view tok) {
    if (!peek_is(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void consume(std::string_view tok) {
    if (!try_consume(tok)) throw SyntaxError(pos_, "'" + std::string(tok) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::Parser(text).formula(); }

inline Hypersequent parse_hypersequent(std::string_view text) { return detail::Parser(text).hypersequent(); }

}  // namespace relhyp
