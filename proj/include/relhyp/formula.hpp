#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relhyp {

enum class Conn : std::uint8_t { Atom, Not, And, Or, Implies, Box, Diamond };

inline bool is_unary(Conn c) { return c == Conn::Not || c == Conn::Box || c == Conn::Diamond; }
inline bool is_binary(Conn c) { return c == Conn::And || c == Conn::Or || c == Conn::Implies; }

// Immutable modal formula with structural sharing. Equality and ordering are
// purely syntactic: ~~p and p are distinct formulas.
class Formula {
public:
  static Formula atom(std::string name) {
    if (!valid_atom_name(name)) throw std::invalid_argument("invalid atom name: '" + name + "'");
    return Formula(std::make_shared<Node>(Node{Conn::Atom, std::move(name), {}}));
  }
  static Formula negation(Formula f) { return make(Conn::Not, {std::move(f)}); }
  static Formula conjunction(Formula l, Formula r) { return make(Conn::And, {std::move(l), std::move(r)}); }
  static Formula disjunction(Formula l, Formula r) { return make(Conn::Or, {std::move(l), std::move(r)}); }
  static Formula implication(Formula l, Formula r) { return make(Conn::Implies, {std::move(l), std::move(r)}); }
  static Formula box(Formula f) { return make(Conn::Box, {std::move(f)}); }
  static Formula diamond(Formula f) { return make(Conn::Diamond, {std::move(f)}); }

  Conn kind() const { return node_->tag; }
  bool is(Conn c) const { return node_->tag == c; }

  const std::string& atom_name() const {
    if (!is(Conn::Atom)) throw std::logic_error("atom_name on non-atom");
    return node_->name;
  }
  // Only child of a unary connective, or left operand of a binary one.
  const Formula& left() const {
    if (node_->kids.empty()) throw std::logic_error("left() on atom");
    return node_->kids[0];
  }
  const Formula& right() const {
    if (node_->kids.size() < 2) throw std::logic_error("right() on non-binary formula");
    return node_->kids[1];
  }

  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  static bool valid_atom_name(const std::string& s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char ch : s)
      if (!((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_')) return false;
    return true;
  }

private:
  struct Node {
    Conn tag;
    std::string name;           // atoms only
    std::vector<Formula> kids;  // 0, 1 or 2 entries
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Conn tag, std::vector<Formula> kids) {
    return Formula(std::make_shared<Node>(Node{tag, {}, std::move(kids)}));
  }

  static int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.node_->tag != b.node_->tag) return a.node_->tag < b.node_->tag ? -1 : 1;
    if (a.node_->tag == Conn::Atom) return a.node_->name.compare(b.node_->name);
    for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
      if (int c = compare(a.node_->kids[i], b.node_->kids[i])) return c;
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

// Number of connectives; the saturation termination measure.
inline int degree(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom: return 0;
    case Conn::Not:
    case Conn::Box:
    case Conn::Diamond: return 1 + degree(f.left());
    default: return 1 + degree(f.left()) + degree(f.right());
  }
}

// Maximum nesting of [] / <>; bounds the depth of the successor tree.
inline int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom: return 0;
    case Conn::Not: return modal_depth(f.left());
    case Conn::Box:
    case Conn::Diamond: return 1 + modal_depth(f.left());
    default: return std::max(modal_depth(f.left()), modal_depth(f.right()));
  }
}

namespace detail {

// Precedence levels: -> < | < & < prefix < atom. -> is right-associative,
// | and & associate to the left.
inline int precedence(Conn c) {
  switch (c) {
    case Conn::Implies: return 1;
    case Conn::Or: return 2;
    case Conn::And: return 3;
    case Conn::Not:
    case Conn::Box:
    case Conn::Diamond: return 4;
    case Conn::Atom: return 5;
  }
  return 5;
}

inline void render_into(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& g, bool parens) {
    if (parens) out.push_back('(');
    render_into(g, out);
    if (parens) out.push_back(')');
  };
  int p = precedence(f.kind());
  switch (f.kind()) {
    case Conn::Atom:
      out += f.atom_name();
      break;
    case Conn::Not:
      out += "~";
      child(f.left(), precedence(f.left().kind()) < p);
      break;
    case Conn::Box:
      out += "[]";
      child(f.left(), precedence(f.left().kind()) < p);
      break;
    case Conn::Diamond:
      out += "<>";
      child(f.left(), precedence(f.left().kind()) < p);
      break;
    case Conn::And:
    case Conn::Or:
      child(f.left(), precedence(f.left().kind()) < p);
      out += f.kind() == Conn::And ? " & " : " | ";
      child(f.right(), precedence(f.right().kind()) <= p);
      break;
    case Conn::Implies:
      child(f.left(), precedence(f.left().kind()) <= p);
      out += " -> ";
      child(f.right(), precedence(f.right().kind()) < p);
      break;
  }
}

}  // namespace detail

// Canonical text form; parse_formula(render_formula(f)) == f.
inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

}  // namespace relhyp
