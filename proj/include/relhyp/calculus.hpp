#pragma once

#include <algorithm>
#include <cctype>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relhyp/hypersequent.hpp"

namespace relhyp {

enum class RuleId {
  Axiom,
  WL, WR, CL, CR, Cut,
  EWL, EWR,
  NegL, NegR, AndL1, AndL2, AndR, OrL, OrR1, OrR2, ImpL, ImpR, BoxL, BoxR, DiaL, DiaR,
  EC, EW, EE, Sym, Drop,
};

enum class LogicId { K, T, S4, S5, D, B };

inline const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::Axiom: return "Axiom";
    case RuleId::WL: return "WL";
    case RuleId::WR: return "WR";
    case RuleId::CL: return "CL";
    case RuleId::CR: return "CR";
    case RuleId::Cut: return "Cut";
    case RuleId::EWL: return "EWL";
    case RuleId::EWR: return "EWR";
    case RuleId::NegL: return "NegL";
    case RuleId::NegR: return "NegR";
    case RuleId::AndL1: return "AndL1";
    case RuleId::AndL2: return "AndL2";
    case RuleId::AndR: return "AndR";
    case RuleId::OrL: return "OrL";
    case RuleId::OrR1: return "OrR1";
    case RuleId::OrR2: return "OrR2";
    case RuleId::ImpL: return "ImpL";
    case RuleId::ImpR: return "ImpR";
    case RuleId::BoxL: return "BoxL";
    case RuleId::BoxR: return "BoxR";
    case RuleId::DiaL: return "DiaL";
    case RuleId::DiaR: return "DiaR";
    case RuleId::EC: return "EC";
    case RuleId::EW: return "EW";
    case RuleId::EE: return "EE";
    case RuleId::Sym: return "Sym";
    case RuleId::Drop: return "Drop";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(RuleId::Drop); ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (name == rule_name(r)) return r;
  }
  return std::nullopt;
}

inline const char* logic_name(LogicId l) {
  switch (l) {
    case LogicId::K: return "K";
    case LogicId::T: return "T";
    case LogicId::S4: return "S4";
    case LogicId::S5: return "S5";
    case LogicId::D: return "D";
    case LogicId::B: return "B";
  }
  return "?";
}

inline std::optional<LogicId> logic_from_name(std::string name) {
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (name == "K") return LogicId::K;
  if (name == "T") return LogicId::T;
  if (name == "S4") return LogicId::S4;
  if (name == "S5") return LogicId::S5;
  if (name == "D") return LogicId::D;
  if (name == "B") return LogicId::B;
  return std::nullopt;
}

// Every calculus shares the axiom, internal structural rules, EWL/EWR and the
// logical rules; the logics differ only in which external structural rules
// they add (EC for T, EC+EW for S4, EC+EW+EE for S5, Drop for D, Sym for B).
inline std::set<RuleId> rules_of(LogicId logic, bool allow_cut) {
  std::set<RuleId> rules = {
      RuleId::Axiom, RuleId::WL,    RuleId::WR,    RuleId::CL,   RuleId::CR,   RuleId::EWL,
      RuleId::EWR,   RuleId::NegL,  RuleId::NegR,  RuleId::AndL1, RuleId::AndL2, RuleId::AndR,
      RuleId::OrL,   RuleId::OrR1,  RuleId::OrR2,  RuleId::ImpL, RuleId::ImpR, RuleId::BoxL,
      RuleId::BoxR,  RuleId::DiaL,  RuleId::DiaR,
  };
  if (allow_cut) rules.insert(RuleId::Cut);
  switch (logic) {
    case LogicId::K: break;
    case LogicId::T: rules.insert(RuleId::EC); break;
    case LogicId::S4: rules.insert({RuleId::EC, RuleId::EW}); break;
    case LogicId::S5: rules.insert({RuleId::EC, RuleId::EW, RuleId::EE}); break;
    case LogicId::D: rules.insert(RuleId::Drop); break;
    case LogicId::B: rules.insert(RuleId::Sym); break;
  }
  return rules;
}

// Identifies the principal occurrence of a rule instance: the component index
// and, where a rule has a principal formula, its index within the relevant
// zone of the conclusion. `formula` is -1 when not applicable.
struct Position {
  int component = 0;
  int formula = -1;
};

// A derivation tree node. Leaves carry rule Axiom. The conclusion of each
// premise subderivation must instantiate the rule schema together with this
// node's conclusion and position.
struct Derivation {
  RuleId rule;
  Hypersequent conclusion;
  Position position;
  std::vector<Derivation> premises;
};

namespace detail {

enum class Side { Ante, Succ };

inline const std::vector<Formula>& zone(const Sequent& s, Side side) {
  return side == Side::Ante ? s.antecedent() : s.succedent();
}

inline Sequent with_added(Sequent s, Side side, const Formula& f) {
  if (side == Side::Ante)
    s.add_antecedent(f);
  else
    s.add_succedent(f);
  return s;
}

inline Sequent with_removed(const Sequent& s, Side side, std::size_t index) {
  std::vector<Formula> ante = s.antecedent(), succ = s.succedent();
  auto& v = side == Side::Ante ? ante : succ;
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(index));
  return Sequent(std::move(ante), std::move(succ));
}

inline Hypersequent replace_component(const Hypersequent& h, std::size_t i, Sequent s) {
  std::vector<Sequent> comps = h.components();
  comps[i] = std::move(s);
  return Hypersequent(std::move(comps));
}

inline Hypersequent add_formula(const Hypersequent& h, std::size_t comp, Side side, const Formula& f) {
  return replace_component(h, comp, with_added(h.at(comp), side, f));
}

inline Hypersequent remove_formula(const Hypersequent& h, std::size_t comp, Side side, std::size_t index) {
  return replace_component(h, comp, with_removed(h.at(comp), side, index));
}

// Removes the first occurrence equal to f; requires it to exist.
inline Hypersequent remove_formula(const Hypersequent& h, std::size_t comp, Side side, const Formula& f) {
  const auto& v = zone(h.at(comp), side);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == f) return remove_formula(h, comp, side, i);
  throw std::logic_error("remove_formula: formula not present");
}

inline Hypersequent erase_component(const Hypersequent& h, std::size_t i) {
  std::vector<Sequent> comps = h.components();
  comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(i));
  return Hypersequent(std::move(comps));
}

inline Hypersequent insert_component(const Hypersequent& h, std::size_t i, Sequent s) {
  std::vector<Sequent> comps = h.components();
  comps.insert(comps.begin() + static_cast<std::ptrdiff_t>(i), std::move(s));
  return Hypersequent(std::move(comps));
}

inline Hypersequent append_component(const Hypersequent& h, Sequent s) {
  return insert_component(h, h.size(), std::move(s));
}

}  // namespace detail

// Checks one inference against its schema. Returns an error description, or
// nullopt when the instance is exact. Whether the rule belongs to a given
// logic is check_derivation's concern, not check_step's.
inline std::optional<std::string> check_step(const Hypersequent& conclusion, RuleId rule, Position pos,
                                             std::span<const Hypersequent> premises) {
  using detail::Side;
  const std::size_t n = conclusion.size();

  auto arity = [&](std::size_t want) -> std::optional<std::string> {
    if (premises.size() != want)
      return "rule " + std::string(rule_name(rule)) + " takes " + std::to_string(want) + " premise(s), got " +
             std::to_string(premises.size());
    return std::nullopt;
  };
  auto match = [&](const Hypersequent& expected, std::size_t premise_index) -> std::optional<std::string> {
    if (premises[premise_index] == expected) return std::nullopt;
    return "premise " + std::to_string(premise_index) + " does not match the schema: expected '" +
           to_string(expected) + "', got '" + to_string(premises[premise_index]) + "'";
  };
  // Fetches the principal formula at pos within the given zone of the
  // conclusion's active component.
  auto principal = [&](Side side) -> std::optional<Formula> {
    if (pos.component < 0 || static_cast<std::size_t>(pos.component) >= n) return std::nullopt;
    const auto& v = detail::zone(conclusion.at(static_cast<std::size_t>(pos.component)), side);
    if (pos.formula < 0 || static_cast<std::size_t>(pos.formula) >= v.size()) return std::nullopt;
    return v[static_cast<std::size_t>(pos.formula)];
  };
  const auto c = static_cast<std::size_t>(pos.component);

  switch (rule) {
    case RuleId::Axiom: {
      if (auto e = arity(0)) return e;
      if (n != 1) return "axiom conclusion must be a single component";
      const Sequent& s = conclusion.at(0);
      if (s.antecedent().size() != 1 || s.succedent().size() != 1 || !(s.antecedent()[0] == s.succedent()[0]))
        return "axiom must have the shape 'f => f'";
      return std::nullopt;
    }

    case RuleId::WL:
    case RuleId::WR: {
      if (auto e = arity(1)) return e;
      Side side = rule == RuleId::WL ? Side::Ante : Side::Succ;
      auto f = principal(side);
      if (!f) return "position does not identify the weakened formula";
      return match(detail::remove_formula(conclusion, c, side, static_cast<std::size_t>(pos.formula)), 0);
    }

    case RuleId::CL:
    case RuleId::CR: {
      if (auto e = arity(1)) return e;
      Side side = rule == RuleId::CL ? Side::Ante : Side::Succ;
      auto f = principal(side);
      if (!f) return "position does not identify the contracted formula";
      return match(detail::add_formula(conclusion, c, side, *f), 0);
    }

    case RuleId::Cut: {
      if (auto e = arity(2)) return e;
      if (c >= n) return "cut component out of range";
      if (premises[0].size() != n || premises[1].size() != n) return "cut premises must have the conclusion's shape";
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c) continue;
        if (!(premises[0].at(i) == conclusion.at(i)) || !(premises[1].at(i) == conclusion.at(i)))
          return "cut context mismatch at component " + std::to_string(i);
      }
      // The cut formula must sit in the succedent of premise 0 and the
      // antecedent of premise 1; try each candidate occurrence.
      for (const Formula& f : premises[0].at(c).succedent()) {
        if (!premises[1].at(c).in_antecedent(f)) continue;
        std::vector<Formula> gamma = premises[0].at(c).antecedent();
        std::vector<Formula> delta = premises[0].at(c).succedent();
        std::vector<Formula> lambda = premises[1].at(c).antecedent();
        std::vector<Formula> theta = premises[1].at(c).succedent();
        delta.erase(std::find(delta.begin(), delta.end(), f));
        lambda.erase(std::find(lambda.begin(), lambda.end(), f));
        gamma.insert(gamma.end(), lambda.begin(), lambda.end());
        delta.insert(delta.end(), theta.begin(), theta.end());
        if (conclusion.at(c) == Sequent(std::move(gamma), std::move(delta))) return std::nullopt;
      }
      return "no cut formula makes the premises match the conclusion";
    }

    case RuleId::EWL: {
      if (auto e = arity(1)) return e;
      if (n < 2) return "EWL conclusion needs at least two components";
      if (!conclusion.at(0).empty()) return "EWL requires the leftmost component to be empty";
      return match(detail::erase_component(conclusion, 0), 0);
    }

    case RuleId::EWR: {
      if (auto e = arity(1)) return e;
      if (n < 2) return "EWR conclusion needs at least two components";
      if (!conclusion.at(n - 1).empty()) return "EWR requires the rightmost component to be empty";
      return match(detail::erase_component(conclusion, n - 1), 0);
    }

    case RuleId::EW: {
      if (auto e = arity(1)) return e;
      if (c >= n) return "EW component out of range";
      if (n < 2) return "EW conclusion needs at least two components";
      if (!conclusion.at(c).empty()) return "EW requires the inserted component to be empty";
      return match(detail::erase_component(conclusion, c), 0);
    }

    case RuleId::EC: {
      if (auto e = arity(1)) return e;
      if (c >= n) return "EC component out of range";
      return match(detail::insert_component(conclusion, c + 1, conclusion.at(c)), 0);
    }

    case RuleId::EE: {
      if (auto e = arity(1)) return e;
      if (c + 1 >= n) return "EE needs two adjacent components";
      std::vector<Sequent> comps = conclusion.components();
      std::swap(comps[c], comps[c + 1]);
      return match(Hypersequent(std::move(comps)), 0);
    }

    case RuleId::Sym: {
      if (auto e = arity(1)) return e;
      std::vector<Sequent> comps = conclusion.components();
      std::reverse(comps.begin(), comps.end());
      return match(Hypersequent(std::move(comps)), 0);
    }

    case RuleId::Drop: {
      if (auto e = arity(1)) return e;
      return match(detail::append_component(conclusion, Sequent{}), 0);
    }

    case RuleId::NegL: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::Not)) return "NegL principal must be a negation in the antecedent";
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula)),
                              c, Side::Succ, f->left());
      return match(expected, 0);
    }

    case RuleId::NegR: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::Not)) return "NegR principal must be a negation in the succedent";
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Succ, static_cast<std::size_t>(pos.formula)),
                              c, Side::Ante, f->left());
      return match(expected, 0);
    }

    case RuleId::AndL1:
    case RuleId::AndL2: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::And)) return "AndL principal must be a conjunction in the antecedent";
      const Formula& part = rule == RuleId::AndL1 ? f->left() : f->right();
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula)),
                              c, Side::Ante, part);
      return match(expected, 0);
    }

    case RuleId::AndR: {
      if (auto e = arity(2)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::And)) return "AndR principal must be a conjunction in the succedent";
      Hypersequent base = detail::remove_formula(conclusion, c, Side::Succ, static_cast<std::size_t>(pos.formula));
      if (auto e = match(detail::add_formula(base, c, Side::Succ, f->left()), 0)) return e;
      return match(detail::add_formula(base, c, Side::Succ, f->right()), 1);
    }

    case RuleId::OrR1:
    case RuleId::OrR2: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::Or)) return "OrR principal must be a disjunction in the succedent";
      const Formula& part = rule == RuleId::OrR1 ? f->left() : f->right();
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Succ, static_cast<std::size_t>(pos.formula)),
                              c, Side::Succ, part);
      return match(expected, 0);
    }

    case RuleId::OrL: {
      if (auto e = arity(2)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::Or)) return "OrL principal must be a disjunction in the antecedent";
      Hypersequent base = detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula));
      if (auto e = match(detail::add_formula(base, c, Side::Ante, f->left()), 0)) return e;
      return match(detail::add_formula(base, c, Side::Ante, f->right()), 1);
    }

    case RuleId::ImpL: {
      if (auto e = arity(2)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::Implies)) return "ImpL principal must be an implication in the antecedent";
      Hypersequent base = detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula));
      if (auto e = match(detail::add_formula(base, c, Side::Succ, f->left()), 0)) return e;
      return match(detail::add_formula(base, c, Side::Ante, f->right()), 1);
    }

    case RuleId::ImpR: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::Implies)) return "ImpR principal must be an implication in the succedent";
      Hypersequent expected =
          detail::add_formula(detail::add_formula(detail::remove_formula(conclusion, c, Side::Succ,
                                                                         static_cast<std::size_t>(pos.formula)),
                                                  c, Side::Ante, f->left()),
                              c, Side::Succ, f->right());
      return match(expected, 0);
    }

    case RuleId::BoxL: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::Box)) return "BoxL principal must be a box in the antecedent";
      if (c + 1 >= n) return "BoxL needs a component immediately to the right";
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula)),
                              c + 1, Side::Ante, f->left());
      return match(expected, 0);
    }

    case RuleId::BoxR: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::Box)) return "BoxR principal must be a box in the succedent";
      if (c != n - 1) return "BoxR applies only to the rightmost component";
      Hypersequent expected = detail::append_component(
          detail::remove_formula(conclusion, c, Side::Succ, static_cast<std::size_t>(pos.formula)),
          Sequent({}, {f->left()}));
      return match(expected, 0);
    }

    case RuleId::DiaL: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Ante);
      if (!f || !f->is(Conn::Diamond)) return "DiaL principal must be a diamond in the antecedent";
      if (c != n - 1) return "DiaL applies only to the rightmost component";
      Hypersequent expected = detail::append_component(
          detail::remove_formula(conclusion, c, Side::Ante, static_cast<std::size_t>(pos.formula)),
          Sequent({f->left()}, {}));
      return match(expected, 0);
    }

    case RuleId::DiaR: {
      if (auto e = arity(1)) return e;
      auto f = principal(Side::Succ);
      if (!f || !f->is(Conn::Diamond)) return "DiaR principal must be a diamond in the succedent";
      if (c + 1 >= n) return "DiaR needs a component immediately to the right";
      Hypersequent expected =
          detail::add_formula(detail::remove_formula(conclusion, c, Side::Succ, static_cast<std::size_t>(pos.formula)),
                              c + 1, Side::Succ, f->left());
      return match(expected, 0);
    }
  }
  return "unknown rule";
}

struct CheckReport {
  bool valid = true;
  std::vector<int> path;  // child indices from the root to the first invalid node
  std::string reason;
};

inline CheckReport check_derivation(const Derivation& d, LogicId logic, bool allow_cut) {
  const std::set<RuleId> allowed = rules_of(logic, allow_cut);

  std::vector<int> path;
  CheckReport report;
  auto walk = [&](auto&& self, const Derivation& node) -> bool {
    if (!allowed.contains(node.rule)) {
      report = {false, path, "rule not in logic: " + std::string(rule_name(node.rule)) + " is unavailable in " +
                                 logic_name(logic)};
      return false;
    }
    std::vector<Hypersequent> premise_conclusions;
    premise_conclusions.reserve(node.premises.size());
    for (const Derivation& p : node.premises) premise_conclusions.push_back(p.conclusion);
    if (auto err = check_step(node.conclusion, node.rule, node.position, premise_conclusions)) {
      report = {false, path, *err};
      return false;
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i) {
      path.push_back(static_cast<int>(i));
      if (!self(self, node.premises[i])) return false;
      path.pop_back();
    }
    return true;
  };
  walk(walk, d);
  return report;
}

struct NotClosed : std::runtime_error {
  NotClosed() : std::runtime_error("component is not closed by the given formula") {}
};

// Number of inference nodes in a derivation.
inline std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += derivation_size(p);
  return n;
}

namespace detail {

inline Derivation closure_chain(const Hypersequent& h, std::size_t comp, const Formula& shared) {
  // Strip one weakened formula at a time; below that, peel empty components
  // with EWL/EWR; the axiom sits at the top of the chain.
  const std::size_t m = h.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (Side side : {Side::Ante, Side::Succ}) {
      const auto& v = zone(h.at(j), side);
      std::size_t keep = std::numeric_limits<std::size_t>::max();
      if (j == comp) {
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i] == shared) {
            keep = i;
            break;
          }
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == keep) continue;
        Derivation sub = closure_chain(remove_formula(h, j, side, i), comp, shared);
        return Derivation{side == Side::Ante ? RuleId::WL : RuleId::WR, h,
                          Position{static_cast<int>(j), static_cast<int>(i)}, {std::move(sub)}};
      }
    }
  }
  if (comp > 0) {
    Derivation sub = closure_chain(erase_component(h, 0), comp - 1, shared);
    return Derivation{RuleId::EWL, h, Position{}, {std::move(sub)}};
  }
  if (m > 1) {
    Derivation sub = closure_chain(erase_component(h, m - 1), comp, shared);
    return Derivation{RuleId::EWR, h, Position{}, {std::move(sub)}};
  }
  return Derivation{RuleId::Axiom, h, Position{}, {}};
}

}  // namespace detail

// Derives h from the axiom 'shared => shared' using only WL, WR, EWL and
// EWR, starting at the closed component. Valid in every logic.
inline Derivation closure_derivation(const Hypersequent& h, std::size_t component, const Formula& shared) {
  if (component >= h.size()) throw NotClosed{};
  if (!h.at(component).in_antecedent(shared) || !h.at(component).in_succedent(shared)) throw NotClosed{};
  return detail::closure_chain(h, component, shared);
}

}  // namespace relhyp
