#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relhyp/calculus.hpp"
#include "relhyp/hypersequent.hpp"

namespace relhyp {

struct UnknownLabel : std::runtime_error {
  explicit UnknownLabel(const Label& l) : std::runtime_error("label not in hypersequent: " + l.str()) {}
};

// Saturation steps. Each adds formulas to (or, for the T unfoldings,
// duplicates) the rightmost component of its target label; a step applies
// only when it adds something not already present, so saturation is
// idempotent and terminating. AndR/OrL/ImpL are branch points with a left and
// a right alternative.
enum class ReductRule {
  NegL, NegR, AndL, OrR, ImpR,
  BoxL, DiaR,
  TUnfoldBox, TUnfoldDia,
  AndRLeft, AndRRight, OrLLeft, OrLRight, ImpLLeft, ImpLRight,
};

inline const char* reduct_rule_name(ReductRule r) {
  switch (r) {
    case ReductRule::NegL: return "NegL";
    case ReductRule::NegR: return "NegR";
    case ReductRule::AndL: return "AndL";
    case ReductRule::OrR: return "OrR";
    case ReductRule::ImpR: return "ImpR";
    case ReductRule::BoxL: return "BoxL";
    case ReductRule::DiaR: return "DiaR";
    case ReductRule::TUnfoldBox: return "TUnfoldBox";
    case ReductRule::TUnfoldDia: return "TUnfoldDia";
    case ReductRule::AndRLeft: return "AndR/left";
    case ReductRule::AndRRight: return "AndR/right";
    case ReductRule::OrLLeft: return "OrL/left";
    case ReductRule::OrLRight: return "OrL/right";
    case ReductRule::ImpLLeft: return "ImpL/left";
    case ReductRule::ImpLRight: return "ImpL/right";
  }
  return "?";
}

inline bool is_branch_alternative(ReductRule r) {
  switch (r) {
    case ReductRule::AndRLeft:
    case ReductRule::AndRRight:
    case ReductRule::OrLLeft:
    case ReductRule::OrLRight:
    case ReductRule::ImpLLeft:
    case ReductRule::ImpLRight: return true;
    default: return false;
  }
}

struct Reduct {
  ReductRule rule;
  Label target;
  Formula principal;
  // Component of `result` that received the additions; for the T unfoldings
  // this is the inserted duplicate.
  int component = 0;
  std::vector<Formula> added_antecedent, added_succedent;
  LabelledHypersequent result;
};

namespace detail {

inline LabelledHypersequent lh_add(const LabelledHypersequent& h, std::size_t comp, bool succedent, const Formula& f) {
  std::vector<LabelledComponent> comps = h.components();
  if (succedent)
    comps[comp].sequent.add_succedent(f);
  else
    comps[comp].sequent.add_antecedent(f);
  return LabelledHypersequent(std::move(comps));
}

inline Reduct make_additive_reduct(const LabelledHypersequent& h, ReductRule rule, const Label& target,
                                   const Formula& principal, std::size_t comp, std::vector<Formula> add_ante,
                                   std::vector<Formula> add_succ) {
  LabelledHypersequent result = h;
  for (const Formula& f : add_ante) result = lh_add(result, comp, false, f);
  for (const Formula& f : add_succ) result = lh_add(result, comp, true, f);
  return Reduct{rule, target, principal, static_cast<int>(comp), std::move(add_ante), std::move(add_succ),
                std::move(result)};
}

inline Reduct make_unfold_reduct(const LabelledHypersequent& h, ReductRule rule, const Label& target,
                                 const Formula& principal, std::size_t comp, const Formula& unfolded) {
  // Insert a duplicate of the component immediately to its right, with the
  // unfolded formula added.
  std::vector<LabelledComponent> comps = h.components();
  LabelledComponent dup = comps[comp];
  if (rule == ReductRule::TUnfoldBox)
    dup.sequent.add_antecedent(unfolded);
  else
    dup.sequent.add_succedent(unfolded);
  comps.insert(comps.begin() + static_cast<std::ptrdiff_t>(comp) + 1, std::move(dup));
  std::vector<Formula> add_ante, add_succ;
  (rule == ReductRule::TUnfoldBox ? add_ante : add_succ).push_back(unfolded);
  return Reduct{rule,
                target,
                principal,
                static_cast<int>(comp) + 1,
                std::move(add_ante),
                std::move(add_succ),
                LabelledHypersequent(std::move(comps))};
}

}  // namespace detail

// All saturation steps applicable to the rightmost component labelled
// `target`, in application order: the single-outcome steps first, then the
// branch alternatives in left/right pairs.
inline std::vector<Reduct> sigma_reducts(const LabelledHypersequent& h, const Label& target, LogicId logic) {
  auto idx = h.rightmost_index(target);
  if (!idx) throw UnknownLabel(target);
  const std::size_t c = *idx;
  const Sequent& s = h.at(c).sequent;

  std::vector<Reduct> out;
  auto additive = [&](ReductRule rule, const Formula& principal, std::vector<Formula> ante, std::vector<Formula> succ) {
    out.push_back(detail::make_additive_reduct(h, rule, target, principal, c, std::move(ante), std::move(succ)));
  };

  for (const Formula& f : s.antecedent())
    if (f.is(Conn::Not) && !s.in_succedent(f.left())) additive(ReductRule::NegL, f, {}, {f.left()});
  for (const Formula& f : s.succedent())
    if (f.is(Conn::Not) && !s.in_antecedent(f.left())) additive(ReductRule::NegR, f, {f.left()}, {});
  for (const Formula& f : s.antecedent()) {
    if (!f.is(Conn::And)) continue;
    std::vector<Formula> missing;
    if (!s.in_antecedent(f.left())) missing.push_back(f.left());
    if (!s.in_antecedent(f.right()) && !(f.right() == f.left())) missing.push_back(f.right());
    if (!missing.empty()) additive(ReductRule::AndL, f, std::move(missing), {});
  }
  for (const Formula& f : s.succedent()) {
    if (!f.is(Conn::Or)) continue;
    std::vector<Formula> missing;
    if (!s.in_succedent(f.left())) missing.push_back(f.left());
    if (!s.in_succedent(f.right()) && !(f.right() == f.left())) missing.push_back(f.right());
    if (!missing.empty()) additive(ReductRule::OrR, f, {}, std::move(missing));
  }
  for (const Formula& f : s.succedent()) {
    if (!f.is(Conn::Implies)) continue;
    std::vector<Formula> ante, succ;
    if (!s.in_antecedent(f.left())) ante.push_back(f.left());
    if (!s.in_succedent(f.right())) succ.push_back(f.right());
    if (!ante.empty() || !succ.empty()) additive(ReductRule::ImpR, f, std::move(ante), std::move(succ));
  }

  // Box and diamond propagation from the component immediately to the left.
  if (c > 0) {
    const Sequent& prev = h.at(c - 1).sequent;
    for (const Formula& f : prev.antecedent())
      if (f.is(Conn::Box) && !s.in_antecedent(f.left())) additive(ReductRule::BoxL, f, {f.left()}, {});
    for (const Formula& f : prev.succedent())
      if (f.is(Conn::Diamond) && !s.in_succedent(f.left())) additive(ReductRule::DiaR, f, {}, {f.left()});
  }

  if (logic == LogicId::T) {
    for (const Formula& f : s.antecedent())
      if (f.is(Conn::Box) && !s.in_antecedent(f.left()))
        out.push_back(detail::make_unfold_reduct(h, ReductRule::TUnfoldBox, target, f, c, f.left()));
    for (const Formula& f : s.succedent())
      if (f.is(Conn::Diamond) && !s.in_succedent(f.left()))
        out.push_back(detail::make_unfold_reduct(h, ReductRule::TUnfoldDia, target, f, c, f.left()));
  }

  // Branch points: both alternatives must still be missing, otherwise the
  // component already satisfies the disjunctive saturation condition.
  for (const Formula& f : s.succedent())
    if (f.is(Conn::And) && !s.in_succedent(f.left()) && !s.in_succedent(f.right())) {
      additive(ReductRule::AndRLeft, f, {}, {f.left()});
      additive(ReductRule::AndRRight, f, {}, {f.right()});
    }
  for (const Formula& f : s.antecedent())
    if (f.is(Conn::Or) && !s.in_antecedent(f.left()) && !s.in_antecedent(f.right())) {
      additive(ReductRule::OrLLeft, f, {f.left()}, {});
      additive(ReductRule::OrLRight, f, {f.right()}, {});
    }
  for (const Formula& f : s.antecedent())
    if (f.is(Conn::Implies) && !s.in_succedent(f.left()) && !s.in_antecedent(f.right())) {
      additive(ReductRule::ImpLLeft, f, {}, {f.left()});
      additive(ReductRule::ImpLRight, f, {f.right()}, {});
    }

  return out;
}

inline bool is_fully_reduced(const LabelledHypersequent& h, LogicId logic) {
  for (const Label& l : h.labels())
    if (!sigma_reducts(h, l, logic).empty()) return false;
  return true;
}

// The next saturation step under the fixed strategy: the first single-outcome
// step scanning labels left to right, otherwise the first branch point as a
// left/right pair, otherwise nothing (fully reduced).
using NextStep = std::variant<std::monostate, Reduct, std::pair<Reduct, Reduct>>;

inline NextStep next_reduction_step(const LabelledHypersequent& h, LogicId logic) {
  std::optional<std::pair<Reduct, Reduct>> first_branch;
  for (const Label& l : h.labels()) {
    std::vector<Reduct> rs = sigma_reducts(h, l, logic);
    if (rs.empty()) continue;
    // sigma_reducts orders single-outcome steps before branch alternatives,
    // so rs[0] decides which kind this label offers.
    if (!is_branch_alternative(rs[0].rule)) return rs[0];
    if (!first_branch) first_branch = std::make_pair(rs[0], rs[1]);
  }
  if (first_branch) return *first_branch;
  return std::monostate{};
}

struct ClosureEvidence {
  int component = 0;
  Formula shared;
};

inline std::optional<ClosureEvidence> find_closure(const LabelledHypersequent& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (auto f = h.at(i).sequent.shared_formula()) return ClosureEvidence{static_cast<int>(i), *f};
  return std::nullopt;
}

struct BranchChoice {
  int branch_point = 0;  // ordinal of the branch point along this path
  bool right = false;

  friend bool operator==(const BranchChoice&, const BranchChoice&) = default;
};
using ChoiceTrace = std::vector<BranchChoice>;

// One outcome of a depth-first saturation: either a fully reduced extension
// of the input, or a partially reduced hypersequent whose closed component
// shows this path of choices leads to something derivable.
struct FullReduction {
  LabelledHypersequent hypersequent;
  ChoiceTrace trace;
  std::optional<ClosureEvidence> closure;
};

// Depth-first enumeration over branch-point alternatives, left first.
// Single-outcome steps are applied eagerly; closure stops a path immediately.
// The callback returns false to stop the enumeration.
inline void full_reductions(const LabelledHypersequent& start, LogicId logic,
                            const std::function<bool(const FullReduction&)>& yield) {
  ChoiceTrace trace;
  auto walk = [&](auto&& self, LabelledHypersequent h) -> bool {
    while (true) {
      if (auto ev = find_closure(h)) return yield(FullReduction{std::move(h), trace, ev});
      NextStep step = next_reduction_step(h, logic);
      if (std::holds_alternative<std::monostate>(step)) return yield(FullReduction{std::move(h), trace, std::nullopt});
      if (auto* det = std::get_if<Reduct>(&step)) {
        h = det->result;
        continue;
      }
      auto& [left, right] = std::get<std::pair<Reduct, Reduct>>(step);
      int id = static_cast<int>(trace.size());
      trace.push_back({id, false});
      if (!self(self, left.result)) return false;
      trace.back().right = true;
      bool go_on = self(self, right.result);
      trace.pop_back();
      return go_on;
    }
  };
  walk(walk, start);
}

inline std::vector<FullReduction> all_full_reductions(const LabelledHypersequent& start, LogicId logic) {
  std::vector<FullReduction> out;
  full_reductions(start, logic, [&](const FullReduction& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

}  // namespace relhyp
