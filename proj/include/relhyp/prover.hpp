#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relhyp/calculus.hpp"
#include "relhyp/hypersequent.hpp"
#include "relhyp/reduction.hpp"
#include "relhyp/semantics.hpp"

namespace relhyp {

struct NotReduced : std::runtime_error {
  NotReduced() : std::runtime_error("hypersequent is not fully reduced and closure-free") {}
};

struct UnsupportedLogic : std::runtime_error {
  LogicId logic;
  UnsupportedLogic(LogicId l, std::string why)
      : std::runtime_error("UnsupportedLogic: no decision procedure for " + std::string(logic_name(l)) + ": " +
                           std::move(why)),
        logic(l) {}
};

struct InconsistentTree : std::runtime_error {
  explicit InconsistentTree(const std::string& why) : std::runtime_error("inconsistent search tree: " + why) {}
};

// A planned child of a search-tree node. Box successors witness a boxed
// formula in the succedent of the node's rightmost component, diamond
// successors a diamond in its antecedent. Dummy successors keep the
// accessibility relation serial for D when a node needs an heir but offers no
// witness.
struct ChildSpec {
  enum class Kind { BoxSuccessor, DiamondSuccessor, DummySuccessor };
  Kind kind;
  Label label;
  std::optional<Formula> witness;
};

inline const char* child_kind_name(ChildSpec::Kind k) {
  switch (k) {
    case ChildSpec::Kind::BoxSuccessor: return "box";
    case ChildSpec::Kind::DiamondSuccessor: return "diamond";
    case ChildSpec::Kind::DummySuccessor: return "dummy";
  }
  return "?";
}

struct SearchTreeNode {
  LabelledHypersequent hypersequent;  // fully reduced, closure-free
  std::vector<ChildSpec> children;    // successor children; 0-children are implied by the labels
};

struct SearchTree {
  Label root;
  std::map<Label, SearchTreeNode> nodes;
  std::set<Label> extra_loops;  // D only: leaves that carry their own loop
};

struct Refutation {
  KripkeModel model;
  SearchTree tree;
};

struct SearchResult {
  std::variant<Derivation, Refutation> value;

  bool provable() const { return std::holds_alternative<Derivation>(value); }
  const Derivation& derivation() const { return std::get<Derivation>(value); }
  const Refutation& refutation() const { return std::get<Refutation>(value); }
};

namespace detail {

inline std::optional<Formula> strip_modal(const Formula& f, Conn which) {
  if (f.is(which)) return f.left();
  return std::nullopt;
}

inline std::vector<ChildSpec> successor_specs(const LabelledHypersequent& h, LogicId logic, bool has_zero_child) {
  const Label sigma = h.rightmost_label();
  const Sequent& rc = h.components().back().sequent;

  std::vector<ChildSpec> specs;
  std::vector<Formula> seen;
  auto fresh = [&seen](const Formula& f) {
    if (std::find(seen.begin(), seen.end(), f) != seen.end()) return false;
    seen.push_back(f);
    return true;
  };

  int k = 1;
  for (const Formula& f : rc.succedent())
    if (auto psi = strip_modal(f, Conn::Box); psi && fresh(f))
      specs.push_back({ChildSpec::Kind::BoxSuccessor, sigma.child(k++), *psi});
  for (const Formula& f : rc.antecedent())
    if (auto phi = strip_modal(f, Conn::Diamond); phi && fresh(f))
      specs.push_back({ChildSpec::Kind::DiamondSuccessor, sigma.child(k++), *phi});

  if (logic == LogicId::D && specs.empty() && !has_zero_child) {
    bool needs_heir = false;
    for (const Formula& f : rc.antecedent())
      if (f.is(Conn::Box)) needs_heir = true;
    for (const Formula& f : rc.succedent())
      if (f.is(Conn::Diamond)) needs_heir = true;
    if (needs_heir) specs.push_back({ChildSpec::Kind::DummySuccessor, sigma.child(1), std::nullopt});
  }
  return specs;
}

inline int max_modal_depth(const Sequent& s) {
  int d = 0;
  for (const Formula& f : s.antecedent()) d = std::max(d, modal_depth(f));
  for (const Formula& f : s.succedent()) d = std::max(d, modal_depth(f));
  return d;
}

inline std::size_t index_of(const std::vector<Formula>& v, const Formula& f) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == f) return i;
  throw std::logic_error("internal: formula not found");
}

// ---------------------------------------------------------------------------
// Derivation reconstruction. Each saturation step, branch point and successor
// has an inversion: from a derivation of the extended hypersequent we build a
// derivation of the original, using the matching rule plus a contraction (and
// weakenings where the step consumed formulas it had not added). The trailing
// unprocessed input components ride along as inert context.
// ---------------------------------------------------------------------------

struct ConsumedFormula {
  int component;
  Side side;
  Formula formula;
  bool was_added;
};

inline Derivation invert_one_premise(Derivation premise, RuleId rule, int principal_comp, Side principal_side,
                                     const Formula& principal, const std::vector<ConsumedFormula>& consumed,
                                     const Hypersequent& target, const Hypersequent& have) {
  Hypersequent y = have;
  for (const auto& cf : consumed) y = remove_formula(y, static_cast<std::size_t>(cf.component), cf.side, cf.formula);
  y = add_formula(y, static_cast<std::size_t>(principal_comp), principal_side, principal);
  int pidx = static_cast<int>(zone(y.at(static_cast<std::size_t>(principal_comp)), principal_side).size()) - 1;
  Derivation d{rule, y, Position{principal_comp, pidx}, {std::move(premise)}};

  std::vector<ConsumedFormula> to_weaken;
  for (const auto& cf : consumed)
    if (!cf.was_added) to_weaken.push_back(cf);

  // Contract the reintroduced principal; the step kept its own copy.
  Hypersequent z = remove_formula(y, static_cast<std::size_t>(principal_comp), principal_side,
                                  static_cast<std::size_t>(pidx));
  const Hypersequent& contracted = to_weaken.empty() ? target : z;
  int zidx = static_cast<int>(
      index_of(zone(contracted.at(static_cast<std::size_t>(principal_comp)), principal_side), principal));
  d = Derivation{principal_side == Side::Ante ? RuleId::CL : RuleId::CR, contracted, Position{principal_comp, zidx},
                 {std::move(d)}};

  // Weaken back anything the rule consumed that the step had found already
  // present.
  for (std::size_t i = 0; i < to_weaken.size(); ++i) {
    const auto& cf = to_weaken[i];
    bool last = i + 1 == to_weaken.size();
    Hypersequent next = last ? target
                             : add_formula(d.conclusion, static_cast<std::size_t>(cf.component), cf.side, cf.formula);
    int widx = static_cast<int>(index_of(zone(next.at(static_cast<std::size_t>(cf.component)), cf.side), cf.formula));
    d = Derivation{cf.side == Side::Ante ? RuleId::WL : RuleId::WR, next, Position{cf.component, widx},
                   {std::move(d)}};
  }
  return d;
}

// Appends trailing input components to a derivation's conclusion: external
// weakening introduces each empty component, internal weakenings fill it.
inline Derivation extend_with_components(Derivation d, const std::vector<LabelledComponent>& spine,
                                         std::size_t from) {
  for (std::size_t i = from; i < spine.size(); ++i) {
    Hypersequent grown = append_component(d.conclusion, Sequent{});
    d = Derivation{RuleId::EWR, std::move(grown), Position{}, {std::move(d)}};
    std::size_t last = d.conclusion.size() - 1;
    for (const Formula& f : spine[i].sequent.antecedent()) {
      Hypersequent next = add_formula(d.conclusion, last, Side::Ante, f);
      int idx = static_cast<int>(next.at(last).antecedent().size()) - 1;
      d = Derivation{RuleId::WL, std::move(next), Position{static_cast<int>(last), idx}, {std::move(d)}};
    }
    for (const Formula& f : spine[i].sequent.succedent()) {
      Hypersequent next = add_formula(d.conclusion, last, Side::Succ, f);
      int idx = static_cast<int>(next.at(last).succedent().size()) - 1;
      d = Derivation{RuleId::WR, std::move(next), Position{static_cast<int>(last), idx}, {std::move(d)}};
    }
  }
  return d;
}

class Solver {
public:
  Solver(LogicId logic, std::vector<LabelledComponent> spine, std::function<void(const std::string&)> trace)
      : logic_(logic), spine_(std::move(spine)), trace_(std::move(trace)) {}

  struct Success {
    std::map<Label, SearchTreeNode> nodes;
    std::set<Label> loops;
  };
  using Outcome = std::variant<Success, Derivation>;

  // On failure the derivation proves cur's unlabelled form with the
  // unprocessed spine components appended.
  Outcome solve(const LabelledHypersequent& cur, std::size_t spine_pos, std::optional<int> depth_bound) {
    if (auto ev = find_closure(cur)) {
      return closure_derivation(with_rest(cur, spine_pos), static_cast<std::size_t>(ev->component), ev->shared);
    }
    NextStep step = next_reduction_step(cur, logic_);
    if (auto* det = std::get_if<Reduct>(&step)) {
      emit_reduce(*det);
      Outcome out = solve(det->result, spine_pos, depth_bound);
      if (std::holds_alternative<Success>(out)) return out;
      return invert_reduct(std::get<Derivation>(std::move(out)), *det, cur, spine_pos);
    }
    if (auto* branch = std::get_if<std::pair<Reduct, Reduct>>(&step)) {
      emit_reduce(branch->first);
      Outcome left = solve(branch->first.result, spine_pos, depth_bound);
      if (std::holds_alternative<Success>(left)) return left;
      emit_reduce(branch->second);
      Outcome right = solve(branch->second.result, spine_pos, depth_bound);
      if (std::holds_alternative<Success>(right)) return right;
      return invert_branch(std::get<Derivation>(std::move(left)), std::get<Derivation>(std::move(right)),
                           branch->first, cur, spine_pos);
    }
    return expand(cur, spine_pos, depth_bound);
  }

private:
  // cur is fully reduced and closure-free here: generate and solve children.
  Outcome expand(const LabelledHypersequent& cur, std::size_t spine_pos, std::optional<int> depth_bound) {
    const Label sigma = cur.rightmost_label();
    const Sequent& rc = cur.components().back().sequent;
    if (depth_bound && max_modal_depth(rc) >= *depth_bound)
      throw std::logic_error("internal: modal depth failed to decrease towards a successor");

    const bool has_zero_child = spine_pos < spine_.size();
    std::vector<ChildSpec> specs = successor_specs(cur, logic_, has_zero_child);

    Success success;
    if (has_zero_child) {
      const LabelledComponent& next = spine_[spine_pos];
      emit("spine @" + next.label.str());
      Outcome out = solve(push_component(cur, next), spine_pos + 1, std::nullopt);
      if (auto* d = std::get_if<Derivation>(&out)) return std::move(*d);  // already proves cur + rest(spine_pos)
      merge(success, std::get<Success>(std::move(out)));
    }

    const int child_bound = max_modal_depth(rc);
    for (const ChildSpec& spec : specs) {
      emit_successor(spec);
      LabelledComponent seed{spec.label, successor_seed(spec)};
      Outcome out = solve(push_component(cur, seed), spine_.size(), child_bound);
      if (auto* d = std::get_if<Derivation>(&out))
        return extend_with_components(invert_successor(std::move(*d), spec, cur), spine_, spine_pos);
      merge(success, std::get<Success>(std::move(out)));
    }

    if (logic_ == LogicId::D && !has_zero_child && specs.empty()) success.loops.insert(sigma);
    success.nodes.emplace(sigma, SearchTreeNode{cur, std::move(specs)});
    return success;
  }

  static Sequent successor_seed(const ChildSpec& spec) {
    switch (spec.kind) {
      case ChildSpec::Kind::BoxSuccessor: return Sequent({}, {*spec.witness});
      case ChildSpec::Kind::DiamondSuccessor: return Sequent({*spec.witness}, {});
      case ChildSpec::Kind::DummySuccessor: return Sequent{};
    }
    return Sequent{};
  }

  static LabelledHypersequent push_component(const LabelledHypersequent& h, LabelledComponent c) {
    std::vector<LabelledComponent> comps = h.components();
    comps.push_back(std::move(c));
    return LabelledHypersequent(std::move(comps));
  }

  Hypersequent with_rest(const LabelledHypersequent& h, std::size_t spine_pos) const {
    std::vector<Sequent> comps;
    comps.reserve(h.size() + spine_.size() - spine_pos);
    for (const auto& c : h.components()) comps.push_back(c.sequent);
    for (std::size_t i = spine_pos; i < spine_.size(); ++i) comps.push_back(spine_[i].sequent);
    return Hypersequent(std::move(comps));
  }

  // From a derivation of the state right after a saturation step, derive the
  // state right before it.
  Derivation invert_reduct(Derivation d, const Reduct& r, const LabelledHypersequent& before, std::size_t spine_pos) {
    const Hypersequent target = with_rest(before, spine_pos);
    const Hypersequent have = with_rest(r.result, spine_pos);
    const int c = r.component;

    switch (r.rule) {
      case ReductRule::NegL:
        return invert_one_premise(std::move(d), RuleId::NegL, c, Side::Ante, r.principal,
                                  {{c, Side::Succ, r.principal.left(), true}}, target, have);
      case ReductRule::NegR:
        return invert_one_premise(std::move(d), RuleId::NegR, c, Side::Succ, r.principal,
                                  {{c, Side::Ante, r.principal.left(), true}}, target, have);
      case ReductRule::AndL: {
        // Undo each conjunct that the step added, most recent first.
        Hypersequent state = have;
        for (std::size_t i = r.added_antecedent.size(); i-- > 0;) {
          const Formula& g = r.added_antecedent[i];
          Hypersequent prev = remove_formula(state, static_cast<std::size_t>(c), Side::Ante, g);
          RuleId rule = g == r.principal.left() ? RuleId::AndL1 : RuleId::AndL2;
          const Hypersequent& goal = i == 0 ? target : prev;
          d = invert_one_premise(std::move(d), rule, c, Side::Ante, r.principal, {{c, Side::Ante, g, true}}, goal,
                                 state);
          state = std::move(prev);
        }
        return d;
      }
      case ReductRule::OrR: {
        Hypersequent state = have;
        for (std::size_t i = r.added_succedent.size(); i-- > 0;) {
          const Formula& g = r.added_succedent[i];
          Hypersequent prev = remove_formula(state, static_cast<std::size_t>(c), Side::Succ, g);
          RuleId rule = g == r.principal.left() ? RuleId::OrR1 : RuleId::OrR2;
          const Hypersequent& goal = i == 0 ? target : prev;
          d = invert_one_premise(std::move(d), rule, c, Side::Succ, r.principal, {{c, Side::Succ, g, true}}, goal,
                                 state);
          state = std::move(prev);
        }
        return d;
      }
      case ReductRule::ImpR:
        return invert_one_premise(std::move(d), RuleId::ImpR, c, Side::Succ, r.principal,
                                  {{c, Side::Ante, r.principal.left(), !r.added_antecedent.empty()},
                                   {c, Side::Succ, r.principal.right(), !r.added_succedent.empty()}},
                                  target, have);
      case ReductRule::BoxL:
        return invert_one_premise(std::move(d), RuleId::BoxL, c - 1, Side::Ante, r.principal,
                                  {{c, Side::Ante, r.principal.left(), true}}, target, have);
      case ReductRule::DiaR:
        return invert_one_premise(std::move(d), RuleId::DiaR, c - 1, Side::Succ, r.principal,
                                  {{c, Side::Succ, r.principal.left(), true}}, target, have);
      case ReductRule::TUnfoldBox:
      case ReductRule::TUnfoldDia: {
        // The duplicate at c unfolds the component at c-1: consume the
        // unfolded formula, contract the modal principal, then contract the
        // now-identical adjacent components.
        const bool is_box = r.rule == ReductRule::TUnfoldBox;
        const Side side = is_box ? Side::Ante : Side::Succ;
        Hypersequent z =
            remove_formula(have, static_cast<std::size_t>(c), side, r.principal.left());  // dup equals component c-1
        d = invert_one_premise(std::move(d), is_box ? RuleId::BoxL : RuleId::DiaR, c - 1, side, r.principal,
                               {{c, side, r.principal.left(), true}}, z, have);
        return Derivation{RuleId::EC, target, Position{c - 1, -1}, {std::move(d)}};
      }
      default:
        throw std::logic_error("internal: branch alternative passed to invert_reduct");
    }
  }

  Derivation invert_branch(Derivation left, Derivation right, const Reduct& alt, const LabelledHypersequent& before,
                           std::size_t spine_pos) {
    const Hypersequent target = with_rest(before, spine_pos);
    const int c = alt.component;
    RuleId rule;
    Side side;
    switch (alt.rule) {
      case ReductRule::AndRLeft: rule = RuleId::AndR; side = Side::Succ; break;
      case ReductRule::OrLLeft: rule = RuleId::OrL; side = Side::Ante; break;
      case ReductRule::ImpLLeft: rule = RuleId::ImpL; side = Side::Ante; break;
      default: throw std::logic_error("internal: unexpected branch alternative");
    }
    Hypersequent y = add_formula(target, static_cast<std::size_t>(c), side, alt.principal);
    int pidx = static_cast<int>(zone(y.at(static_cast<std::size_t>(c)), side).size()) - 1;
    Derivation d{rule, std::move(y), Position{c, pidx}, {std::move(left), std::move(right)}};
    int zidx = static_cast<int>(index_of(zone(target.at(static_cast<std::size_t>(c)), side), alt.principal));
    return Derivation{side == Side::Ante ? RuleId::CL : RuleId::CR, target, Position{c, zidx}, {std::move(d)}};
  }

  // From a derivation of node + successor seed, derive the node alone.
  Derivation invert_successor(Derivation d, const ChildSpec& spec, const LabelledHypersequent& node) {
    const Hypersequent target = node.unlabelled();
    const int last = static_cast<int>(target.size()) - 1;
    switch (spec.kind) {
      case ChildSpec::Kind::BoxSuccessor: {
        Formula boxed = Formula::box(*spec.witness);
        Hypersequent y = add_formula(target, static_cast<std::size_t>(last), Side::Succ, boxed);
        int pidx = static_cast<int>(y.at(static_cast<std::size_t>(last)).succedent().size()) - 1;
        d = Derivation{RuleId::BoxR, std::move(y), Position{last, pidx}, {std::move(d)}};
        int zidx = static_cast<int>(index_of(target.at(static_cast<std::size_t>(last)).succedent(), boxed));
        return Derivation{RuleId::CR, target, Position{last, zidx}, {std::move(d)}};
      }
      case ChildSpec::Kind::DiamondSuccessor: {
        Formula diamonded = Formula::diamond(*spec.witness);
        Hypersequent y = add_formula(target, static_cast<std::size_t>(last), Side::Ante, diamonded);
        int pidx = static_cast<int>(y.at(static_cast<std::size_t>(last)).antecedent().size()) - 1;
        d = Derivation{RuleId::DiaL, std::move(y), Position{last, pidx}, {std::move(d)}};
        int zidx = static_cast<int>(index_of(target.at(static_cast<std::size_t>(last)).antecedent(), diamonded));
        return Derivation{RuleId::CL, target, Position{last, zidx}, {std::move(d)}};
      }
      case ChildSpec::Kind::DummySuccessor:
        return Derivation{RuleId::Drop, target, Position{}, {std::move(d)}};
    }
    throw std::logic_error("internal: unknown successor kind");
  }

  static void merge(Success& into, Success&& from) {
    into.nodes.merge(from.nodes);
    into.loops.merge(from.loops);
  }

  void emit(const std::string& line) const {
    if (trace_) trace_(line);
  }
  void emit_reduce(const Reduct& r) const {
    if (trace_)
      emit("reduce " + std::string(reduct_rule_name(r.rule)) + " @" + r.target.str() + ": " +
           render_formula(r.principal));
  }
  void emit_successor(const ChildSpec& spec) const {
    if (trace_)
      emit("successor " + std::string(child_kind_name(spec.kind)) + " @" + spec.label.str() +
           (spec.witness ? ": " + render_formula(*spec.witness) : std::string{}));
  }

  LogicId logic_;
  std::vector<LabelledComponent> spine_;
  std::function<void(const std::string&)> trace_;
};

}  // namespace detail

// Successor children of a fully reduced, closure-free node, computed from its
// rightmost component: one box successor per distinct boxed succedent
// formula, then one diamond successor per distinct diamond antecedent
// formula; for D, a dummy successor when the component carries modal
// obligations but offers no witness.
inline std::vector<ChildSpec> successors(const LabelledHypersequent& h, LogicId logic) {
  if (find_closure(h) || !is_fully_reduced(h, logic)) throw NotReduced{};
  return detail::successor_specs(h, logic, false);
}

// Assembles the countermodel from a finished search tree. Worlds are the node
// labels; edges follow the tree (plus the reflexive closure for T, plus the
// recorded loops for D); an atom is true where it appears on the left of the
// node's component.
inline KripkeModel build_model(const SearchTree& tree, LogicId logic) {
  // Any two nodes mentioning a label must agree on its rightmost component.
  std::map<Label, Sequent> canonical;
  for (const auto& [sigma, node] : tree.nodes) {
    for (const Label& tau : node.hypersequent.labels()) {
      Sequent rc = component_at(node.hypersequent, tau);
      auto [it, inserted] = canonical.emplace(tau, rc);
      if (!inserted && !(it->second == rc))
        throw InconsistentTree("label " + tau.str() + " resolves to different components");
    }
  }
  for (const auto& [tau, rc] : canonical)
    if (!tree.nodes.contains(tau)) throw InconsistentTree("label " + tau.str() + " is not a node");

  KripkeModel m;
  for (const auto& [sigma, node] : tree.nodes) {
    m.worlds.push_back(sigma.str());
    if (!(sigma == tree.root)) {
      std::vector<int> parent_digits = sigma.digits();
      parent_digits.pop_back();
      Label parent{std::move(parent_digits)};
      if (!tree.nodes.contains(parent)) throw InconsistentTree("node " + sigma.str() + " has no parent");
      m.edges.insert({parent.str(), sigma.str()});
    }
  }
  if (logic == LogicId::T)
    for (const auto& w : m.worlds) m.edges.insert({w, w});
  if (logic == LogicId::D)
    for (const Label& l : tree.extra_loops) m.edges.insert({l.str(), l.str()});

  for (const auto& [tau, rc] : canonical)
    for (const Formula& f : rc.antecedent())
      if (f.is(Conn::Atom)) m.valuation[f.atom_name()].insert(tau.str());
  return m;
}

// Cut-free decision procedure for K, T and D. Either a derivation of the
// input or a countermodel with the search tree that produced it.
inline SearchResult decide(const Hypersequent& h, LogicId logic,
                           const std::function<void(const std::string&)>& trace = {}) {
  switch (logic) {
    case LogicId::K:
    case LogicId::T:
    case LogicId::D:
      break;
    case LogicId::B:
      throw UnsupportedLogic(logic,
                             "the countermodel construction needs reduced components to stay fixed under "
                             "successor steps, which fails once boxes propagate against the branch direction; "
                             "use 'check' to verify RB derivations");
    case LogicId::S4:
      throw UnsupportedLogic(logic,
                             "unrestricted external weakening discards component information the countermodel "
                             "construction needs; use 'check' to verify RS4 derivations");
    case LogicId::S5:
      throw UnsupportedLogic(logic, "no construction provided here; use 'check' to verify RS5 derivations");
  }

  LabelledHypersequent labelled = label_initial(h);
  detail::Solver solver(logic, labelled.components(), trace);
  LabelledHypersequent root_base(std::vector<LabelledComponent>{labelled.at(0)});
  detail::Solver::Outcome out = solver.solve(root_base, 1, std::nullopt);

  if (auto* d = std::get_if<Derivation>(&out)) return SearchResult{std::move(*d)};

  auto& success = std::get<detail::Solver::Success>(out);
  SearchTree tree{Label::root(), std::move(success.nodes), std::move(success.loops)};
  KripkeModel model = build_model(tree, logic);
  return SearchResult{Refutation{std::move(model), std::move(tree)}};
}

}  // namespace relhyp
