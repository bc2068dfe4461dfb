#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relhyp/formula.hpp"

namespace relhyp {

// Position in the successor tree: a nonempty sequence of naturals, rendered
// dotted ("0.1.1").
class Label {
public:
  Label() : digits_{0} {}
  explicit Label(std::vector<int> digits) : digits_(std::move(digits)) {
    if (digits_.empty()) throw std::invalid_argument("empty label");
  }

  static Label root() { return Label(); }
  Label child(int k) const {
    std::vector<int> d = digits_;
    d.push_back(k);
    return Label(std::move(d));
  }

  const std::vector<int>& digits() const { return digits_; }
  std::size_t depth() const { return digits_.size(); }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i) s.push_back('.');
      s += std::to_string(digits_[i]);
    }
    return s;
  }

  friend bool operator==(const Label& a, const Label& b) = default;
  friend auto operator<=>(const Label& a, const Label& b) = default;

private:
  std::vector<int> digits_;
};

// The four relations on labels: immediate successor R, its reflexive closure
// R', its transitive closure R+ (proper prefix), and R* (prefix or equal).
enum class LabelRel { Child, ChildOrEqual, Descendant, DescendantOrEqual };

inline bool is_label_prefix(const Label& a, const Label& b) {
  if (a.digits().size() > b.digits().size()) return false;
  return std::equal(a.digits().begin(), a.digits().end(), b.digits().begin());
}

inline bool label_related(const Label& a, const Label& b, LabelRel kind) {
  switch (kind) {
    case LabelRel::Child:
      return b.digits().size() == a.digits().size() + 1 && is_label_prefix(a, b);
    case LabelRel::ChildOrEqual:
      return a == b || label_related(a, b, LabelRel::Child);
    case LabelRel::Descendant:
      return a.digits().size() < b.digits().size() && is_label_prefix(a, b);
    case LabelRel::DescendantOrEqual:
      return is_label_prefix(a, b);
  }
  return false;
}

// A sequent over multisets. The vectors preserve multiplicity and insertion
// order for checker fidelity; membership queries used by saturation are
// set-like. Equality compares multisets.
class Sequent {
public:
  Sequent() = default;
  Sequent(std::vector<Formula> antecedent, std::vector<Formula> succedent)
      : ante_(std::move(antecedent)), succ_(std::move(succedent)) {}

  const std::vector<Formula>& antecedent() const { return ante_; }
  const std::vector<Formula>& succedent() const { return succ_; }
  bool empty() const { return ante_.empty() && succ_.empty(); }
  std::size_t size() const { return ante_.size() + succ_.size(); }

  void add_antecedent(Formula f) { ante_.push_back(std::move(f)); }
  void add_succedent(Formula f) { succ_.push_back(std::move(f)); }

  bool in_antecedent(const Formula& f) const { return contains(ante_, f); }
  bool in_succedent(const Formula& f) const { return contains(succ_, f); }

  // First formula occurring on both sides, if any.
  std::optional<Formula> shared_formula() const {
    for (const Formula& f : ante_)
      if (contains(succ_, f)) return f;
    return std::nullopt;
  }

  friend bool operator==(const Sequent& a, const Sequent& b) {
    return multiset_equal(a.ante_, b.ante_) && multiset_equal(a.succ_, b.succ_);
  }

  static bool multiset_equal(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    if (a.size() != b.size()) return false;
    std::vector<Formula> x = a, y = b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return std::equal(x.begin(), x.end(), y.begin());
  }

private:
  static bool contains(const std::vector<Formula>& v, const Formula& f) {
    return std::find(v.begin(), v.end(), f) != v.end();
  }

  std::vector<Formula> ante_, succ_;
};

// A component sharing a formula between its sides makes the whole
// hypersequent derivable from the axiom via weakenings.
inline bool is_closed(const Sequent& s) { return s.shared_formula().has_value(); }

// G' extends G if both sides grew, as sets.
inline bool sequent_extends(const Sequent& bigger, const Sequent& smaller) {
  for (const Formula& f : smaller.antecedent())
    if (!bigger.in_antecedent(f)) return false;
  for (const Formula& f : smaller.succedent())
    if (!bigger.in_succedent(f)) return false;
  return true;
}

// Unlabelled hypersequent: a nonempty sequence of sequents. This is the form
// inputs and derivations use.
class Hypersequent {
public:
  explicit Hypersequent(std::vector<Sequent> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("empty hypersequent");
  }

  const std::vector<Sequent>& components() const { return comps_; }
  std::size_t size() const { return comps_.size(); }
  const Sequent& at(std::size_t i) const { return comps_.at(i); }

  friend bool operator==(const Hypersequent& a, const Hypersequent& b) { return a.comps_ == b.comps_; }

private:
  std::vector<Sequent> comps_;
};

struct LabelledComponent {
  Label label;
  Sequent sequent;
};

// Labelled hypersequent: the label sequence forms a branch (immediate
// children for K/D, allowing repeats for T).
class LabelledHypersequent {
public:
  explicit LabelledHypersequent(std::vector<LabelledComponent> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("empty labelled hypersequent");
  }

  const std::vector<LabelledComponent>& components() const { return comps_; }
  std::size_t size() const { return comps_.size(); }
  const LabelledComponent& at(std::size_t i) const { return comps_.at(i); }
  const Label& rightmost_label() const { return comps_.back().label; }

  // Index of the rightmost component carrying this label, if any.
  std::optional<std::size_t> rightmost_index(const Label& l) const {
    for (std::size_t i = comps_.size(); i-- > 0;)
      if (comps_[i].label == l) return i;
    return std::nullopt;
  }

  bool has_label(const Label& l) const { return rightmost_index(l).has_value(); }

  // Distinct labels in order of first occurrence.
  std::vector<Label> labels() const {
    std::vector<Label> out;
    for (const auto& c : comps_)
      if (std::find(out.begin(), out.end(), c.label) == out.end()) out.push_back(c.label);
    return out;
  }

  Hypersequent unlabelled() const {
    std::vector<Sequent> comps;
    comps.reserve(comps_.size());
    for (const auto& c : comps_) comps.push_back(c.sequent);
    return Hypersequent(std::move(comps));
  }

  friend bool operator==(const LabelledHypersequent& a, const LabelledHypersequent& b) {
    if (a.comps_.size() != b.comps_.size()) return false;
    for (std::size_t i = 0; i < a.comps_.size(); ++i)
      if (a.comps_[i].label != b.comps_[i].label || !(a.comps_[i].sequent == b.comps_[i].sequent)) return false;
    return true;
  }

private:
  std::vector<LabelledComponent> comps_;
};

// Component i (1-based) gets the label 0.0...0 with i zeros.
inline LabelledHypersequent label_initial(const Hypersequent& h) {
  std::vector<LabelledComponent> comps;
  Label l = Label::root();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) l = l.child(0);
    comps.push_back({l, h.at(i)});
  }
  return LabelledHypersequent(std::move(comps));
}

// Rightmost component labelled l, or the empty sequent.
inline Sequent component_at(const LabelledHypersequent& h, const Label& l) {
  if (auto i = h.rightmost_index(l)) return h.at(*i).sequent;
  return Sequent{};
}

// h2 extends h1 if, for every label of h1, the rightmost components grew as
// sets on both sides.
inline bool extends(const LabelledHypersequent& h2, const LabelledHypersequent& h1) {
  for (const Label& l : h1.labels())
    if (!sequent_extends(component_at(h2, l), component_at(h1, l))) return false;
  return true;
}

inline std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent().size(); ++i) {
    if (i) out += ", ";
    out += render_formula(s.antecedent()[i]);
  }
  out += s.antecedent().empty() ? "=>" : " =>";
  for (std::size_t i = 0; i < s.succedent().size(); ++i) {
    out += i ? ", " : " ";
    out += render_formula(s.succedent()[i]);
  }
  return out;
}

inline std::string to_string(const Hypersequent& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += " ; ";
    out += to_string(h.at(i));
  }
  return out;
}

// Output-only labelled form: "{0} p => q ; {0.0} ...".
inline std::string to_string(const LabelledHypersequent& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += " ; ";
    out += "{" + h.at(i).label.str() + "} " + to_string(h.at(i).sequent);
  }
  return out;
}

}  // namespace relhyp
