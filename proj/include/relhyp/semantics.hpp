#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relhyp/calculus.hpp"
#include "relhyp/hypersequent.hpp"

namespace relhyp {

struct UnknownWorld : std::runtime_error {
  explicit UnknownWorld(const std::string& w) : std::runtime_error("unknown world: " + w) {}
};

struct LengthMismatch : std::runtime_error {
  LengthMismatch() : std::runtime_error("world assignment length differs from the number of components") {}
};

struct BoundTooLarge : std::runtime_error {
  BoundTooLarge() : std::runtime_error("oracle enumeration exceeded the configured node budget") {}
};

// Finite pointed-free Kripke model. World ids are plain strings; the prover
// uses dotted labels ("0.1") but files may carry anything.
struct KripkeModel {
  std::vector<std::string> worlds;
  std::set<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::set<std::string>> valuation;  // atom -> worlds where true

  bool has_world(const std::string& w) const {
    return std::find(worlds.begin(), worlds.end(), w) != worlds.end();
  }
  bool has_edge(const std::string& a, const std::string& b) const { return edges.contains({a, b}); }
  bool atom_true(const std::string& name, const std::string& w) const {
    auto it = valuation.find(name);
    return it != valuation.end() && it->second.contains(w);
  }
  std::vector<std::string> successors(const std::string& w) const {
    std::vector<std::string> out;
    for (const auto& [a, b] : edges)
      if (a == w) out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
  }
};

// One world per hypersequent component; consecutive entries must be edges.
using WorldAssignment = std::vector<std::string>;

inline bool eval(const KripkeModel& m, const std::string& w, const Formula& f) {
  if (!m.has_world(w)) throw UnknownWorld(w);
  switch (f.kind()) {
    case Conn::Atom:
      return m.atom_true(f.atom_name(), w);
    case Conn::Not:
      return !eval(m, w, f.left());
    case Conn::And:
      return eval(m, w, f.left()) && eval(m, w, f.right());
    case Conn::Or:
      return eval(m, w, f.left()) || eval(m, w, f.right());
    case Conn::Implies:
      return !eval(m, w, f.left()) || eval(m, w, f.right());
    case Conn::Box:
      for (const std::string& v : m.successors(w))
        if (!eval(m, v, f.left())) return false;
      return true;
    case Conn::Diamond:
      for (const std::string& v : m.successors(w))
        if (eval(m, v, f.left())) return true;
      return false;
  }
  return false;
}

// True iff every antecedent formula holds and every succedent formula fails
// at w.
inline bool is_countermodel(const KripkeModel& m, const std::string& w, const Sequent& s) {
  if (!m.has_world(w)) throw UnknownWorld(w);
  for (const Formula& f : s.antecedent())
    if (!eval(m, w, f)) return false;
  for (const Formula& f : s.succedent())
    if (eval(m, w, f)) return false;
  return true;
}

inline bool is_counterexample(const KripkeModel& m, const WorldAssignment& a, const Hypersequent& h) {
  if (a.size() != h.size()) throw LengthMismatch{};
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!m.has_edge(a[i], a[i + 1])) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_countermodel(m, a[i], h.at(i))) return false;
  return true;
}

// Exhaustive scan over branches of matching length; the first witness in
// lexicographic world order, if any.
inline std::optional<WorldAssignment> has_counterexample(const KripkeModel& m, const Hypersequent& h) {
  std::vector<std::string> sorted = m.worlds;
  std::sort(sorted.begin(), sorted.end());

  WorldAssignment branch;
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == h.size()) return true;
    for (const std::string& w : sorted) {
      if (i > 0 && !m.has_edge(branch.back(), w)) continue;
      if (!is_countermodel(m, w, h.at(i))) continue;
      branch.push_back(w);
      if (self(self, i + 1)) return true;
      branch.pop_back();
    }
    return false;
  };
  if (search(search, 0)) return branch;
  return std::nullopt;
}

enum class FrameProperty { Reflexive, Symmetric, Transitive, Serial, Equivalence };

inline bool frame_check(const KripkeModel& m, FrameProperty p) {
  switch (p) {
    case FrameProperty::Reflexive:
      for (const auto& w : m.worlds)
        if (!m.has_edge(w, w)) return false;
      return true;
    case FrameProperty::Symmetric:
      for (const auto& [a, b] : m.edges)
        if (!m.has_edge(b, a)) return false;
      return true;
    case FrameProperty::Transitive:
      for (const auto& [a, b] : m.edges)
        for (const auto& [c, d] : m.edges)
          if (b == c && !m.has_edge(a, d)) return false;
      return true;
    case FrameProperty::Serial:
      for (const auto& w : m.worlds) {
        bool out = false;
        for (const auto& [a, b] : m.edges)
          if (a == w) {
            out = true;
            break;
          }
        if (!out) return false;
      }
      return true;
    case FrameProperty::Equivalence:
      return frame_check(m, FrameProperty::Reflexive) && frame_check(m, FrameProperty::Symmetric) &&
             frame_check(m, FrameProperty::Transitive);
  }
  return false;
}

// The frame conditions a logic's countermodels must satisfy (none for K).
inline std::vector<FrameProperty> frame_properties_of(LogicId logic) {
  switch (logic) {
    case LogicId::K: return {};
    case LogicId::T: return {FrameProperty::Reflexive};
    case LogicId::S4: return {FrameProperty::Reflexive, FrameProperty::Transitive};
    case LogicId::S5: return {FrameProperty::Equivalence};
    case LogicId::D: return {FrameProperty::Serial};
    case LogicId::B: return {FrameProperty::Symmetric};
  }
  return {};
}

struct ModelBound {
  int max_worlds = 8;
  int max_depth = 4;
  int max_branch = 3;
  long long node_budget = 4'000'000;  // models examined before BoundTooLarge
};

namespace detail {

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.is(Conn::Atom)) {
    out.insert(f.atom_name());
    return;
  }
  collect_atoms(f.left(), out);
  if (is_binary(f.kind())) collect_atoms(f.right(), out);
}

inline std::vector<std::string> atoms_of(const Hypersequent& h) {
  std::set<std::string> s;
  for (const Sequent& c : h.components()) {
    for (const Formula& f : c.antecedent()) collect_atoms(f, s);
    for (const Formula& f : c.succedent()) collect_atoms(f, s);
  }
  return {s.begin(), s.end()};
}

struct TreeShape {
  std::vector<std::string> worlds;                       // preorder, root first
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> leaves;
};

// Enumerates all ordered rooted trees with a fixed node count, bounded depth
// and branching. Worlds are named like prover labels: root "0", children
// "0.1", "0.2", ...
struct ShapeGen {
  int max_branch;
  TreeShape current;
  std::vector<TreeShape>* out;

  // Places `remaining` further nodes below `label`.
  void node(const std::string& label, int remaining, int depth_left, const std::function<void()>& done) {
    if (remaining == 0) {
      current.leaves.push_back(label);
      done();
      current.leaves.pop_back();
      return;
    }
    if (depth_left == 0 || max_branch == 0) return;
    children(label, 1, remaining, depth_left, done);
  }

  void children(const std::string& label, int k, int remaining, int depth_left, const std::function<void()>& done) {
    if (k > max_branch) return;
    for (int take = 1; take <= remaining; ++take) {
      std::string child = label + "." + std::to_string(k);
      current.worlds.push_back(child);
      current.edges.emplace_back(label, child);
      int rest = remaining - take;
      node(child, take - 1, depth_left - 1, [&] {
        if (rest == 0)
          done();
        else
          children(label, k + 1, rest, depth_left, done);
      });
      current.worlds.pop_back();
      current.edges.pop_back();
    }
  }
};

inline void enumerate_tree_shapes(int size, int max_depth, int max_branch, std::vector<TreeShape>& out) {
  ShapeGen gen{max_branch, {}, &out};
  gen.current.worlds.push_back("0");
  gen.node("0", size - 1, max_depth, [&] { out.push_back(gen.current); });
}

}  // namespace detail

// Bounded brute-force search for a counterexample over tree-shaped models:
// all shapes within the bound, all valuations over the atoms of h, smallest
// world count first. For T the reflexive closure is added, for D loops on the
// leaves. A found model is always genuine; absence is only meaningful within
// the bound.
inline std::optional<std::pair<KripkeModel, WorldAssignment>> oracle_search(const Hypersequent& h, LogicId logic,
                                                                            const ModelBound& bound) {
  if (logic != LogicId::K && logic != LogicId::T && logic != LogicId::D)
    throw std::invalid_argument("oracle_search supports K, T and D only");

  const std::vector<std::string> atoms = detail::atoms_of(h);
  long long examined = 0;

  for (int size = 1; size <= bound.max_worlds; ++size) {
    std::vector<detail::TreeShape> shapes;
    detail::enumerate_tree_shapes(size, bound.max_depth, bound.max_branch, shapes);
    for (const auto& shape : shapes) {
      KripkeModel m;
      m.worlds = shape.worlds;
      for (const auto& e : shape.edges) m.edges.insert(e);
      if (logic == LogicId::T)
        for (const auto& w : m.worlds) m.edges.insert({w, w});
      if (logic == LogicId::D)
        for (const auto& w : shape.leaves) m.edges.insert({w, w});

      const std::size_t bits = atoms.size() * m.worlds.size();
      if (bits > 62) throw BoundTooLarge{};
      for (std::uint64_t val = 0; val < (std::uint64_t{1} << bits); ++val) {
        if (++examined > bound.node_budget) throw BoundTooLarge{};
        m.valuation.clear();
        for (std::size_t wi = 0; wi < m.worlds.size(); ++wi)
          for (std::size_t ai = 0; ai < atoms.size(); ++ai)
            if (val >> (wi * atoms.size() + ai) & 1) m.valuation[atoms[ai]].insert(m.worlds[wi]);
        if (auto witness = has_counterexample(m, h)) return std::make_pair(m, *witness);
      }
    }
  }
  return std::nullopt;
}

}  // namespace relhyp
