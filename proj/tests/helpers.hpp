#pragma once

// Shared test utilities: deterministic random generators for formulas,
// sequents and hypersequents, plus an eval implementation independent of the
// one under test.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "relhyp/formula.hpp"
#include "relhyp/hypersequent.hpp"
#include "relhyp/semantics.hpp"

namespace testgen {

using relhyp::Conn;
using relhyp::Formula;
using relhyp::Hypersequent;
using relhyp::Sequent;

inline const std::vector<std::string>& atom_pool() {
  static const std::vector<std::string> pool = {"p", "q", "r", "s"};
  return pool;
}

inline Formula random_formula(std::mt19937& rng, int max_depth, int atoms = 4) {
  std::uniform_int_distribution<int> atom_pick(0, atoms - 1);
  if (max_depth == 0) return Formula::atom(atom_pool()[static_cast<std::size_t>(atom_pick(rng))]);
  std::uniform_int_distribution<int> pick(0, 6);
  switch (pick(rng)) {
    case 0: return Formula::atom(atom_pool()[static_cast<std::size_t>(atom_pick(rng))]);
    case 1: return Formula::negation(random_formula(rng, max_depth - 1, atoms));
    case 2: return Formula::conjunction(random_formula(rng, max_depth - 1, atoms), random_formula(rng, max_depth - 1, atoms));
    case 3: return Formula::disjunction(random_formula(rng, max_depth - 1, atoms), random_formula(rng, max_depth - 1, atoms));
    case 4: return Formula::implication(random_formula(rng, max_depth - 1, atoms), random_formula(rng, max_depth - 1, atoms));
    case 5: return Formula::box(random_formula(rng, max_depth - 1, atoms));
    default: return Formula::diamond(random_formula(rng, max_depth - 1, atoms));
  }
}

inline Sequent random_sequent(std::mt19937& rng, int max_formulas, int max_depth, int atoms = 4) {
  std::uniform_int_distribution<int> count(0, max_formulas);
  std::vector<Formula> ante, succ;
  for (int i = count(rng); i > 0; --i) ante.push_back(random_formula(rng, max_depth, atoms));
  for (int i = count(rng); i > 0; --i) succ.push_back(random_formula(rng, max_depth, atoms));
  return Sequent(std::move(ante), std::move(succ));
}

inline Hypersequent random_hypersequent(std::mt19937& rng, int max_components, int max_formulas, int max_depth,
                                        int atoms = 4) {
  std::uniform_int_distribution<int> count(1, max_components);
  std::vector<Sequent> comps;
  for (int i = count(rng); i > 0; --i) comps.push_back(random_sequent(rng, max_formulas, max_depth, atoms));
  return Hypersequent(std::move(comps));
}

// Second route for evaluation: computes the set of worlds satisfying a
// formula instead of recursing per world.
inline std::set<std::string> satisfying_worlds(const relhyp::KripkeModel& m, const Formula& f) {
  std::set<std::string> out;
  switch (f.kind()) {
    case Conn::Atom: {
      auto it = m.valuation.find(f.atom_name());
      if (it != m.valuation.end())
        for (const auto& w : it->second)
          if (m.has_world(w)) out.insert(w);
      return out;
    }
    case Conn::Not: {
      std::set<std::string> sub = satisfying_worlds(m, f.left());
      for (const auto& w : m.worlds)
        if (!sub.contains(w)) out.insert(w);
      return out;
    }
    case Conn::And: {
      std::set<std::string> a = satisfying_worlds(m, f.left()), b = satisfying_worlds(m, f.right());
      for (const auto& w : a)
        if (b.contains(w)) out.insert(w);
      return out;
    }
    case Conn::Or: {
      out = satisfying_worlds(m, f.left());
      for (const auto& w : satisfying_worlds(m, f.right())) out.insert(w);
      return out;
    }
    case Conn::Implies: {
      std::set<std::string> a = satisfying_worlds(m, f.left()), b = satisfying_worlds(m, f.right());
      for (const auto& w : m.worlds)
        if (!a.contains(w) || b.contains(w)) out.insert(w);
      return out;
    }
    case Conn::Box: {
      std::set<std::string> sub = satisfying_worlds(m, f.left());
      for (const auto& w : m.worlds) {
        bool all = true;
        for (const auto& [x, y] : m.edges)
          if (x == w && !sub.contains(y)) all = false;
        if (all) out.insert(w);
      }
      return out;
    }
    case Conn::Diamond: {
      std::set<std::string> sub = satisfying_worlds(m, f.left());
      for (const auto& [x, y] : m.edges)
        if (sub.contains(y)) out.insert(x);
      return out;
    }
  }
  return out;
}

// Enumerates every model with up to max_worlds worlds over the given atoms:
// all edge subsets, all valuations. `keep` filters frames (frame classes);
// returns false from `fn` to stop early.
inline void for_each_small_model(int max_worlds, const std::vector<std::string>& atoms,
                                 const std::function<bool(const relhyp::KripkeModel&)>& keep,
                                 const std::function<bool(const relhyp::KripkeModel&)>& fn) {
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<std::string> worlds;
    for (int i = 0; i < n; ++i) worlds.push_back("w" + std::to_string(i));
    const int edge_bits = n * n;
    const int val_bits = n * static_cast<int>(atoms.size());
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << edge_bits); ++e) {
      relhyp::KripkeModel base;
      base.worlds = worlds;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (e >> (i * n + j) & 1) base.edges.insert({worlds[static_cast<std::size_t>(i)], worlds[static_cast<std::size_t>(j)]});
      if (!keep(base)) continue;
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << val_bits); ++v) {
        relhyp::KripkeModel m = base;
        for (int i = 0; i < n; ++i)
          for (std::size_t a = 0; a < atoms.size(); ++a)
            if (v >> (static_cast<std::size_t>(i) * atoms.size() + a) & 1)
              m.valuation[atoms[a]].insert(worlds[static_cast<std::size_t>(i)]);
        if (!fn(m)) return;
      }
    }
  }
}

// Counterexample transfer for a one-premise rule instance: on every small
// model of the matching frame class, a counterexample to the conclusion must
// survive as a counterexample to the premise. This is the executable content
// of the soundness arguments for the external structural rules.
inline bool counterexample_transfer_holds(const Hypersequent& premise, const Hypersequent& conclusion,
                                          const std::function<bool(const relhyp::KripkeModel&)>& frame_class,
                                          int max_worlds = 3) {
  std::set<std::string> atom_set;
  for (const Hypersequent* h : {&premise, &conclusion})
    for (const Sequent& s : h->components()) {
      for (const Formula& f : s.antecedent()) relhyp::detail::collect_atoms(f, atom_set);
      for (const Formula& f : s.succedent()) relhyp::detail::collect_atoms(f, atom_set);
    }
  std::vector<std::string> atoms(atom_set.begin(), atom_set.end());

  bool ok = true;
  for_each_small_model(max_worlds, atoms, frame_class, [&](const relhyp::KripkeModel& m) {
    if (relhyp::has_counterexample(m, conclusion) && !relhyp::has_counterexample(m, premise)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

// Random small models for cross-checking eval.
inline relhyp::KripkeModel random_model(std::mt19937& rng, int max_worlds, int atoms = 3) {
  std::uniform_int_distribution<int> count(1, max_worlds);
  std::bernoulli_distribution coin(0.4);
  relhyp::KripkeModel m;
  int n = count(rng);
  for (int i = 0; i < n; ++i) m.worlds.push_back("w" + std::to_string(i));
  for (const auto& a : m.worlds)
    for (const auto& b : m.worlds)
      if (coin(rng)) m.edges.insert({a, b});
  for (int ai = 0; ai < atoms; ++ai)
    for (const auto& w : m.worlds)
      if (coin(rng)) m.valuation[atom_pool()[static_cast<std::size_t>(ai)]].insert(w);
  return m;
}

}  // namespace testgen
