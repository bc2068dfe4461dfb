#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "relhyp/parse.hpp"
#include "relhyp/prover.hpp"

using namespace relhyp;

namespace {

const Formula p = Formula::atom("p");
const Formula q = Formula::atom("q");

Label lab(std::vector<int> digits) { return Label(std::move(digits)); }

WorldAssignment spine_assignment(const Hypersequent& h) {
  WorldAssignment a;
  Label l = Label::root();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) l = l.child(0);
    a.push_back(l.str());
  }
  return a;
}

void check_label_consistency(const SearchTree& tree) {
  std::map<Label, Sequent> canon;
  for (const auto& [sigma, node] : tree.nodes)
    for (const Label& tau : node.hypersequent.labels()) {
      Sequent rc = component_at(node.hypersequent, tau);
      auto [it, fresh] = canon.emplace(tau, rc);
      if (!fresh) CHECK(it->second == rc);
      CHECK(tree.nodes.contains(tau));
    }
}

void check_truth_lemma(const Refutation& ref) {
  for (const auto& [sigma, node] : ref.tree.nodes)
    for (const Label& tau : node.hypersequent.labels()) {
      Sequent s = component_at(node.hypersequent, tau);
      for (const Formula& f : s.antecedent()) {
        CAPTURE(tau.str(), render_formula(f));
        CHECK(eval(ref.model, tau.str(), f));
      }
      for (const Formula& f : s.succedent()) {
        CAPTURE(tau.str(), render_formula(f));
        CHECK_FALSE(eval(ref.model, tau.str(), f));
      }
    }
}

// Full verdict audit: derivations must check cut-free, models must refute the
// input on the logic's frame class.
void check_verdict(const Hypersequent& h, LogicId logic, const SearchResult& result) {
  if (result.provable()) {
    CHECK(result.derivation().conclusion == h);
    CheckReport report = check_derivation(result.derivation(), logic, /*allow_cut=*/false);
    CAPTURE(report.reason);
    CHECK(report.valid);
    return;
  }
  const Refutation& ref = result.refutation();
  CHECK(is_counterexample(ref.model, spine_assignment(h), h));
  for (FrameProperty prop : frame_properties_of(logic)) CHECK(frame_check(ref.model, prop));
  check_truth_lemma(ref);
  check_label_consistency(ref.tree);
}

}  // namespace

TEST_CASE("two-component K example refutes with the three-world model") {
  Hypersequent h = parse_hypersequent("[]~(p&q) => []~q ; p =>");
  SearchResult result = decide(h, LogicId::K);
  REQUIRE_FALSE(result.provable());
  const KripkeModel& m = result.refutation().model;
  CHECK(m.worlds == std::vector<std::string>{"0", "0.0", "0.1"});
  CHECK(m.edges == std::set<std::pair<std::string, std::string>>{{"0", "0.0"}, {"0", "0.1"}});
  CHECK(m.valuation.at("p") == std::set<std::string>{"0.0"});
  CHECK(m.valuation.at("q") == std::set<std::string>{"0.1"});
  check_verdict(h, LogicId::K, result);

  // The search tree records the fully reduced node hypersequents.
  const SearchTree& tree = result.refutation().tree;
  REQUIRE(tree.nodes.size() == 3);
  CHECK(component_at(tree.nodes.at(lab({0, 1})).hypersequent, lab({0, 1})) ==
        Sequent({q, Formula::negation(Formula::conjunction(p, q))},
                {Formula::negation(q), Formula::conjunction(p, q), p}));
}

TEST_CASE("reflexive T example keeps the input world satisfying p") {
  Hypersequent h = parse_hypersequent("[]~(p&q), p => []~q ; p =>");
  SearchResult result = decide(h, LogicId::T);
  REQUIRE_FALSE(result.provable());
  const KripkeModel& m = result.refutation().model;
  CHECK(m.worlds == std::vector<std::string>{"0", "0.0", "0.1"});
  CHECK(m.valuation.at("p") == std::set<std::string>{"0", "0.0"});
  CHECK(m.valuation.at("q") == std::set<std::string>{"0.1"});
  CHECK(frame_check(m, FrameProperty::Reflexive));
  CHECK(m.edges.contains({"0", "0.0"}));
  CHECK(m.edges.contains({"0", "0.1"}));
  check_verdict(h, LogicId::T, result);
}

TEST_CASE("serial D example builds the chain with a final loop") {
  Hypersequent h = parse_hypersequent("[][]p => []p");
  SearchResult result = decide(h, LogicId::D);
  REQUIRE_FALSE(result.provable());
  const KripkeModel& m = result.refutation().model;
  CHECK(m.worlds == std::vector<std::string>{"0", "0.1", "0.1.1"});
  CHECK(m.edges ==
        std::set<std::pair<std::string, std::string>>{{"0", "0.1"}, {"0.1", "0.1.1"}, {"0.1.1", "0.1.1"}});
  CHECK(m.valuation.at("p") == std::set<std::string>{"0.1.1"});
  CHECK(frame_check(m, FrameProperty::Serial));
  check_verdict(h, LogicId::D, result);
}

TEST_CASE("closed input proves with a bare axiom") {
  SearchResult result = decide(parse_hypersequent("p => p"), LogicId::K);
  REQUIRE(result.provable());
  CHECK(result.derivation().rule == RuleId::Axiom);
  CHECK(derivation_size(result.derivation()) == 1);
}

TEST_CASE("distinguishing axioms across K, T, D") {
  Hypersequent t_axiom = parse_hypersequent("=> []p -> p");
  CHECK(decide(t_axiom, LogicId::T).provable());
  CHECK_FALSE(decide(t_axiom, LogicId::K).provable());
  CHECK_FALSE(decide(t_axiom, LogicId::D).provable());

  Hypersequent d_axiom = parse_hypersequent("=> []p -> <>p");
  CHECK(decide(d_axiom, LogicId::D).provable());
  CHECK(decide(d_axiom, LogicId::T).provable());
  CHECK_FALSE(decide(d_axiom, LogicId::K).provable());

  Hypersequent k_axiom = parse_hypersequent("=> [](p->q) -> ([]p -> []q)");
  for (LogicId logic : {LogicId::K, LogicId::T, LogicId::D}) {
    SearchResult result = decide(k_axiom, logic);
    CHECK(result.provable());
    check_verdict(k_axiom, logic, result);
  }

  for (LogicId logic : {LogicId::K, LogicId::T, LogicId::D}) {
    check_verdict(t_axiom, logic, decide(t_axiom, logic));
    check_verdict(d_axiom, logic, decide(d_axiom, logic));
  }
}

TEST_CASE("diamonds spawn and satisfy successors") {
  Hypersequent left_dia = parse_hypersequent("<>p =>");
  SearchResult result = decide(left_dia, LogicId::K);
  REQUIRE_FALSE(result.provable());
  CHECK(result.refutation().model.worlds == std::vector<std::string>{"0", "0.1"});
  CHECK(result.refutation().model.valuation.at("p") == std::set<std::string>{"0.1"});
  check_verdict(left_dia, LogicId::K, result);

  // p -> <>p needs reflexivity: a T validity, refutable in K and D.
  Hypersequent reflexive_dia = parse_hypersequent("p => <>p");
  CHECK(decide(reflexive_dia, LogicId::T).provable());
  check_verdict(reflexive_dia, LogicId::T, decide(reflexive_dia, LogicId::T));
  CHECK_FALSE(decide(reflexive_dia, LogicId::K).provable());
  check_verdict(reflexive_dia, LogicId::K, decide(reflexive_dia, LogicId::K));
  check_verdict(reflexive_dia, LogicId::D, decide(reflexive_dia, LogicId::D));

  // A diamond obligation alone forces a dummy successor and a loop under D.
  Hypersequent dia_succ = parse_hypersequent("=> <>p");
  SearchResult d_result = decide(dia_succ, LogicId::D);
  REQUIRE_FALSE(d_result.provable());
  CHECK(d_result.refutation().model.edges.contains({"0.1", "0.1"}));
  CHECK(d_result.refutation().tree.extra_loops.contains(lab({0, 1})));
  check_verdict(dia_succ, LogicId::D, d_result);
}

TEST_CASE("successors of a fully reduced node") {
  LabelledHypersequent node = label_initial(parse_hypersequent("[]~(p&q) => []~q"));
  std::vector<ChildSpec> specs = successors(node, LogicId::K);
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].kind == ChildSpec::Kind::BoxSuccessor);
  CHECK(specs[0].label == lab({0, 1}));
  CHECK(*specs[0].witness == Formula::negation(q));

  LabelledHypersequent no_boxes = label_initial(parse_hypersequent("q => p"));
  CHECK(successors(no_boxes, LogicId::K).empty());

  // D spawns a dummy heir when only antecedent boxes remain.
  LabelledHypersequent d_node(std::vector<LabelledComponent>{
      {lab({0}), parse_hypersequent("[][]p => []p").at(0)},
      {lab({0, 1}), parse_hypersequent("[]p => p").at(0)},
  });
  std::vector<ChildSpec> d_specs = successors(d_node, LogicId::D);
  REQUIRE(d_specs.size() == 1);
  CHECK(d_specs[0].kind == ChildSpec::Kind::DummySuccessor);
  CHECK(d_specs[0].label == lab({0, 1, 1}));
  CHECK(successors(d_node, LogicId::K).empty());

  CHECK_THROWS_AS(successors(label_initial(parse_hypersequent("p & q =>")), LogicId::K), NotReduced);
  CHECK_THROWS_AS(successors(label_initial(parse_hypersequent("p => p")), LogicId::K), NotReduced);
}

TEST_CASE("build_model assembles worlds, edges and valuation from the tree") {
  // A single node with no modal obligations: D keeps the relation serial
  // with a loop, K leaves it empty.
  SearchTree tree{Label::root(), {}, {}};
  tree.nodes.emplace(Label::root(), SearchTreeNode{label_initial(parse_hypersequent("p => q")), {}});
  tree.extra_loops.insert(Label::root());

  KripkeModel d_model = build_model(tree, LogicId::D);
  CHECK(d_model.worlds == std::vector<std::string>{"0"});
  CHECK(d_model.edges == std::set<std::pair<std::string, std::string>>{{"0", "0"}});
  CHECK(d_model.valuation.at("p") == std::set<std::string>{"0"});
  CHECK_FALSE(d_model.valuation.contains("q"));
  CHECK(build_model(tree, LogicId::K).edges.empty());
  CHECK(build_model(tree, LogicId::T).edges == std::set<std::pair<std::string, std::string>>{{"0", "0"}});

  // Two nodes disagreeing about the root's component are rejected.
  SearchTree bad = tree;
  bad.nodes.emplace(lab({0, 1}),
                    SearchTreeNode{label_initial(parse_hypersequent("q => q ; =>")), {}});
  CHECK_THROWS_AS(build_model(bad, LogicId::K), InconsistentTree);

  // A node without its parent is rejected.
  SearchTree orphan{Label::root(), {}, {}};
  orphan.nodes.emplace(Label::root(), SearchTreeNode{label_initial(parse_hypersequent("p => q")), {}});
  orphan.nodes.emplace(lab({0, 1, 1}),
                       SearchTreeNode{label_initial(parse_hypersequent("p => q")), {}});
  CHECK_THROWS_AS(build_model(orphan, LogicId::K), InconsistentTree);
}

TEST_CASE("unsupported logics are rejected with an explanation") {
  for (LogicId logic : {LogicId::B, LogicId::S4, LogicId::S5}) {
    CHECK_THROWS_AS(decide(parse_hypersequent("=> p"), logic), UnsupportedLogic);
    try {
      decide(parse_hypersequent("=> p"), logic);
    } catch (const UnsupportedLogic& e) {
      CHECK(e.logic == logic);
      CHECK(std::string(e.what()).find("UnsupportedLogic") != std::string::npos);
    }
  }
}

TEST_CASE("trace emits reduction and successor lines") {
  std::vector<std::string> lines;
  decide(parse_hypersequent("[]~(p&q) => []~q ; p =>"), LogicId::K,
         [&](const std::string& line) { lines.push_back(line); });
  REQUIRE_FALSE(lines.empty());
  bool saw_reduce = false, saw_successor = false;
  for (const auto& line : lines) {
    if (line.rfind("reduce ", 0) == 0) saw_reduce = true;
    if (line.rfind("successor ", 0) == 0) saw_successor = true;
  }
  CHECK(saw_reduce);
  CHECK(saw_successor);
  CHECK(std::find(lines.begin(), lines.end(), "reduce BoxL @0.0: []~(p & q)") != lines.end());
}

TEST_CASE("verdicts verify on random inputs") {
  std::mt19937 rng(20240820);
  for (LogicId logic : {LogicId::K, LogicId::T, LogicId::D}) {
    for (int i = 0; i < 250; ++i) {
      Hypersequent h = testgen::random_hypersequent(rng, 2, 2, 2, 2);
      CAPTURE(to_string(h), logic_name(logic));
      check_verdict(h, logic, decide(h, logic));
    }
  }
}

TEST_CASE("K verdicts agree with the bounded oracle on random formulas") {
  std::mt19937 rng(4711);
  auto count_modals = [](const Formula& f) {
    auto rec = [](auto&& self, const Formula& g) -> int {
      switch (g.kind()) {
        case Conn::Atom: return 0;
        case Conn::Box:
        case Conn::Diamond: return 1 + self(self, g.left());
        case Conn::Not: return self(self, g.left());
        default: return self(self, g.left()) + self(self, g.right());
      }
    };
    return rec(rec, f);
  };

  int tried = 0;
  while (tried < 150) {
    Formula f = testgen::random_formula(rng, 3, 2);
    if (degree(f) > 3) continue;
    ++tried;
    Hypersequent h(std::vector<Sequent>{Sequent({}, {f})});
    bool refutable = !decide(h, LogicId::K).provable();

    ModelBound bound;
    bound.max_worlds = 6;
    bound.max_depth = modal_depth(f);
    bound.max_branch = count_modals(f);
    bool oracle_found = oracle_search(h, LogicId::K, bound).has_value();
    CAPTURE(render_formula(f));
    CHECK(refutable == oracle_found);
  }
}
