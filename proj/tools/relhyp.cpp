// relhyp — relational hypersequent toolbox for modal logics.
//
//   prove   decide K / T / D inputs: a checked derivation or a verified
//           countermodel
//   check   validate a derivation file against a chosen calculus
//   verify  confirm a model file is a counterexample on the right frame class
//   oracle  bounded brute-force countermodel search, for cross-checking
//
// Exit codes: 0 positive result, 1 negative result, 2 usage/parse errors,
// 3 failed self-verification (prove only).

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relhyp/io.hpp"
#include "relhyp/parse.hpp"
#include "relhyp/prover.hpp"

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;
constexpr int kExitSelfCheck = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct InputOptions {
  std::string text;
  std::string file;

  std::string resolve() const {
    if (!file.empty()) return read_file(file);
    if (!text.empty()) return text;
    throw std::runtime_error("no input hypersequent given (pass it as an argument or via --file)");
  }
};

relhyp::LogicId parse_logic(const std::string& name) {
  auto logic = relhyp::logic_from_name(name);
  if (!logic) throw std::runtime_error("unknown logic: " + name);
  return *logic;
}

void print_model_text(const relhyp::KripkeModel& m, std::ostream& os) {
  os << "worlds:";
  for (const auto& w : m.worlds) os << " " << w;
  os << "\nedges:";
  for (const auto& [a, b] : m.edges) os << " (" << a << "," << b << ")";
  os << "\nvaluation:";
  for (const auto& [atom, worlds] : m.valuation) {
    os << " " << atom << "={";
    bool first = true;
    for (const auto& w : worlds) {
      if (!first) os << ",";
      os << w;
      first = false;
    }
    os << "}";
  }
  os << "\n";
}

bool frame_ok(const relhyp::KripkeModel& m, relhyp::LogicId logic) {
  for (auto prop : relhyp::frame_properties_of(logic))
    if (!relhyp::frame_check(m, prop)) return false;
  return true;
}

int run_prove(const InputOptions& input, const std::string& logic_name, const std::string& format, bool trace) {
  relhyp::LogicId logic;
  relhyp::Hypersequent h{std::vector<relhyp::Sequent>{relhyp::Sequent{}}};
  try {
    logic = parse_logic(logic_name);
    h = relhyp::parse_hypersequent(input.resolve());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  relhyp::SearchResult result{relhyp::Refutation{}};
  try {
    result = relhyp::decide(h, logic, trace ? [](const std::string& line) { std::cerr << line << "\n"; }
                                            : std::function<void(const std::string&)>{});
  } catch (const relhyp::UnsupportedLogic& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (result.provable()) {
    const relhyp::Derivation& d = result.derivation();
    relhyp::CheckReport report = relhyp::check_derivation(d, logic, /*allow_cut=*/false);
    if (!report.valid || !(d.conclusion == h)) {
      std::cerr << "self-verification failed: " << (report.valid ? "conclusion mismatch" : report.reason) << "\n";
      return kExitSelfCheck;
    }
    std::cout << "PROVABLE\n" << relhyp::derivation_to_json(d).dump(2) << "\n";
    return kExitPositive;
  }

  const relhyp::Refutation& ref = result.refutation();
  relhyp::WorldAssignment branch;
  relhyp::Label l = relhyp::Label::root();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0) l = l.child(0);
    branch.push_back(l.str());
  }
  if (!frame_ok(ref.model, logic) || !relhyp::is_counterexample(ref.model, branch, h)) {
    std::cerr << "self-verification failed: produced model is not a counterexample on the right frame class\n";
    return kExitSelfCheck;
  }
  std::cout << "REFUTABLE\n";
  if (format == "dot")
    std::cout << relhyp::model_to_dot(ref.model);
  else if (format == "json")
    std::cout << relhyp::model_to_json(ref.model).dump(2) << "\n";
  else
    print_model_text(ref.model, std::cout);
  return kExitNegative;
}

int run_check(const std::string& path, const std::string& logic_name, bool allow_cut) {
  relhyp::LogicId logic;
  std::optional<relhyp::Derivation> d;
  try {
    logic = parse_logic(logic_name);
    d = relhyp::derivation_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  relhyp::CheckReport report = relhyp::check_derivation(*d, logic, allow_cut);
  if (report.valid) {
    std::cout << "VALID\n";
    return kExitPositive;
  }
  std::cout << "INVALID at [";
  for (std::size_t i = 0; i < report.path.size(); ++i) std::cout << (i ? "." : "") << report.path[i];
  std::cout << "]: " << report.reason << "\n";
  return kExitNegative;
}

int run_verify(const std::string& model_path, const InputOptions& input, const std::string& logic_name) {
  relhyp::LogicId logic;
  relhyp::Hypersequent h{std::vector<relhyp::Sequent>{relhyp::Sequent{}}};
  std::optional<relhyp::KripkeModel> m;
  try {
    logic = parse_logic(logic_name);
    h = relhyp::parse_hypersequent(input.resolve());
    m = relhyp::model_from_json(nlohmann::json::parse(read_file(model_path)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (!frame_ok(*m, logic)) {
    std::cout << "NOT A COUNTEREXAMPLE: model violates the frame class of " << relhyp::logic_name(logic) << "\n";
    return kExitNegative;
  }
  auto witness = relhyp::has_counterexample(*m, h);
  if (!witness) {
    std::cout << "NOT A COUNTEREXAMPLE: no branch of worlds falsifies every component\n";
    return kExitNegative;
  }
  std::cout << "COUNTEREXAMPLE at";
  for (const auto& w : *witness) std::cout << " " << w;
  std::cout << "\n";
  return kExitPositive;
}

int run_oracle(const InputOptions& input, const std::string& logic_name, const std::string& format, int max_worlds,
               int max_depth, int max_branch) {
  relhyp::LogicId logic;
  relhyp::Hypersequent h{std::vector<relhyp::Sequent>{relhyp::Sequent{}}};
  try {
    logic = parse_logic(logic_name);
    if (logic != relhyp::LogicId::K && logic != relhyp::LogicId::T && logic != relhyp::LogicId::D)
      throw std::runtime_error("oracle supports logics k, t and d");
    h = relhyp::parse_hypersequent(input.resolve());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  // Defaults wide enough for the tree models the decision procedure builds.
  int max_md = 0;
  for (const auto& s : h.components()) {
    for (const auto& f : s.antecedent()) max_md = std::max(max_md, relhyp::modal_depth(f));
    for (const auto& f : s.succedent()) max_md = std::max(max_md, relhyp::modal_depth(f));
  }
  relhyp::ModelBound bound;
  bound.max_depth = max_depth >= 0 ? max_depth : max_md + static_cast<int>(h.size());
  bound.max_branch = max_branch >= 0 ? max_branch : 3;
  bound.max_worlds = max_worlds >= 0 ? max_worlds : 6;

  try {
    auto found = relhyp::oracle_search(h, logic, bound);
    if (!found) {
      std::cout << "NO COUNTEREXAMPLE within bound (worlds<=" << bound.max_worlds << ", depth<=" << bound.max_depth
                << ", branch<=" << bound.max_branch << ")\n";
      return kExitNegative;
    }
    std::cout << "COUNTEREXAMPLE at";
    for (const auto& w : found->second) std::cout << " " << w;
    std::cout << "\n";
    if (format == "dot")
      std::cout << relhyp::model_to_dot(found->first);
    else if (format == "json")
      std::cout << relhyp::model_to_json(found->first).dump(2) << "\n";
    else
      print_model_text(found->first, std::cout);
    return kExitPositive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relational hypersequent prover, checker and model tools"};
  app.require_subcommand(1);

  std::string logic = "k";
  std::string format = "text";
  bool trace = false;
  bool allow_cut = false;
  InputOptions input;
  std::string file_path;
  int max_worlds = -1, max_depth = -1, max_branch = -1;

  auto add_logic = [&](CLI::App* cmd) {
    cmd->add_option("--logic", logic, "logic: k, t, d, b, s4, s5")->default_val("k");
  };
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("hypersequent", input.text, "hypersequent, e.g. \"[]~(p&q) => []~q ; p =>\"");
    cmd->add_option("--file", input.file, "read the hypersequent from a file");
  };

  CLI::App* prove = app.add_subcommand("prove", "decide a hypersequent (K, T, D)");
  add_logic(prove);
  add_input(prove);
  prove->add_option("--format", format, "output format: text, json, dot")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  prove->add_flag("--trace", trace, "stream reduction and successor steps to stderr");

  CLI::App* check = app.add_subcommand("check", "check a derivation file");
  add_logic(check);
  check->add_option("derivation", file_path, "derivation JSON file")->required();
  check->add_flag("--allow-cut", allow_cut, "admit the Cut rule");

  CLI::App* verify = app.add_subcommand("verify", "verify a model file against a hypersequent");
  add_logic(verify);
  std::string model_path;
  verify->add_option("model", model_path, "model JSON file")->required();
  add_input(verify);

  CLI::App* oracle = app.add_subcommand("oracle", "bounded brute-force countermodel search");
  add_logic(oracle);
  add_input(oracle);
  oracle->add_option("--format", format, "output format: text, json, dot")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  oracle->add_option("--max-worlds", max_worlds, "maximum number of worlds");
  oracle->add_option("--max-depth", max_depth, "maximum tree depth");
  oracle->add_option("--max-branch", max_branch, "maximum branching factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (prove->parsed()) return run_prove(input, logic, format, trace);
  if (check->parsed()) return run_check(file_path, logic, allow_cut);
  if (verify->parsed()) return run_verify(model_path, input, logic);
  if (oracle->parsed()) return run_oracle(input, logic, format, max_worlds, max_depth, max_branch);
  return kExitError;
}
