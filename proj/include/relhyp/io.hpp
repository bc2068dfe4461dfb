#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "relhyp/calculus.hpp"
#include "relhyp/parse.hpp"
#include "relhyp/semantics.hpp"

namespace relhyp {

struct FileFormatError : std::runtime_error {
  explicit FileFormatError(const std::string& why) : std::runtime_error("malformed input: " + why) {}
};

// --- Kripke model files ----------------------------------------------------
//
// { "worlds": ["0", "0.1"], "edges": [["0", "0.1"]], "valuation": {"p": ["0.1"]} }

inline nlohmann::json model_to_json(const KripkeModel& m) {
  nlohmann::json j;
  j["worlds"] = m.worlds;
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : m.edges) j["edges"].push_back({a, b});
  j["valuation"] = nlohmann::json::object();
  for (const auto& [atom, worlds] : m.valuation) j["valuation"][atom] = worlds;
  return j;
}

inline KripkeModel model_from_json(const nlohmann::json& j) {
  KripkeModel m;
  if (!j.is_object() || !j.contains("worlds") || !j["worlds"].is_array())
    throw FileFormatError("model needs a 'worlds' array");
  for (const auto& w : j["worlds"]) {
    if (!w.is_string()) throw FileFormatError("worlds must be strings");
    if (m.has_world(w.get<std::string>())) throw FileFormatError("duplicate world: " + w.get<std::string>());
    m.worlds.push_back(w.get<std::string>());
  }
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw FileFormatError("'edges' must be an array of pairs");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw FileFormatError("each edge must be a [from, to] pair of strings");
      std::string a = e[0], b = e[1];
      if (!m.has_world(a)) throw FileFormatError("edge endpoint is not a world: " + a);
      if (!m.has_world(b)) throw FileFormatError("edge endpoint is not a world: " + b);
      m.edges.insert({std::move(a), std::move(b)});
    }
  }
  if (j.contains("valuation")) {
    if (!j["valuation"].is_object()) throw FileFormatError("'valuation' must map atoms to world arrays");
    for (const auto& [atom, worlds] : j["valuation"].items()) {
      if (!Formula::valid_atom_name(atom)) throw FileFormatError("invalid atom name: " + atom);
      if (!worlds.is_array()) throw FileFormatError("valuation of " + atom + " must be an array");
      for (const auto& w : worlds) {
        if (!w.is_string() || !m.has_world(w.get<std::string>()))
          throw FileFormatError("valuation of " + atom + " names an unknown world");
        m.valuation[atom].insert(w.get<std::string>());
      }
    }
  }
  return m;
}

inline std::string model_to_dot(const KripkeModel& m) {
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  std::string out = "digraph model {\n  rankdir=LR;\n";
  for (const auto& w : m.worlds) {
    std::string atoms;
    for (const auto& [atom, worlds] : m.valuation)
      if (worlds.contains(w)) {
        if (!atoms.empty()) atoms += ", ";
        atoms += atom;
      }
    out += "  " + quote(w) + " [label=" + quote(w + "\\n{" + atoms + "}") + "];\n";
  }
  for (const auto& [a, b] : m.edges) out += "  " + quote(a) + " -> " + quote(b) + ";\n";
  out += "}\n";
  return out;
}

// --- Derivation files -------------------------------------------------------
//
// { "rule": "AndR", "conclusion": "p => q & r", "position": {"component": 0,
//   "formula": 0}, "premises": [ ... ] }
//
// Conclusions are stored in the hypersequent text form and re-parsed on load.

inline nlohmann::json derivation_to_json(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = rule_name(d.rule);
  j["conclusion"] = to_string(d.conclusion);
  j["position"] = {{"component", d.position.component}, {"formula", d.position.formula}};
  j["premises"] = nlohmann::json::array();
  for (const Derivation& p : d.premises) j["premises"].push_back(derivation_to_json(p));
  return j;
}

inline Derivation derivation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FileFormatError("derivation node must be an object");
  if (!j.contains("rule") || !j["rule"].is_string()) throw FileFormatError("derivation node needs a 'rule' string");
  auto rule = rule_from_name(j["rule"].get<std::string>());
  if (!rule) throw FileFormatError("unknown rule: " + j["rule"].get<std::string>());
  if (!j.contains("conclusion") || !j["conclusion"].is_string())
    throw FileFormatError("derivation node needs a 'conclusion' string");

  Position pos;
  if (j.contains("position")) {
    if (!j["position"].is_object()) throw FileFormatError("'position' must be an object");
    pos.component = j["position"].value("component", 0);
    pos.formula = j["position"].value("formula", -1);
  }

  std::vector<Derivation> premises;
  if (j.contains("premises")) {
    if (!j["premises"].is_array()) throw FileFormatError("'premises' must be an array");
    for (const auto& p : j["premises"]) premises.push_back(derivation_from_json(p));
  }

  try {
    return Derivation{*rule, parse_hypersequent(j["conclusion"].get<std::string>()), pos, std::move(premises)};
  } catch (const SyntaxError& e) {
    throw FileFormatError("bad conclusion '" + j["conclusion"].get<std::string>() + "': " + e.what());
  }
}

}  // namespace relhyp
