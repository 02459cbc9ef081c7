// Copyright 2026 The ncpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ncpoly/errors.hpp"
#include "ncpoly/feasibility.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/measurement_polytope.hpp"
#include "ncpoly/projection.hpp"
#include "ncpoly/rational.hpp"
#include "ncpoly/scenario.hpp"
#include "ncpoly/symmetry.hpp"
#include "ncpoly/version.hpp"

namespace ncpoly::io {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

namespace detail {

[[noreturn]] inline void fail(const std::string& message) { throw Error(ErrorCode::kParse, message); }

inline const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing key \"") + key + "\"");
  return obj.at(key);
}

inline const Json& array_of(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  return j;
}

inline int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace detail

/// "a/b" strings or JSON integers.
inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error&) {
      detail::fail("\"" + j.get<std::string>() + "\" is not a rational number");
    }
  }
  detail::fail("expected a rational as \"a/b\" or an integer, got " + j.dump());
}

inline Json to_json(const Rational& r) { return r.to_string(); }

// ---- scenario -------------------------------------------------------------

inline Scenario scenario_from_json(const Json& doc) {
  Scenario s;
  s.preparations = detail::integer(detail::member(doc, "preparations"), "preparations");
  s.measurements = detail::integer(detail::member(doc, "measurements"), "measurements");
  s.outcomes = detail::integer(detail::member(doc, "outcomes"), "outcomes");
  if (doc.contains("prep_equivalences")) {
    for (const auto& eq : detail::array_of(doc.at("prep_equivalences"), "prep_equivalences")) {
      PrepEquivalence pe;
      auto side = [&](const char* key, std::map<int, Rational>& out) {
        for (const auto& term : detail::array_of(detail::member(eq, key), key)) {
          if (!term.is_array() || term.size() != 2) detail::fail("preparation term must be [j, weight]");
          const int j = detail::integer(term[0], "preparation index");
          if (out.count(j)) detail::fail("preparation " + std::to_string(j) + " listed twice on one side");
          out.emplace(j, rational_from_json(term[1]));
        }
      };
      side("lhs", pe.lhs);
      side("rhs", pe.rhs);
      s.prep_equivalences.push_back(std::move(pe));
    }
  }
  if (doc.contains("meas_equivalences")) {
    for (const auto& eq : detail::array_of(doc.at("meas_equivalences"), "meas_equivalences")) {
      MeasEquivalence me;
      auto side = [&](const char* key, std::map<Effect, Rational>& out) {
        for (const auto& term : detail::array_of(detail::member(eq, key), key)) {
          if (!term.is_array() || term.size() != 3) detail::fail("effect term must be [i, m, weight]");
          const Effect e{detail::integer(term[0], "measurement index"), detail::integer(term[1], "outcome index")};
          if (out.count(e)) detail::fail("effect listed twice on one side");
          out.emplace(e, rational_from_json(term[2]));
        }
      };
      side("lhs", me.lhs);
      side("rhs", me.rhs);
      s.meas_equivalences.push_back(std::move(me));
    }
  }
  if (doc.contains("outcome_counts")) {
    std::vector<int> counts;
    for (const auto& c : detail::array_of(doc.at("outcome_counts"), "outcome_counts")) {
      counts.push_back(detail::integer(c, "outcome count"));
    }
    validate_scenario(s);
    return pad_outcomes(std::move(s), std::move(counts));
  }
  return validate_scenario(std::move(s));
}

inline Json scenario_to_json(const Scenario& s) {
  Json doc;
  doc["preparations"] = s.preparations;
  doc["measurements"] = s.measurements;
  doc["outcomes"] = s.outcomes;
  Json preps = Json::array();
  for (const auto& eq : s.prep_equivalences) {
    auto side = [](const std::map<int, Rational>& terms) {
      Json out = Json::array();
      for (const auto& [j, w] : terms) out.push_back(Json::array({j, to_json(w)}));
      return out;
    };
    preps.push_back(Json{{"lhs", side(eq.lhs)}, {"rhs", side(eq.rhs)}});
  }
  doc["prep_equivalences"] = std::move(preps);
  Json meas = Json::array();
  for (const auto& eq : s.meas_equivalences) {
    auto side = [](const std::map<Effect, Rational>& terms) {
      Json out = Json::array();
      for (const auto& [e, w] : terms) out.push_back(Json::array({e.i, e.m, to_json(w)}));
      return out;
    };
    meas.push_back(Json{{"lhs", side(eq.lhs)}, {"rhs", side(eq.rhs)}});
  }
  doc["meas_equivalences"] = std::move(meas);
  if (!s.true_outcomes.empty()) doc["outcome_counts"] = s.true_outcomes;
  return doc;
}

// ---- data tables ------------------------------------------------------------

/// {"probabilities": [[i, j, m, "a/b"], ...]}; unlisted entries are 0.
inline DataTable table_from_json(const Json& doc, const Scenario& s) {
  DataTable table = DataTable::for_scenario(s);
  std::set<std::size_t> seen;
  for (const auto& entry : detail::array_of(detail::member(doc, "probabilities"), "probabilities")) {
    if (!entry.is_array() || entry.size() != 4) detail::fail("table entry must be [i, j, m, probability]");
    const Coord c{detail::integer(entry[0], "measurement index"), detail::integer(entry[1], "preparation index"),
                  detail::integer(entry[2], "outcome index")};
    if (!s.coord_in_range(c)) {
      throw Error(ErrorCode::kIndexOutOfRange, "table entry " + entry.dump() + " is outside the scenario");
    }
    if (!seen.insert(s.flatten(c)).second) {
      throw Error(ErrorCode::kMalformedTable, "table entry " + entry.dump() + " is listed twice");
    }
    table.set(c, rational_from_json(entry[3]));
  }
  return table;
}

inline Json table_entries(const DataTable& t) {
  Json out = Json::array();
  for (int i = 1; i <= t.measurements(); ++i) {
    for (int j = 1; j <= t.preparations(); ++j) {
      for (int m = 1; m <= t.outcomes(); ++m) out.push_back(Json::array({i, j, m, to_json(t.at({i, j, m}))}));
    }
  }
  return out;
}

inline Json table_to_json(const DataTable& t) { return Json{{"probabilities", table_entries(t)}}; }

// ---- rows -----------------------------------------------------------------

/// {"constant": "a/b", "terms": [[i, j, m, "a/b"], ...]} over table
/// coordinates.
inline AffineExpr expr_from_json(const Json& doc, const Scenario& s) {
  AffineExpr expr(doc.contains("constant") ? rational_from_json(doc.at("constant")) : Rational(0));
  for (const auto& term : detail::array_of(detail::member(doc, "terms"), "terms")) {
    if (!term.is_array() || term.size() != 4) detail::fail("row term must be [i, j, m, coefficient]");
    const Coord c{detail::integer(term[0], "measurement index"), detail::integer(term[1], "preparation index"),
                  detail::integer(term[2], "outcome index")};
    if (!s.coord_in_range(c)) throw Error(ErrorCode::kIndexOutOfRange, "row term " + term.dump() + " is outside the scenario");
    expr.add_term(VarId{static_cast<std::uint32_t>(s.flatten(c))}, rational_from_json(term[3]));
  }
  return expr;
}

inline LinRow row_from_json(const Json& doc, const Scenario& s, RowKind kind) {
  return LinRow(kind, expr_from_json(doc, s));
}

inline Json row_to_json(const LinRow& row, const Scenario& s) {
  Json terms = Json::array();
  for (const auto& [var, coeff] : row.terms()) {
    const Coord c = s.unflatten(var.value);
    terms.push_back(Json::array({c.i, c.j, c.m, to_json(coeff)}));
  }
  return Json{{"constant", to_json(row.constant())}, {"terms", std::move(terms)}};
}

/// Human-readable "p(m|i,j)" form, e.g. "-p(1|1,2) + 1 >= 0".
inline std::string row_to_text(const LinRow& row, const Scenario& s) {
  return to_string(row, [&](VarId v) {
    const Coord c = s.unflatten(v.value);
    return "p(" + std::to_string(c.m) + "|" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
  });
}

// ---- documents ----------------------------------------------------------------

inline Json header(const char* kind) {
  Json doc;
  doc["version"] = std::string(kVersion);
  doc["kind"] = kind;
  return doc;
}

inline Json vertices_to_json(const VertexSet& v) {
  Json doc = header("vertices");
  Json effects = Json::array();
  for (int i = 1; i <= v.measurements; ++i) {
    for (int m = 1; m <= v.outcomes; ++m) effects.push_back(Json::array({i, m}));
  }
  doc["effects"] = std::move(effects);
  Json list = Json::array();
  for (const auto& vertex : v.vertices) {
    Json row = Json::array();
    for (const auto& x : vertex) row.push_back(to_json(x));
    list.push_back(std::move(row));
  }
  doc["vertices"] = std::move(list);
  return doc;
}

inline VertexSet vertices_from_json(const Json& doc, const Scenario& s) {
  VertexSet out;
  out.measurements = s.measurements;
  out.outcomes = s.outcomes;
  for (const auto& vertex : detail::array_of(detail::member(doc, "vertices"), "vertices")) {
    if (!vertex.is_array() || vertex.size() != s.num_effects()) {
      throw Error(ErrorCode::kDimensionMismatch, "vertex has the wrong number of components");
    }
    Vector v;
    for (const auto& x : vertex) v.push_back(rational_from_json(x));
    out.vertices.push_back(std::move(v));
  }
  return out;
}

inline Json polytope_to_json(const NCPolytope& poly) {
  Json doc = header("polytope");
  doc["scenario"] = scenario_to_json(poly.scenario);
  Json eqs = Json::array();
  for (const auto& row : poly.equalities) eqs.push_back(row_to_json(row, poly.scenario));
  Json facets = Json::array();
  for (const auto& row : poly.facets) facets.push_back(row_to_json(row, poly.scenario));
  doc["equalities"] = std::move(eqs);
  doc["facets"] = std::move(facets);
  return doc;
}

inline NCPolytope polytope_from_json(const Json& doc, const Scenario& s) {
  NCPolytope poly;
  poly.scenario = s;
  for (const auto& row : detail::array_of(detail::member(doc, "equalities"), "equalities")) {
    poly.equalities.push_back(row_from_json(row, s, RowKind::kEq));
  }
  for (const auto& row : detail::array_of(detail::member(doc, "facets"), "facets")) {
    poly.facets.push_back(row_from_json(row, s, RowKind::kGeq));
  }
  return poly;
}

inline Json model_to_json(const F2System& f2, const Vector& nu) {
  Json out = Json::array();
  for (int j = 1; j <= f2.scenario.preparations; ++j) {
    Json weights = Json::array();
    for (std::size_t k = 1; k <= f2.num_vertices(); ++k) weights.push_back(to_json(nu[f2.nu(j, k).value]));
    out.push_back(Json{{"preparation", j}, {"weights", std::move(weights)}});
  }
  return out;
}

inline Json verdict_to_json(const F2System& f2, const Verdict& verdict) {
  Json doc = header("check");
  if (const auto* ok = std::get_if<Feasible>(&verdict)) {
    doc["result"] = "feasible";
    doc["model"] = model_to_json(f2, ok->model);
    return doc;
  }
  const auto& bad = std::get<Infeasible>(verdict);
  doc["result"] = "infeasible";
  Json y = Json::array();
  for (const auto& v : bad.certificate.y) y.push_back(to_json(v));
  doc["y"] = std::move(y);
  doc["value"] = to_json(bad.certificate.value);
  doc["inequality"] = row_to_json(bad.inequality, f2.scenario);
  doc["inequality_text"] = row_to_text(bad.inequality, f2.scenario);
  doc["violation"] = to_json(bad.violation);
  return doc;
}

struct Objective {
  Sense sense = Sense::kMax;
  AffineExpr expr;
};

/// {"sense": "max"|"min", "constant": "a/b", "terms": [[i, j, m, "a/b"], ...]}
inline Objective objective_from_json(const Json& doc, const Scenario& s) {
  Objective obj;
  if (doc.contains("sense")) {
    const Json& sense = doc.at("sense");
    if (sense == "max") obj.sense = Sense::kMax;
    else if (sense == "min") obj.sense = Sense::kMin;
    else detail::fail("sense must be \"max\" or \"min\"");
  }
  obj.expr = expr_from_json(doc, s);
  return obj;
}

inline Json optimum_to_json(const F2System& f2, const Objective& obj, const Optimum& opt) {
  Json doc = header("optimize");
  doc["sense"] = obj.sense == Sense::kMax ? "max" : "min";
  doc["value"] = to_json(opt.value);
  doc["witness_table"] = table_entries(opt.table);
  doc["model"] = model_to_json(f2, opt.model);
  return doc;
}

/// [{"type": "swap_measurements"|"swap_preparations"|"flip_outcomes",
///   "args": [...]}]. Swaps take [a, b] or [[a1, a2, ...], [b1, b2, ...]].
inline std::vector<RelabelingSpec> generators_from_json(const Json& doc, const Scenario& s) {
  const Json& list = doc.is_object() ? detail::member(doc, "generators") : doc;
  std::vector<RelabelingSpec> out;
  for (const auto& gen : detail::array_of(list, "generators")) {
    const Json& type = detail::member(gen, "type");
    const Json& args = detail::array_of(detail::member(gen, "args"), "args");
    auto ints = [](const Json& arr) {
      std::vector<int> v;
      for (const auto& x : detail::array_of(arr, "args")) v.push_back(detail::integer(x, "generator argument"));
      return v;
    };
    if (type == "flip_outcomes") {
      const auto list_i = ints(args);
      out.push_back(flip_outcomes(s, list_i));
      continue;
    }
    std::vector<int> a, b;
    if (args.size() == 2 && args[0].is_array() && args[1].is_array()) {
      a = ints(args[0]);
      b = ints(args[1]);
    } else if (args.size() == 2) {
      a = {detail::integer(args[0], "generator argument")};
      b = {detail::integer(args[1], "generator argument")};
    } else {
      detail::fail("swap generators take [a, b] or [[a...], [b...]]");
    }
    if (type == "swap_measurements") out.push_back(swap_measurements(s, a, b));
    else if (type == "swap_preparations") out.push_back(swap_preparations(s, a, b));
    else detail::fail("unknown generator type " + type.dump());
  }
  return out;
}

inline Json classes_to_json(const std::vector<OrbitClass>& classes, const Scenario& s) {
  Json out = Json::array();
  for (const auto& c : classes) {
    out.push_back(Json{{"representative", row_to_json(c.representative, s)},
                       {"representative_text", row_to_text(c.representative, s)},
                       {"orbit_size", c.orbit_size}});
  }
  return out;
}

}  // namespace ncpoly::io
