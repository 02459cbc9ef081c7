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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 1-4 drive the command-line tool on the bundled files;
// the rest use the library directly.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "ncpoly/io.hpp"
#include "test_support.hpp"

namespace {

using namespace ncpoly;
using testing::Q;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Cli {
  int code;
  io::Json doc;
};

std::string bundled(const std::string& rel) { return std::string(NCPOLY_SCENARIO_DIR) + "/" + rel; }

Cli run_cli(const std::string& args) {
  const std::string cmd = std::string(NCPOLY_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = ::pclose(pipe);
  Cli r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, {}};
  r.doc = io::Json::parse(out, nullptr, false);
  return r;
}

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

int failures = 0;

void report(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) require(o, false, "over the " + std::to_string(budget_s) + " s budget");
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::vector<std::string> findings;

std::string text(const LinRow& row, const Scenario& s) { return io::row_to_text(row, s); }

std::vector<RelabelingSpec> coin_generators(const Scenario& s) {
  return io::generators_from_json(io::read_json_file(bundled("coin/generators.json")), s);
}

}  // namespace

int main() {
  const Scenario pom = testing::pom_scenario();
  const Scenario coin = testing::coin_scenario();

  report(1, "vertices of the four-preparation scenario", 1.0, [&] {
    Outcome o;
    const Cli r = run_cli("vertices " + bundled("pom/scenario.json"));
    require(o, r.code == 0, "exit code " + std::to_string(r.code));
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& v : r.doc["vertices"]) got.insert({v[0].get<std::string>(), v[2].get<std::string>()});
    const std::set<std::pair<std::string, std::string>> expect{{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}};
    require(o, r.doc["vertices"].size() == 4 && got == expect, "vertex set differs");
    return o;
  });

  report(2, "four-preparation polytope facets and equalities", 10.0, [&] {
    Outcome o;
    const Cli r = run_cli("polytope " + bundled("pom/scenario.json"));
    require(o, r.code == 0, "exit code " + std::to_string(r.code));
    const NCPolytope poly = io::polytope_from_json(r.doc, pom);
    const EqualityBasis hull = hull_basis(poly);
    std::vector<LinRow> expect = testing::pom_reference_facets(pom);
    for (const auto& b : testing::bound_rows(pom)) expect.push_back(b);
    const std::set<LinRow> got(poly.facets.begin(), poly.facets.end());
    require(o, got == testing::canonical_set(expect, hull),
            "facet set differs (" + std::to_string(poly.facets.size()) + " facets)");
    const auto bounds = testing::canonical_set(testing::bound_rows(pom), hull);
    std::size_t nontrivial = 0;
    for (const auto& f : poly.facets) nontrivial += !bounds.count(f);
    require(o, nontrivial == 8, std::to_string(nontrivial) + " nontrivial facets");
    for (int i = 1; i <= 2; ++i) {
      const LinRow eq = testing::geq_row(pom, {{i, 1, 1, 1}, {i, 3, 1, -1}, {i, 4, 1, -1}, {i, 2, 1, 1}}, 0);
      const LinRow reduced = hull.reduce(eq);
      require(o, reduced.terms().empty() && reduced.constant().is_zero(), "equality for measurement " + std::to_string(i) + " missing");
    }
    findings.push_back("the facet printed as p23 + p14 - p21 - p22 <= 1 is invalid; the computed facet is "
                       "p23 + p14 - p12 - p22 <= 1");
    return o;
  });

  report(3, "certificate for the contextual table", 1.0, [&] {
    Outcome o;
    const Cli r = run_cli("check " + bundled("pom/scenario.json") + " " + bundled("pom/table_contextual.json"));
    require(o, r.code == 3, "exit code " + std::to_string(r.code));
    require(o, r.doc["result"] == "infeasible", "not infeasible");
    const LinRow row = io::row_from_json(r.doc["inequality"], pom, RowKind::kGeq);
    const NCPolytope poly = project_to_nc_polytope(testing::f2_of(pom));
    require(o, row == hull_basis(poly).canonical(testing::pom_reference_facets(pom).back()),
            "inequality is " + text(row, pom));
    require(o, r.doc["violation"] == "1", "violation " + r.doc["violation"].dump());
    return o;
  });

  report(4, "parity-oblivious multiplexing bound", 1.0, [&] {
    Outcome o;
    const Cli r = run_cli("optimize " + bundled("pom/scenario.json") + " " + bundled("pom/objective_success.json"));
    require(o, r.code == 0, "exit code " + std::to_string(r.code));
    require(o, r.doc["value"] == "3/4", "value " + r.doc["value"].dump());
    return o;
  });

  report(5, "vertices of the six-preparation scenario", 1.0, [&] {
    Outcome o;
    const VertexSet v = enumerate_vertices(build_measurement_H(coin));
    using T = std::vector<Q>;
    std::set<T> got;
    for (std::size_t k = 0; k < v.size(); ++k) got.insert(T{v.value(k, {1, 1}).raw(), v.value(k, {2, 1}).raw(), v.value(k, {3, 1}).raw()});
    const Q h(1, 2);
    const std::set<T> expect{{0, h, 1}, {h, 0, 1}, {1, 0, h}, {1, h, 0}, {0, 1, h}, {h, 1, 0}};
    require(o, v.size() == 6 && got == expect, std::to_string(v.size()) + " vertices");
    findings.push_back("the six-preparation vertices are described as four in the text but six are listed; "
                       "six is correct");
    return o;
  });

  const NCPolytope* coin_poly = nullptr;
  report(6, "six-preparation polytope", 1800.0, [&] {
    Outcome o;
    coin_poly = &testing::coin_polytope();
    const NCPolytope& poly = *coin_poly;
    require(o, poly.facets.size() == 1596, std::to_string(poly.facets.size()) + " facets");
    const EqualityBasis hull = hull_basis(poly);
    const LinRow trine = hull.canonical(testing::upper_bound(coin, {{{1, 1}, 2}, {{2, 3}, 2}, {{3, 5}, 2}}, 5));
    require(o, std::binary_search(poly.facets.begin(), poly.facets.end(), trine), "2(p11+p23+p35) <= 5 missing");

    const auto specs = coin_generators(coin);
    const RelabelingGroup group = generate_group(coin, specs);
    const auto classes = classify_equalities(coin, group, true);
    require(o, classes.size() == 3, std::to_string(classes.size()) + " equality classes");
    std::vector<LinRow> normalization;
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 6; ++j) {
        normalization.push_back(LinRow::eq(AffineExpr(
            {{testing::coord(coin, i, j, 1), Rational(1)}, {testing::coord(coin, i, j, 2), Rational(1)}}, Rational(-1))));
      }
    }
    const EqualityBasis norm(normalization, reduction_priority(coin));
    auto eq_row = [&](std::initializer_list<testing::Term> terms, Rational c) {
      return LinRow::eq(testing::geq_row(coin, terms, std::move(c)).expr());
    };
    auto class_of = [&](const LinRow& row, bool literal) -> int {
      const LinRow key = literal ? canonicalize_row(row) : norm.canonical(row);
      for (std::size_t k = 0; k < classes.size(); ++k) {
        if (std::binary_search(classes[k].members.begin(), classes[k].members.end(), key)) return static_cast<int>(k);
      }
      return -1;
    };
    const LinRow prep_eq = eq_row({{1, 1, 1, 1}, {1, 2, 1, 1}, {1, 3, 1, -1}, {1, 4, 1, -1}}, 0);
    const LinRow meas_eq = eq_row({{1, 1, 1, 1}, {2, 1, 1, 1}, {3, 1, 1, 1}}, Rational(-3, 2));
    const LinRow norm_eq = eq_row({{1, 1, 1, 1}, {1, 1, 2, 1}}, -1);
    const int a = class_of(prep_eq, false), b = class_of(meas_eq, false), c = class_of(norm_eq, true);
    require(o, a >= 0 && b >= 0 && c >= 0 && a != b && b != c && a != c, "equality classes do not match");
    for (const auto& row : {prep_eq, meas_eq, norm_eq}) {
      const LinRow reduced = hull.reduce(row);
      require(o, reduced.terms().empty() && reduced.constant().is_zero(), "equality not implied by the hull");
    }
    const LinRow printed = eq_row({{1, 1, 1, 1}, {1, 4, 1, 1}, {1, 2, 1, -1}, {1, 5, 1, -1}}, 0);
    const LinRow printed_reduced = hull.reduce(printed);
    if (!(printed_reduced.terms().empty() && printed_reduced.constant().is_zero())) {
      findings.push_back("the preparation-equivalence class is printed as p11 + p14 = p12 + p15, which is not implied "
                         "by the hull; p11 + p12 = p13 + p14 is, and represents the class of size " +
                         std::to_string(classes[static_cast<std::size_t>(a)].orbit_size));
    }
    const LinRow complement = testing::geq_row(
        coin, {{1, 1, 1, 1}, {2, 3, 1, 1}, {3, 5, 1, 1}, {1, 2, 2, -1}, {2, 4, 2, -1}, {3, 6, 2, -1}}, 0);
    const LinRow comp_reduced = hull.reduce(complement);
    require(o, comp_reduced.terms().empty() && comp_reduced.constant().is_zero(),
            "p11+p23+p35 = p-bar12+p-bar24+p-bar36 not implied");
    return o;
  });

  report(7, "six-preparation symmetry classes", 600.0, [&] {
    Outcome o;
    if (!coin_poly) coin_poly = &testing::coin_polytope();
    const NCPolytope& poly = *coin_poly;
    const auto specs = coin_generators(coin);
    const RelabelingGroup group = generate_group(coin, specs);
    require(o, group.order() == 576, "group order " + std::to_string(group.order()));
    const EqualityBasis hull = hull_basis(poly);
    const auto classes = classify_orbits(poly.facets, group, hull, true);
    require(o, classes.size() == 7, std::to_string(classes.size()) + " classes");
    std::set<std::size_t> hit;
    for (const auto& ref : testing::coin_reference_classes(coin)) {
      const LinRow key = hull.canonical(ref.row);
      std::size_t k = 0;
      while (k < classes.size() && !std::binary_search(classes[k].members.begin(), classes[k].members.end(), key)) ++k;
      if (k == classes.size()) {
        require(o, false, "no class contains " + text(ref.row, coin));
        continue;
      }
      hit.insert(k);
      if (ref.orbit_size == 35) {
        if (classes[k].orbit_size != 35) {
          findings.push_back("the class of p11 <= 1 has orbit size " + std::to_string(classes[k].orbit_size) +
                             ", listed as 35; the listed sizes sum to " + std::to_string(1596 - classes[k].orbit_size + 35) +
                             " rather than 1596, and 35 does not divide 576");
        }
      } else {
        require(o, classes[k].orbit_size == ref.orbit_size,
                text(ref.row, coin) + " has orbit " + std::to_string(classes[k].orbit_size));
      }
    }
    require(o, hit.size() == 7, "representatives share classes");
    const LinRow printed = testing::upper_bound(
        coin, {{{1, 1}, 1}, {{1, 4}, -1}, {{1, 5}, -2}, {{2, 2}, -2}, {{2, 3}, 2}, {{3, 5}, 2}}, 3);
    if (!std::binary_search(poly.facets.begin(), poly.facets.end(), hull.canonical(printed))) {
      findings.push_back("the class representative printed as p11 - p14 - 2p15 - 2p22 + 2p23 + 2p35 <= 3 is invalid; "
                         "replacing p14 by p13 gives a member of the remaining 576-element class");
    }
    return o;
  });

  report(8, "feasibility agrees with polytope membership", 1800.0, [&] {
    Outcome o;
    std::mt19937 rng(2026);
    int scenarios = 0, feasible = 0, infeasible = 0;
    for (int trial = 0; scenarios < 6 && trial < 200; ++trial) {
      const Scenario s = testing::random_scenario(rng);
      const F2System f2 = testing::f2_of(s);
      if (s.prep_equivalences.empty() && s.meas_equivalences.empty()) continue;
      ++scenarios;
      const NCPolytope poly = project_to_nc_polytope(f2);
      for (int k = 0; k < 100; ++k) {
        const DataTable t = *testing::random_table(rng, f2, k % 4 != 0);
        const bool verdict = is_feasible(check_table(f2, t));
        (verdict ? feasible : infeasible)++;
        require(o, verdict == poly.contains(t), "disagreement in scenario " + std::to_string(scenarios));
      }
    }
    require(o, scenarios >= 5, "only " + std::to_string(scenarios) + " scenarios");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(scenarios) + " scenarios, " +
                std::to_string(feasible) + " feasible, " + std::to_string(infeasible) + " infeasible";
    return o;
  });

  report(9, "projection equals the hull of the lifted vertices", 1800.0, [&] {
    Outcome o;
    std::mt19937 rng(9);
    int checked = 0;
    for (int trial = 0; checked < 30 && trial < 5000; ++trial) {
      const Scenario s = testing::random_scenario(rng, 3, 3);
      const F2System f2 = testing::f2_of(s);
      if (f2.num_nu() + f2.num_p() > 10) continue;
      ++checked;
      std::vector<LinRow> eqs, geqs;
      for (const auto& row : f2.system.rows()) (row.is_eq() ? eqs : geqs).push_back(row);
      std::vector<std::vector<Q>> points;
      for (const auto& v : testing::brute_force_vertices(f2.system.num_variables(), eqs, geqs)) {
        points.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(f2.num_nu()), v.end());
      }
      const NCPolytope poly = project_to_nc_polytope(f2);
      const EqualityBasis hull = hull_basis(poly);
      const EqualityBasis oracle_hull(testing::affine_hull_rows(points, f2.num_p()), reduction_priority(s));
      require(o, oracle_hull.rows() == poly.equalities, "equalities differ in trial " + std::to_string(trial));
      std::set<LinRow> expect;
      for (const auto& row : testing::brute_force_hull(points, testing::spanning_columns(points))) {
        const LinRow r = hull.canonical(row);
        if (!r.terms().empty()) expect.insert(r);
      }
      require(o, expect == std::set<LinRow>(poly.facets.begin(), poly.facets.end()),
              "facets differ in trial " + std::to_string(trial));
    }
    require(o, checked >= 30, "only " + std::to_string(checked) + " scenarios");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checked) + " scenarios";
    return o;
  });

  report(10, "certificates and models verify exactly", 1800.0, [&] {
    Outcome o;
    std::mt19937 rng(10);
    int tables = 0, certificates = 0, models = 0;
    while (tables < 1000) {
      const Scenario s = testing::random_scenario(rng);
      const F2System f2 = testing::f2_of(s);
      for (int k = 0; k < 50; ++k, ++tables) {
        const DataTable t = *testing::random_table(rng, f2, k % 3 != 0);
        const NumericF2 n = bind_table(f2, t);
        const Verdict v = check_table(f2, t);
        if (const auto* ok = std::get_if<Feasible>(&v)) {
          ++models;
          bool exact = ok->model.size() == n.matrix.cols();
          for (const auto& x : ok->model) exact = exact && x.sign() >= 0;
          for (std::size_t r = 0; exact && r < n.matrix.rows(); ++r) {
            Q lhs = 0;
            for (std::size_t c = 0; c < n.matrix.cols(); ++c) lhs += n.matrix(r, c).raw() * ok->model[c].raw();
            exact = lhs == n.rhs[r].raw();
          }
          require(o, exact, "model fails M x = b*");
        } else {
          ++certificates;
          const auto& cert = std::get<Infeasible>(v).certificate;
          bool valid = cert.y.size() == n.matrix.rows();
          for (std::size_t c = 0; valid && c < n.matrix.cols(); ++c) {
            Q v2 = 0;
            for (std::size_t r = 0; r < n.matrix.rows(); ++r) v2 += cert.y[r].raw() * n.matrix(r, c).raw();
            valid = v2 >= 0 && v2 <= 1;
          }
          Q value = 0;
          for (std::size_t r = 0; valid && r < n.rhs.size(); ++r) value += cert.y[r].raw() * n.rhs[r].raw();
          require(o, valid && value < 0, "certificate fails 0 <= yM <= 1, y.b* < 0");
        }
      }
    }
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(tables) + " tables, " + std::to_string(models) +
                " models, " + std::to_string(certificates) + " certificates";
    return o;
  });

  for (const auto& f : findings) std::printf("finding: %s\n", f.c_str());
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
