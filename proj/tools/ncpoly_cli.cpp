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

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ncpoly/io.hpp"
#include "ncpoly/ncpoly.hpp"

namespace {

using ncpoly::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitLimit = 2;
constexpr int kExitContextual = 3;

struct Config {
  std::string scenario;
  std::string table;
  std::string objective;
  std::string polytope;
  std::string generators;
  std::string output;
  unsigned jobs = 1;
  bool verbose = false;
};

void emit(const Config& cfg, const Json& doc) {
  const std::string text = ncpoly::io::dump(doc);
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw ncpoly::Error(ncpoly::ErrorCode::kParse, "cannot write " + cfg.output);
  out << text;
}

ncpoly::Scenario load_scenario(const Config& cfg) {
  return ncpoly::io::scenario_from_json(ncpoly::io::read_json_file(cfg.scenario));
}

ncpoly::VertexSet vertices_of(const ncpoly::Scenario& s) {
  return ncpoly::enumerate_vertices(ncpoly::build_measurement_H(s));
}

int run_vertices(const Config& cfg) {
  const auto s = load_scenario(cfg);
  emit(cfg, ncpoly::io::vertices_to_json(vertices_of(s)));
  return kExitOk;
}

int run_polytope(const Config& cfg) {
  const auto s = load_scenario(cfg);
  const auto f2 = ncpoly::build_f2(s, vertices_of(s));
  ncpoly::ProjectionOptions options;
  options.jobs = cfg.jobs;
  if (cfg.verbose) options.log = [](const std::string& line) { std::cerr << line << "\n"; };
  emit(cfg, ncpoly::io::polytope_to_json(ncpoly::project_to_nc_polytope(f2, options)));
  return kExitOk;
}

int run_check(const Config& cfg) {
  const auto s = load_scenario(cfg);
  const auto table = ncpoly::io::table_from_json(ncpoly::io::read_json_file(cfg.table), s);
  const auto f2 = ncpoly::build_f2(s, vertices_of(s));
  const auto verdict = ncpoly::check_table(f2, table);
  emit(cfg, ncpoly::io::verdict_to_json(f2, verdict));
  return ncpoly::is_feasible(verdict) ? kExitOk : kExitContextual;
}

int run_optimize(const Config& cfg) {
  const auto s = load_scenario(cfg);
  const auto objective = ncpoly::io::objective_from_json(ncpoly::io::read_json_file(cfg.objective), s);
  const auto f2 = ncpoly::build_f2(s, vertices_of(s));
  const auto opt = ncpoly::optimize(f2, objective.expr, objective.sense);
  emit(cfg, ncpoly::io::optimum_to_json(f2, objective, opt));
  return kExitOk;
}

int run_orbits(const Config& cfg) {
  const auto s = load_scenario(cfg);
  const auto poly = ncpoly::io::polytope_from_json(ncpoly::io::read_json_file(cfg.polytope), s);
  const auto specs = ncpoly::io::generators_from_json(ncpoly::io::read_json_file(cfg.generators), s);
  const auto group = ncpoly::generate_group(s, specs);
  const auto basis = ncpoly::hull_basis(poly);
  Json doc = ncpoly::io::header("orbits");
  doc["group_order"] = group.order();
  doc["facet_count"] = poly.facets.size();
  doc["classes"] = ncpoly::io::classes_to_json(ncpoly::classify_orbits(poly.facets, group, basis), s);
  doc["equality_classes"] = ncpoly::io::classes_to_json(ncpoly::classify_equalities(s, group), s);
  emit(cfg, doc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact generalized-noncontextual polytopes and infeasibility certificates"};
  app.set_version_flag("--version", std::string(ncpoly::kVersion));
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--output,-o", cfg.output, "Write the result document to PATH instead of stdout");
  app.add_option("--jobs,-j", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", cfg.verbose, "Progress on stderr");

  auto* vertices = app.add_subcommand("vertices", "Vertices of the noncontextual measurement-assignment polytope");
  vertices->add_option("scenario", cfg.scenario)->required()->check(CLI::ExistingFile);

  auto* polytope = app.add_subcommand("polytope", "Equalities and facets of the noncontextual polytope");
  polytope->add_option("scenario", cfg.scenario)->required()->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "Decide whether a data table admits a noncontextual model");
  check->add_option("scenario", cfg.scenario)->required()->check(CLI::ExistingFile);
  check->add_option("table", cfg.table)->required()->check(CLI::ExistingFile);

  auto* optimize = app.add_subcommand("optimize", "Optimize a linear objective over noncontextual tables");
  optimize->add_option("scenario", cfg.scenario)->required()->check(CLI::ExistingFile);
  optimize->add_option("objective", cfg.objective)->required()->check(CLI::ExistingFile);

  auto* orbits = app.add_subcommand("orbits", "Classify facets and equalities under a relabeling group");
  orbits->add_option("scenario", cfg.scenario)->required()->check(CLI::ExistingFile);
  orbits->add_option("polytope", cfg.polytope)->required()->check(CLI::ExistingFile);
  orbits->add_option("generators", cfg.generators)->required()->check(CLI::ExistingFile);

  for (auto* sub : {vertices, polytope, check, optimize, orbits}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*vertices) return run_vertices(cfg);
    if (*polytope) return run_polytope(cfg);
    if (*check) return run_check(cfg);
    if (*optimize) return run_optimize(cfg);
    return run_orbits(cfg);
  } catch (const ncpoly::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ncpoly::ErrorCode::kGroupTooLarge ? kExitLimit : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
