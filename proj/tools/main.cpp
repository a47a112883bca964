// Copyright 2026 The seqsteer Authors
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

// Command-line front end: certification of single points, parameter sweeps,
// steering weights, the circuit oracle and crossover searches.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqsteer/certifier.hpp"
#include "seqsteer/circuit.hpp"
#include "seqsteer/experiments.hpp"
#include "seqsteer/strategies.hpp"

namespace ex = seqsteer::experiments;
using nlohmann::json;

namespace {

constexpr int kExitRowFailed = 2;

struct Common {
  std::string config;
  std::string format = "csv";
  std::string out = "-";
  std::optional<double> alpha;
  std::optional<double> tol;
  bool relax = false;
  std::optional<int> workers;
};

struct PointFlags {
  std::optional<double> zeta;
  std::optional<double> epsilon;
  int purification_round = 0;
  int n_rounds = 1;
  double theta1 = 0.0;
  double phi2 = 0.0;
  double theta3 = 0.0;
  std::string y_star;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Output path, '-' for stdout");
  app->add_option("--alpha", c.alpha, "Scale of the explicit final-round functional");
  app->add_option("--tol", c.tol, "Solver tolerance");
  app->add_flag("--relax-violation", c.relax, "Impose each round's violation as an upper bound");
  app->add_option("--workers", c.workers, "Worker threads (0 = hardware parallelism)");
}

void add_point(CLI::App* app, PointFlags& p) {
  auto* z = app->add_option("--zeta", p.zeta, "Pure state cos(z)|00> + sin(z)|11>");
  auto* e = app->add_option("--epsilon", p.epsilon, "Ion-trap infidelity");
  z->excludes(e);
  app->add_option("--purification-round", p.purification_round, "Ion-trap purification round (0-3)");
  app->add_option("--n-rounds", p.n_rounds, "Measurement rounds (1-3)");
  app->add_option("--theta1", p.theta1, "Round-1 X angle");
  app->add_option("--phi2", p.phi2, "Round-2 Z angle");
  app->add_option("--theta3", p.theta3, "Round-3 X angle");
  app->add_option("--y-star", p.y_star, "Target input string, default 1, 10 or 101");
}

ex::StateSpec state_of(const PointFlags& p) {
  if (p.zeta) return ex::StateSpec::pure(*p.zeta);
  if (p.epsilon) return ex::StateSpec::ion_trap(*p.epsilon, p.purification_round);
  throw ex::ConfigError("give --zeta or --epsilon");
}

std::string default_y_star(int n) { return n == 1 ? "1" : n == 2 ? "10" : "101"; }

ex::ExperimentConfig config_of(const PointFlags& p) {
  ex::ExperimentConfig c;
  c.n_rounds = p.n_rounds;
  c.states = {state_of(p)};
  c.theta1 = {p.theta1};
  c.phi2 = {p.phi2};
  c.theta3 = p.theta3;
  c.y_stars = {seqsteer::BitString::parse(p.y_star.empty() ? default_y_star(p.n_rounds) : p.y_star)};
  return c;
}

ex::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ex::ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ex::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return ex::config_from_json(j);
}

void apply_common(const Common& c, ex::ExperimentConfig& cfg) {
  if (c.alpha) cfg.certify.alpha = *c.alpha;
  if (c.tol) cfg.certify.guessing.solver.tolerance = *c.tol;
  if (c.relax) cfg.certify.guessing.relax_violation = true;
  if (c.workers) cfg.workers = *c.workers;
  cfg.validate();
}

ex::Format format_of(const Common& c) { return c.format == "json" ? ex::Format::kJson : ex::Format::kCsv; }

int run_table(const ex::ExperimentConfig& cfg, const Common& c) {
  const auto table = ex::run_experiment(cfg);
  ex::emit(table, format_of(c), c.out);
  for (const auto& r : table)
    if (r.failed()) return kExitRowFailed;
  return 0;
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

int steering_weight_cmd(const PointFlags& p, const Common& c, int round) {
  auto cfg = config_of(p);
  apply_common(c, cfg);
  const auto point = cfg.grid().front();
  if (round < 1 || round > cfg.n_rounds) throw ex::ConfigError("--round must lie in [1, n_rounds]");
  const auto a = seqsteer::build_assemblage(point.state.build(), point.schedule(), round);
  const auto strategies = seqsteer::enumerate_strategies(round);
  json j;
  bool failed = false;
  try {
    const auto sw = seqsteer::steering_weight(a, strategies, cfg.certify.guessing.solver);
    double worst = 1e300;
    for (const auto& s : strategies) {
      seqsteer::ComplexMatrix sum = seqsteer::ComplexMatrix::Zero(2, 2);
      for (std::uint32_t y = 0; y < static_cast<std::uint32_t>(a.strings()); ++y)
        sum += sw.functional.at(s.response(y), y);
      worst = std::min(worst, seqsteer::min_eigenvalue(seqsteer::hermitian_part(sum)));
    }
    j = {{"round", round},
         {"steering_weight", sw.steering_weight},
         {"violation", sw.functional.violation},
         {"min_lhs_bound", worst},
         {"status", seqsteer::conic::to_string(sw.status)}};
  } catch (const seqsteer::SolverError& e) {
    failed = true;
    j = {{"round", round}, {"steering_weight", nullptr}, {"violation", nullptr},
         {"min_lhs_bound", nullptr}, {"status", "error"}};
    std::cerr << "steering-weight: " << e.what() << '\n';
  }
  if (c.format == "json") {
    write_text(j.dump(2) + "\n", c.out);
  } else {
    auto cell = [&](const char* k) { return j[k].is_null() ? std::string() : j[k].dump(); };
    write_text("round,steering_weight,violation,min_lhs_bound,status\n" + std::to_string(round) + "," +
                   cell("steering_weight") + "," + cell("violation") + "," + cell("min_lhs_bound") + "," +
                   j["status"].get<std::string>() + "\n",
               c.out);
  }
  return failed ? kExitRowFailed : 0;
}

int oracle_cmd(int cases, std::uint64_t seed, double tol, const Common& c) {
  const auto r = seqsteer::circuit::oracle_check(cases, seed);
  const bool ok = r.max_probability_deviation <= tol && r.max_state_deviation <= tol;
  const json j = {{"cases", r.cases},
                  {"seed", seed},
                  {"max_probability_deviation", r.max_probability_deviation},
                  {"max_state_deviation", r.max_state_deviation},
                  {"tolerance", tol},
                  {"status", ok ? "pass" : "fail"}};
  if (c.format == "json") {
    write_text(j.dump(2) + "\n", c.out);
  } else {
    write_text("cases,seed,max_probability_deviation,max_state_deviation,tolerance,status\n" +
                   std::to_string(r.cases) + "," + std::to_string(seed) + "," +
                   j["max_probability_deviation"].dump() + "," + j["max_state_deviation"].dump() + "," +
                   j["tolerance"].dump() + "," + (ok ? "pass" : "fail") + "\n",
               c.out);
  }
  return ok ? 0 : kExitRowFailed;
}

int crossover_cmd(int more_rounds, double lo, double hi, double width, int points, int round, const Common& c) {
  auto make = [&](int n) {
    ex::ExperimentConfig cfg;
    cfg.n_rounds = n;
    cfg.states = {ex::StateSpec::ion_trap(lo, round)};
    cfg.theta1 = ex::theta_grid(points);
    cfg.phi2 = {n == 3 ? 0.08 : 0.0};
    cfg.y_stars = {seqsteer::BitString::parse(default_y_star(n))};
    apply_common(c, cfg);
    return cfg;
  };
  const auto r = ex::find_crossover(make(more_rounds - 1), make(more_rounds), lo, hi, width);
  const json j = {{"rounds", more_rounds}, {"lo", r.lo}, {"hi", r.hi}, {"evaluations", r.evaluations}};
  if (c.format == "json") {
    write_text(j.dump(2) + "\n", c.out);
  } else {
    write_text("rounds,lo,hi,evaluations\n" + std::to_string(more_rounds) + "," + j["lo"].dump() + "," +
                   j["hi"].dump() + "," + std::to_string(r.evaluations) + "\n",
               c.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomness certification for sequential measurements on steered two-qubit states"};
  app.require_subcommand(1);

  Common certify_common, sweep_common, sw_common, oracle_common, cross_common;
  PointFlags certify_point, sw_point;

  auto* certify = app.add_subcommand("certify", "Certify one (state, schedule) point");
  add_common(certify, certify_common);
  add_point(certify, certify_point);

  std::string preset;
  bool list_presets = false;
  auto* sweep = app.add_subcommand("sweep", "Run a preset or config grid");
  add_common(sweep, sweep_common);
  sweep->add_option("--preset", preset, "Named preset");
  sweep->add_flag("--list-presets", list_presets, "Print preset names and exit");

  int sw_round = 1;
  auto* sw = app.add_subcommand("steering-weight", "Steering weight and optimal inequality of one round");
  add_common(sw, sw_common);
  add_point(sw, sw_point);
  sw->add_option("--round", sw_round, "Round whose assemblage is tested");

  int cases = 100;
  std::uint64_t seed = 1;
  double oracle_tol = 1e-10;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the circuit simulator with the Kraus model");
  oracle->add_option("--config", oracle_common.config, "Unused; accepted for uniformity");
  oracle->add_option("--format", oracle_common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  oracle->add_option("--out", oracle_common.out, "Output path, '-' for stdout");
  oracle->add_option("--tol", oracle_tol, "Largest acceptable deviation");
  oracle->add_option("--cases", cases, "Random cases");
  oracle->add_option("--seed", seed, "Random seed");

  int more_rounds = 2;
  double lo = 0.01, hi = 0.15, width = 5e-3;
  int points = ex::kDefaultThetaPoints;
  int cross_purification = 0;
  auto* cross = app.add_subcommand("crossover", "Bisect the infidelity where one more round stops helping");
  add_common(cross, cross_common);
  cross->add_option("--rounds", more_rounds, "Round count compared with one fewer (2 or 3)")
      ->check(CLI::IsMember({2, 3}));
  cross->add_option("--lo", lo, "Infidelity where the extra round helps");
  cross->add_option("--hi", hi, "Infidelity where it does not");
  cross->add_option("--width", width, "Final bracket width");
  cross->add_option("--points", points, "theta1 grid points");
  cross->add_option("--purification-round", cross_purification, "Ion-trap purification round");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*certify) {
      ex::ExperimentConfig cfg =
          certify_common.config.empty() ? config_of(certify_point) : load_config(certify_common.config);
      apply_common(certify_common, cfg);
      return run_table(cfg, certify_common);
    }
    if (*sweep) {
      if (list_presets) {
        for (const auto& n : ex::preset_names()) std::cout << n << '\n';
        return 0;
      }
      if (preset.empty() == sweep_common.config.empty())
        throw ex::ConfigError("sweep: give exactly one of --preset or --config");
      ex::ExperimentConfig cfg = preset.empty() ? load_config(sweep_common.config) : ex::preset(preset);
      apply_common(sweep_common, cfg);
      return run_table(cfg, sweep_common);
    }
    if (*sw) return steering_weight_cmd(sw_point, sw_common, sw_round);
    if (*oracle) return oracle_cmd(cases, seed, oracle_tol, oracle_common);
    if (*cross) {
      if (more_rounds == 3 && !cross->count("--width")) width = 2.5e-5;
      return crossover_cmd(more_rounds, lo, hi, width, points, cross_purification, cross_common);
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
