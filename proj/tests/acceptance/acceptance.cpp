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

// Acceptance checks. Each criterion prints one PASS or FAIL line with the
// measured values; the exit status is nonzero if any criterion fails.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "../common/lhs_oracle.hpp"
#include "seqsteer/certifier.hpp"
#include "seqsteer/circuit.hpp"
#include "seqsteer/experiments.hpp"
#include "seqsteer/strategies.hpp"

using namespace seqsteer;
namespace ex = seqsteer::experiments;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

ex::ExperimentConfig sweep(int n, ex::StateSpec state, const char* y_star, double phi2 = 0.0) {
  ex::ExperimentConfig c;
  c.n_rounds = n;
  c.states = {state};
  c.theta1 = ex::theta_grid();
  c.phi2 = {phi2};
  c.y_stars = {BitString::parse(y_star)};
  return c;
}

Verdict one_round_maximal_point() {
  const auto r = certify(pure_state(kPi4), MeasurementSchedule({0.0}, {0.0}, BitString::parse("1")));
  const bool ok = std::abs(r.guessing_probability - 0.5) <= 5e-4 && std::abs(r.min_entropy_bits - 1.0) <= 1.5e-3;
  return {ok, fmt("P_G=%.6f", r.guessing_probability) + fmt(" H_min=%.6f", r.min_entropy_bits)};
}

Verdict product_state_null() {
  const auto t = ex::run_experiment(sweep(1, ex::StateSpec::pure(0.0), "1"));
  double worst = 0.0;
  bool failed = false;
  for (const auto& r : t) {
    failed = failed || r.failed() || !r.h_min;
    if (r.h_min) worst = std::max(worst, *r.h_min);
  }
  return {!failed && worst <= 1e-5, fmt("max H_min=%.3e over 60 points", worst) + (failed ? ", failed rows" : "")};
}

Verdict trivial_measurement_null() {
  const auto state = pure_state(kPi4);
  const MeasurementSchedule s({kPi4}, {0.0}, BitString::parse("1"));
  const auto sw = steering_weight(build_assemblage(state, s, 1), enumerate_strategies(1));
  const auto r = certify(state, s);
  const bool ok = sw.steering_weight <= 1e-6 && r.guessing_probability >= 1 - 1e-4;
  return {ok, fmt("SW=%.3e", sw.steering_weight) + fmt(" P_G=%.8f", r.guessing_probability)};
}

Verdict steering_weight_oracle() {
  const auto a = build_assemblage(pure_state(kPi4), MeasurementSchedule({0.0}, {0.0}, BitString::parse("1")), 1);
  const auto sw = steering_weight(a, enumerate_strategies(1));
  const double primal = testing::brute_force_steering_weight(a);
  const double target = 1.0 - 1.0 / std::sqrt(2.0);
  const bool value_ok = std::abs(sw.steering_weight - target) <= 1e-5;
  const bool agree = std::abs(primal - sw.steering_weight) <= 1e-4;
  return {value_ok && agree, fmt("dual SW=%.8f primal SW=%.8f", sw.steering_weight, primal) +
                                 fmt(" expected %.8f", target) + (agree ? ", primal and dual agree" : "")};
}

Verdict circuit_equivalence() {
  const auto r = circuit::oracle_check(100, 2026);
  const bool ok = r.max_probability_deviation <= 1e-10 && r.max_state_deviation <= 1e-10;
  return {ok, fmt("max |dp|=%.2e max |dstate|=%.2e", r.max_probability_deviation, r.max_state_deviation)};
}

Verdict dual_feasibility() {
  std::vector<Assemblage> cases;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kPi4);
  for (int i = 0; i < 12; ++i) {
    const int k = 1 + i % 2;
    const auto state = i % 3 == 0   ? pure_state(angle(rng))
                       : i % 3 == 1 ? ion_trap_state(0.15 * angle(rng) / kPi4, i % 4)
                                    : ion_trap_state(0.0, 0);
    std::vector<double> th{angle(rng), angle(rng)}, ph{angle(rng), angle(rng)};
    if (i % 4 == 0) ph[0] = 0.0;
    th.resize(static_cast<std::size_t>(k));
    ph.resize(static_cast<std::size_t>(k));
    const MeasurementSchedule s(th, ph, BitString{1u << (k - 1), k});
    cases.push_back(build_assemblage(state, s, k));
  }
  double worst_lhs = 1e300, worst_pos = 1e300;
  for (const auto& a : cases) {
    const auto sw = steering_weight(a, enumerate_strategies(a.round()));
    const auto [lhs, pos] = testing::dual_slack(sw.functional);
    worst_lhs = std::min(worst_lhs, lhs);
    worst_pos = std::min(worst_pos, pos);
  }
  return {worst_lhs >= -1e-7 && worst_pos >= -1e-7,
          fmt("min eig(sum D F - 1)=%.2e min eig(F)=%.2e", worst_lhs, worst_pos) + " over 12 functionals"};
}

Verdict honest_eve() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kPi4);
  std::uniform_real_distribution<double> eps(0.0, 0.15);
  double worst_gap = 1e300;
  bool range_ok = true;
  int errors = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 3;
    const auto state = i % 2 == 0 ? pure_state(angle(rng)) : ion_trap_state(eps(rng), i % 4);
    std::vector<double> th(static_cast<std::size_t>(n), 0.0), ph(static_cast<std::size_t>(n), 0.0);
    th[0] = angle(rng);
    if (n == 3) ph[1] = angle(rng);
    const BitString y = BitString::parse(n == 1 ? "1" : n == 2 ? (i % 2 ? "11" : "10") : "101");
    const MeasurementSchedule s(th, ph, y);
    try {
      const auto r = certify(state, s);
      const auto ideal = build_assemblage(state, s, n);
      double honest = 0.0;
      for (std::uint32_t b = 0; b < (1u << n); ++b) honest = std::max(honest, real_trace(ideal.at(b, y.bits)));
      worst_gap = std::min(worst_gap, r.guessing_probability - honest);
      range_ok = range_ok && r.guessing_probability >= std::pow(2.0, -n) - 1e-6 && r.guessing_probability <= 1 + 1e-6;
    } catch (const std::exception&) {
      ++errors;
    }
  }
  return {errors == 0 && worst_gap >= -1e-6 && range_ok,
          fmt("min(P_G - honest)=%.2e", worst_gap) + (range_ok ? ", range ok" : ", range violated") +
              fmt(", %.0f solver errors", errors)};
}

Verdict two_round_gain(const std::filesystem::path& golden) {
  const auto t = ex::run_experiment(sweep(2, ex::StateSpec::pure(kPi4), "10"));
  const double best = ex::max_h_min(t);
  std::string detail = fmt("max H_min=%.6f", best);
  bool ok = best >= 1.2;
  if (std::filesystem::exists(golden)) {
    std::ifstream in(golden);
    const auto j = nlohmann::json::parse(in);
    const double want = j.at("max_h_min").get<double>();
    const bool same = std::abs(best - want) <= 1e-6;
    ok = ok && same;
    detail += fmt(", golden %.6f", want) + (same ? " matches" : " differs");
  } else {
    std::ofstream out(golden);
    out << nlohmann::json{{"max_h_min", best}, {"grid_points", ex::kDefaultThetaPoints}}.dump(2) << '\n';
    detail += ", golden value recorded";
  }
  return {ok, detail};
}

Verdict ion_trap_raw() {
  const auto t = ex::run_experiment(sweep(1, ex::StateSpec::ion_trap(0.15, 0), "1"));
  const double best = ex::max_h_min(t);
  return {std::abs(best - 0.15) <= 0.05, fmt("max H_min=%.6f, expected 0.15 +- 0.05", best)};
}

Verdict two_round_crossover() {
  const auto one = sweep(1, ex::StateSpec::ion_trap(0.0, 0), "1");
  const auto two = sweep(2, ex::StateSpec::ion_trap(0.0, 0), "10");
  const auto r = ex::find_crossover(one, two, 0.01, 0.15, 5e-3);
  return {r.lo >= 0.05 && r.hi <= 0.08,
          fmt("crossover in [%.5f, %.5f]", r.lo, r.hi) + fmt(" after %.0f evaluations", r.evaluations)};
}

Verdict three_round_crossover() {
  const auto two = sweep(2, ex::StateSpec::ion_trap(0.0, 0), "10");
  const auto three = sweep(3, ex::StateSpec::ion_trap(0.0, 0), "101", 0.08);
  double h[2][2];
  const double eps[2] = {1e-4, 5e-4};
  for (int i = 0; i < 2; ++i) {
    h[i][0] = ex::max_entropy_for(two, ex::StateSpec::ion_trap(eps[i], 0));
    h[i][1] = ex::max_entropy_for(three, ex::StateSpec::ion_trap(eps[i], 0));
  }
  const bool ok = h[0][1] > h[0][0] && !(h[1][1] > h[1][0]);
  return {ok, fmt("eps=1e-4: H2=%.6f H3=%.6f", h[0][0], h[0][1]) + fmt("; eps=5e-4: H2=%.6f H3=%.6f", h[1][0], h[1][1])};
}

Verdict setting_order() {
  const auto t = ex::run_experiment(ex::preset("fig_three_rounds"));
  std::map<std::string, double> best;
  for (const auto& r : t)
    if (r.h_min && !r.failed()) best[r.y_star] = std::max(best[r.y_star], *r.h_min);
  double others = 0.0;
  std::string detail;
  for (const auto& [y, h] : best) {
    if (y != "101") others = std::max(others, h);
    detail += y + "=" + fmt("%.4f ", h);
  }
  const bool ok = best.size() == 8 && best["101"] > others + 1e-6;
  return {ok, detail + "(max H_min per setting)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::filesystem::path golden = std::filesystem::path(SEQSTEER_GOLDEN_DIR) / "two_round_gain.json";

  const std::vector<Criterion> criteria{
      {1, "one-round maximal point", 5, one_round_maximal_point},
      {2, "product-state null", 30, product_state_null},
      {3, "trivial-measurement null", 0, trivial_measurement_null},
      {4, "steering-weight oracle", 0, steering_weight_oracle},
      {5, "circuit-Kraus equivalence", 0, circuit_equivalence},
      {6, "dual feasibility", 0, dual_feasibility},
      {7, "honest-Eve lower bound", 0, honest_eve},
      {8, "two-round gain", 300, [&] { return two_round_gain(golden); }},
      {9, "ion-trap raw state", 120, ion_trap_raw},
      {10, "two-round crossover", 1800, two_round_crossover},
      {11, "three-round crossover", 3600, three_round_crossover},
      {12, "setting-order optimality", 0, setting_order},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt(", over the %.0f s budget", c.budget_seconds);
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
