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

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqsteer/certifier.hpp"
#include "seqsteer/measurement.hpp"
#include "seqsteer/states.hpp"

namespace seqsteer::experiments {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Either a pure state cos(zeta)|00> + sin(zeta)|11> or an ion-trap state.
struct StateSpec {
  std::optional<double> zeta;
  std::optional<double> epsilon;
  int purification_round = 0;

  static StateSpec pure(double zeta) { return {zeta, std::nullopt, 0}; }
  static StateSpec ion_trap(double epsilon, int round = 0) { return {std::nullopt, epsilon, round}; }
  TwoQubitState build() const;
};

/// One grid point: a state and the schedule applied to it.
///
/// Round 1 measures noisy X (theta1) with projective Z as the alternative, round 2
/// noisy Z (phi2) with projective X, round 3 X (theta3) with projective Z.
struct GridPoint {
  StateSpec state;
  int n_rounds = 1;
  double theta1 = 0.0;
  double phi2 = 0.0;
  double theta3 = 0.0;
  BitString y_star;

  MeasurementSchedule schedule() const;
};

struct ExperimentConfig {
  std::optional<std::string> preset;
  int n_rounds = 1;
  std::vector<StateSpec> states;
  std::vector<double> theta1;
  std::vector<double> phi2{0.0};
  double theta3 = 0.0;
  std::vector<BitString> y_stars;
  CertifyOptions certify;
  /// Worker threads; 0 means the available hardware parallelism.
  int workers = 0;

  /// Throws ConfigError when a grid is empty, an angle lies outside [0, pi/4],
  /// a y* string has the wrong length or a state is invalid.
  void validate() const;
  /// Grid points in row order: states, then y*, then phi2, then theta1.
  std::vector<GridPoint> grid() const;
};

inline constexpr int kDefaultThetaPoints = 60;

/// `points` uniformly spaced angles covering [0, pi/4].
std::vector<double> theta_grid(int points = kDefaultThetaPoints);

/// Named configurations for the standard figures.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Parses a config document. A "preset" key loads that preset first; every other
/// key overrides it.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct Row {
  int n_rounds = 1;
  std::optional<double> zeta1;
  std::optional<double> epsilon;
  std::optional<int> purification_round;
  std::optional<double> theta1;
  std::optional<double> phi2;
  std::optional<double> theta3;
  std::string y_star;
  std::optional<double> v1, v2, v3;
  std::optional<double> p_guess;
  std::optional<double> h_min;
  std::string best_guess;
  std::string status;
  double seconds = 0.0;

  /// Rows with status "error" or "infeasible" count as failed.
  bool failed() const;
  friend bool operator==(const Row&, const Row&) = default;
};

using Table = std::vector<Row>;

/// Certifies one grid point. Solver failures are reported in the status column.
Row run_point(const GridPoint& point, const CertifyOptions& options);

/// Runs every grid point on a worker pool; rows come back in grid order.
Table run_experiment(const ExperimentConfig& config);

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "n_rounds", "zeta1",  "epsilon", "purification_round", "theta1", "phi2",       "theta3", "y_star",
      "v1",       "v2",     "v3",      "p_guess",            "h_min",  "best_guess", "status", "seconds"};
  return cols;
}

void write_csv(const Table& table, std::ostream& out);
Table read_csv(std::istream& in);
nlohmann::ordered_json table_to_json(const Table& table);
Table table_from_json(const nlohmann::ordered_json& j);

enum class Format { kCsv, kJson };

/// Writes the table to `path` ("-" for stdout). Throws std::invalid_argument on
/// an empty table and std::runtime_error on I/O failure.
void emit(const Table& table, Format format, const std::string& path);

/// Largest min-entropy over the table's rows that have one.
double max_h_min(const Table& table);

struct CrossoverResult {
  /// Interval that contains the crossover; `lo` satisfies the predicate.
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
};

/// Bisection over the ion-trap infidelity on the predicate "max over theta1 of
/// H_min with `more` rounds exceeds that with `fewer` rounds by more than
/// `margin`". The predicate must hold at `lo` and fail at `hi`. Each config
/// supplies its own grids and options. The first state of `more` fixes the
/// purification round; the states are otherwise ignored.
CrossoverResult find_crossover(const ExperimentConfig& fewer, const ExperimentConfig& more, double lo,
                               double hi, double width, double margin = 1e-6);

/// max over theta1 of H_min for `config` with its states replaced by `state`.
double max_entropy_for(const ExperimentConfig& config, const StateSpec& state);

}  // namespace seqsteer::experiments
