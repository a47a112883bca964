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

#include "seqsteer/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace seqsteer::experiments {

namespace {

using nlohmann::json;

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kAngleSlack = 1e-15;

bool angle_ok(double a) { return a >= 0.0 && a <= kQuarterPi + kAngleSlack; }

std::vector<BitString> all_settings(int n) { return BitString::all(n); }

std::vector<BitString> settings(std::initializer_list<const char*> texts) {
  std::vector<BitString> out;
  for (const char* t : texts) out.push_back(BitString::parse(t));
  return out;
}

std::vector<StateSpec> ion_trap_states() {
  // Raw state, its three purified descendants, and the noiseless limit.
  std::vector<StateSpec> out;
  for (int r = 0; r <= 3; ++r) out.push_back(StateSpec::ion_trap(0.15, r));
  out.push_back(StateSpec::ion_trap(0.0, 0));
  return out;
}

ExperimentConfig base(const std::string& name, int n_rounds) {
  ExperimentConfig c;
  c.preset = name;
  c.n_rounds = n_rounds;
  c.theta1 = theta_grid();
  return c;
}

const std::map<std::string, ExperimentConfig (*)()>& preset_table() {
  static const std::map<std::string, ExperimentConfig (*)()> table{
      {"fig_one_round",
       [] {
         auto c = base("fig_one_round", 1);
         for (double z : {0.0, std::numbers::pi / 32, std::numbers::pi / 16, std::numbers::pi / 8, kQuarterPi})
           c.states.push_back(StateSpec::pure(z));
         c.y_stars = settings({"1"});
         return c;
       }},
      {"fig_two_rounds",
       [] {
         auto c = base("fig_two_rounds", 2);
         for (double z : {std::numbers::pi / 32, std::numbers::pi / 16, std::numbers::pi / 8, kQuarterPi})
           c.states.push_back(StateSpec::pure(z));
         c.y_stars = settings({"10"});
         return c;
       }},
      {"fig_two_rounds_settings",
       [] {
         auto c = base("fig_two_rounds_settings", 2);
         c.states = {StateSpec::pure(kQuarterPi)};
         c.y_stars = settings({"10", "11"});
         return c;
       }},
      {"fig_three_rounds",
       [] {
         auto c = base("fig_three_rounds", 3);
         c.states = {StateSpec::pure(kQuarterPi)};
         c.y_stars = all_settings(3);
         c.phi2 = {0.08};
         return c;
       }},
      {"fig_three_rounds_states",
       [] {
         auto c = base("fig_three_rounds_states", 3);
         for (double z : {kQuarterPi, std::numbers::pi / 5, std::numbers::pi / 7, std::numbers::pi / 8,
                          std::numbers::pi / 12})
           c.states.push_back(StateSpec::pure(z));
         c.y_stars = settings({"101"});
         c.phi2 = {0.08};
         return c;
       }},
      {"fig_three_rounds_angles",
       [] {
         auto c = base("fig_three_rounds_angles", 3);
         c.states = {StateSpec::pure(kQuarterPi)};
         c.y_stars = settings({"101"});
         c.phi2 = {0.08, 0.1, 0.2, 0.4, kQuarterPi};
         return c;
       }},
      {"ion_trap_one",
       [] {
         auto c = base("ion_trap_one", 1);
         c.states = ion_trap_states();
         c.y_stars = settings({"1"});
         return c;
       }},
      {"ion_trap_two",
       [] {
         auto c = base("ion_trap_two", 2);
         c.states = ion_trap_states();
         c.y_stars = settings({"10"});
         return c;
       }},
      {"ion_trap_three",
       [] {
         auto c = base("ion_trap_three", 3);
         c.states = ion_trap_states();
         c.y_stars = settings({"101"});
         c.phi2 = {0.08};
         return c;
       }},
      {"ion_trap_three_pure",
       [] {
         auto c = base("ion_trap_three_pure", 3);
         for (double e : {5e-3, 5e-4, 3e-4, 2e-4, 1e-4}) c.states.push_back(StateSpec::ion_trap(e, 0));
         c.y_stars = settings({"101"});
         c.phi2 = {0.08};
         return c;
       }},
  };
  return table;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

std::vector<double> number_list(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_object()) {
    // {"points": n} expands to the uniform grid over [0, pi/4].
    if (!v.contains("points")) throw ConfigError(std::string("config: '") + key + "' object needs 'points'");
    return theta_grid(get<int>(v, "points"));
  }
  return get<std::vector<double>>(j, key);
}

StateSpec state_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: each state must be an object");
  StateSpec s;
  if (j.contains("zeta")) s.zeta = get<double>(j, "zeta");
  if (j.contains("epsilon")) s.epsilon = get<double>(j, "epsilon");
  if (j.contains("purification_round")) s.purification_round = get<int>(j, "purification_round");
  return s;
}

json state_to_json(const StateSpec& s) {
  json j = json::object();
  if (s.zeta) j["zeta"] = *s.zeta;
  if (s.epsilon) {
    j["epsilon"] = *s.epsilon;
    j["purification_round"] = s.purification_round;
  }
  return j;
}

FinalFunctional functional_from_string(const std::string& s) {
  if (s == "auto") return FinalFunctional::kAuto;
  if (s == "projective") return FinalFunctional::kProjective;
  if (s == "steering_weight") return FinalFunctional::kSteeringWeight;
  throw ConfigError("config: final_functional must be auto, projective or steering_weight");
}

std::string functional_to_string(FinalFunctional f) {
  switch (f) {
    case FinalFunctional::kAuto: return "auto";
    case FinalFunctional::kProjective: return "projective";
    case FinalFunctional::kSteeringWeight: return "steering_weight";
  }
  return "auto";
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, const char* column) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::runtime_error(std::string("read_csv: bad number in column ") + column + ": '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s, const char* column) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::runtime_error(std::string("read_csv: bad integer in column ") + column + ": '" + std::string(s) + "'");
  return v;
}

template <class T>
std::string field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, int>) return std::to_string(*v);
  else return format_double(*v);
}

std::optional<double> opt_double(std::string_view s, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, column);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

template <class T>
nlohmann::ordered_json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <class T>
std::optional<T> json_opt(const nlohmann::ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

TwoQubitState StateSpec::build() const {
  if (zeta.has_value() == epsilon.has_value())
    throw ConfigError("state: give exactly one of zeta or epsilon");
  try {
    return zeta ? pure_state(*zeta) : ion_trap_state(*epsilon, purification_round);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

MeasurementSchedule GridPoint::schedule() const {
  const std::vector<double> thetas{theta1, 0.0, theta3};
  const std::vector<double> phis{0.0, phi2, 0.0};
  const auto n = static_cast<std::ptrdiff_t>(n_rounds);
  return MeasurementSchedule({thetas.begin(), thetas.begin() + n}, {phis.begin(), phis.begin() + n}, y_star);
}

void ExperimentConfig::validate() const {
  if (n_rounds < 1 || n_rounds > 3) throw ConfigError("config: n_rounds must be 1, 2 or 3");
  if (states.empty()) throw ConfigError("config: no states");
  if (theta1.empty()) throw ConfigError("config: empty theta1 grid");
  if (phi2.empty()) throw ConfigError("config: empty phi2 grid");
  if (y_stars.empty()) throw ConfigError("config: no y* settings");
  for (double a : theta1)
    if (!angle_ok(a)) throw ConfigError("config: theta1 value outside [0, pi/4]");
  for (double a : phi2)
    if (!angle_ok(a)) throw ConfigError("config: phi2 value outside [0, pi/4]");
  if (!angle_ok(theta3)) throw ConfigError("config: theta3 outside [0, pi/4]");
  for (const auto& y : y_stars)
    if (y.length != n_rounds) throw ConfigError("config: y* '" + y.str() + "' does not have n_rounds bits");
  for (const auto& s : states) s.build();
  if (!(certify.alpha > 0.0)) throw ConfigError("config: alpha must be positive");
  if (!(certify.guessing.solver.tolerance > 0.0)) throw ConfigError("config: tol must be positive");
  if (workers < 0) throw ConfigError("config: workers must be nonnegative");
}

std::vector<GridPoint> ExperimentConfig::grid() const {
  std::vector<GridPoint> out;
  for (const auto& s : states)
    for (const auto& y : y_stars)
      for (double p : phi2)
        for (double t : theta1) out.push_back({s, n_rounds, t, p, theta3, y});
  return out;
}

std::vector<double> theta_grid(int points) {
  if (points < 1) throw ConfigError("theta grid needs at least one point");
  if (points == 1) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = kQuarterPi * i / (points - 1);
  out.back() = kQuarterPi;
  return out;
}

ExperimentConfig preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second();
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : preset_table()) out.push_back(name);
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
  static const std::vector<std::string> known{
      "preset", "n_rounds", "states", "theta1",          "phi2",           "theta3",
      "y_stars", "alpha",  "tol",    "relax_violation", "final_functional", "workers", "max_iterations"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key '" + key + "'");

  ExperimentConfig c;
  if (j.contains("preset")) c = preset(get<std::string>(j, "preset"));
  if (j.contains("n_rounds")) c.n_rounds = get<int>(j, "n_rounds");
  if (j.contains("states")) {
    if (!j.at("states").is_array()) throw ConfigError("config: 'states' must be an array");
    c.states.clear();
    for (const auto& s : j.at("states")) c.states.push_back(state_from_json(s));
  }
  if (j.contains("theta1")) c.theta1 = number_list(j, "theta1");
  if (c.theta1.empty() && !j.contains("theta1")) c.theta1 = theta_grid();
  if (j.contains("phi2")) c.phi2 = number_list(j, "phi2");
  if (j.contains("theta3")) c.theta3 = get<double>(j, "theta3");
  if (j.contains("y_stars")) {
    c.y_stars.clear();
    for (const auto& s : get<std::vector<std::string>>(j, "y_stars")) {
      try {
        c.y_stars.push_back(BitString::parse(s));
      } catch (const std::exception& e) {
        throw ConfigError("config: bad y* '" + s + "': " + e.what());
      }
    }
  }
  if (j.contains("alpha")) c.certify.alpha = get<double>(j, "alpha");
  if (j.contains("tol")) c.certify.guessing.solver.tolerance = get<double>(j, "tol");
  if (j.contains("max_iterations")) c.certify.guessing.solver.max_iterations = get<int>(j, "max_iterations");
  if (j.contains("relax_violation")) c.certify.guessing.relax_violation = get<bool>(j, "relax_violation");
  if (j.contains("final_functional"))
    c.certify.final_functional = functional_from_string(get<std::string>(j, "final_functional"));
  if (j.contains("workers")) c.workers = get<int>(j, "workers");
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.preset) j["preset"] = *c.preset;
  j["n_rounds"] = c.n_rounds;
  j["states"] = json::array();
  for (const auto& s : c.states) j["states"].push_back(state_to_json(s));
  j["theta1"] = c.theta1;
  j["phi2"] = c.phi2;
  j["theta3"] = c.theta3;
  j["y_stars"] = json::array();
  for (const auto& y : c.y_stars) j["y_stars"].push_back(y.str());
  j["alpha"] = c.certify.alpha;
  j["tol"] = c.certify.guessing.solver.tolerance;
  j["max_iterations"] = c.certify.guessing.solver.max_iterations;
  j["relax_violation"] = c.certify.guessing.relax_violation;
  j["final_functional"] = functional_to_string(c.certify.final_functional);
  j["workers"] = c.workers;
  return j;
}

bool Row::failed() const { return status == "error" || status == "infeasible"; }

Row run_point(const GridPoint& point, const CertifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Row row;
  row.n_rounds = point.n_rounds;
  row.zeta1 = point.state.zeta;
  row.epsilon = point.state.epsilon;
  if (point.state.epsilon) row.purification_round = point.state.purification_round;
  row.theta1 = point.theta1;
  if (point.n_rounds >= 2) row.phi2 = point.phi2;
  if (point.n_rounds >= 3) row.theta3 = point.theta3;
  row.y_star = point.y_star.str();
  try {
    const auto report = certify(point.state.build(), point.schedule(), options);
    const std::array<std::optional<double>*, 3> vs{&row.v1, &row.v2, &row.v3};
    for (std::size_t k = 0; k < report.per_round_violations.size(); ++k) *vs[k] = report.per_round_violations[k];
    row.p_guess = report.guessing_probability;
    row.h_min = report.min_entropy_bits;
    row.best_guess = report.best_guess.str();
    row.status = conic::to_string(report.solver_status);
  } catch (const SolverError& e) {
    row.status = e.status() == conic::SolveStatus::kInfeasible ? "infeasible" : "error";
  } catch (const std::exception&) {
    row.status = "error";
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

Table run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto points = config.grid();
  Table rows(points.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(points.size(), config.workers > 0 ? static_cast<std::size_t>(config.workers) : hw);
  // Each worker claims the next index; rows land in their grid slot.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) rows[i] = run_point(points[i], config.certify);
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

void write_csv(const Table& table, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : table) {
    out << r.n_rounds << ',' << field(r.zeta1) << ',' << field(r.epsilon) << ',' << field(r.purification_round)
        << ',' << field(r.theta1) << ',' << field(r.phi2) << ',' << field(r.theta3) << ',' << r.y_star << ','
        << field(r.v1) << ',' << field(r.v2) << ',' << field(r.v3) << ',' << field(r.p_guess) << ','
        << field(r.h_min) << ',' << r.best_guess << ',' << r.status << ',' << format_double(r.seconds) << '\n';
  }
}

Table read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: missing header");
  if (split(line) != csv_columns()) throw std::runtime_error("read_csv: unexpected header");
  Table table;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != csv_columns().size()) throw std::runtime_error("read_csv: wrong field count");
    Row r;
    r.n_rounds = parse_int(f[0], "n_rounds");
    r.zeta1 = opt_double(f[1], "zeta1");
    r.epsilon = opt_double(f[2], "epsilon");
    if (!f[3].empty()) r.purification_round = parse_int(f[3], "purification_round");
    r.theta1 = opt_double(f[4], "theta1");
    r.phi2 = opt_double(f[5], "phi2");
    r.theta3 = opt_double(f[6], "theta3");
    r.y_star = f[7];
    r.v1 = opt_double(f[8], "v1");
    r.v2 = opt_double(f[9], "v2");
    r.v3 = opt_double(f[10], "v3");
    r.p_guess = opt_double(f[11], "p_guess");
    r.h_min = opt_double(f[12], "h_min");
    r.best_guess = f[13];
    r.status = f[14];
    r.seconds = parse_double(f[15], "seconds");
    table.push_back(std::move(r));
  }
  return table;
}

nlohmann::ordered_json table_to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    rows.push_back({{"n_rounds", r.n_rounds},
                    {"zeta1", opt_json(r.zeta1)},
                    {"epsilon", opt_json(r.epsilon)},
                    {"purification_round", opt_json(r.purification_round)},
                    {"theta1", opt_json(r.theta1)},
                    {"phi2", opt_json(r.phi2)},
                    {"theta3", opt_json(r.theta3)},
                    {"y_star", r.y_star},
                    {"v1", opt_json(r.v1)},
                    {"v2", opt_json(r.v2)},
                    {"v3", opt_json(r.v3)},
                    {"p_guess", opt_json(r.p_guess)},
                    {"h_min", opt_json(r.h_min)},
                    {"best_guess", r.best_guess},
                    {"status", r.status},
                    {"seconds", r.seconds}});
  }
  return rows;
}

Table table_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw std::runtime_error("table_from_json: expected an array of rows");
  Table table;
  for (const auto& o : j) {
    Row r;
    r.n_rounds = o.at("n_rounds").get<int>();
    r.zeta1 = json_opt<double>(o, "zeta1");
    r.epsilon = json_opt<double>(o, "epsilon");
    r.purification_round = json_opt<int>(o, "purification_round");
    r.theta1 = json_opt<double>(o, "theta1");
    r.phi2 = json_opt<double>(o, "phi2");
    r.theta3 = json_opt<double>(o, "theta3");
    r.y_star = o.at("y_star").get<std::string>();
    r.v1 = json_opt<double>(o, "v1");
    r.v2 = json_opt<double>(o, "v2");
    r.v3 = json_opt<double>(o, "v3");
    r.p_guess = json_opt<double>(o, "p_guess");
    r.h_min = json_opt<double>(o, "h_min");
    r.best_guess = o.at("best_guess").get<std::string>();
    r.status = o.at("status").get<std::string>();
    r.seconds = o.at("seconds").get<double>();
    table.push_back(std::move(r));
  }
  return table;
}

void emit(const Table& table, Format format, const std::string& path) {
  if (table.empty()) throw std::invalid_argument("emit: empty table");
  std::ostringstream buf;
  if (format == Format::kCsv) write_csv(table, buf);
  else buf << table_to_json(table).dump(2) << '\n';
  if (path == "-") {
    std::cout << buf.str() << std::flush;
    if (!std::cout) throw std::runtime_error("emit: write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open '" + path + "'");
  out << buf.str();
  out.close();
  if (!out) throw std::runtime_error("emit: write to '" + path + "' failed");
}

double max_h_min(const Table& table) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : table)
    if (r.h_min && !r.failed()) best = std::max(best, *r.h_min);
  return best;
}

double max_entropy_for(const ExperimentConfig& config, const StateSpec& state) {
  ExperimentConfig c = config;
  c.states = {state};
  return max_h_min(run_experiment(c));
}

CrossoverResult find_crossover(const ExperimentConfig& fewer, const ExperimentConfig& more, double lo,
                               double hi, double width, double margin) {
  if (!(lo < hi) || !(width > 0.0)) throw std::invalid_argument("find_crossover: need lo < hi and width > 0");
  if (fewer.states.empty() || more.states.empty()) throw std::invalid_argument("find_crossover: configs need a state");
  const int round = more.states.front().purification_round;
  CrossoverResult out;
  auto more_useful = [&](double eps) {
    ++out.evaluations;
    const auto s = StateSpec::ion_trap(eps, round);
    return max_entropy_for(more, s) > max_entropy_for(fewer, s) + margin;
  };
  if (!more_useful(lo)) throw std::domain_error("find_crossover: predicate fails at the lower end");
  if (more_useful(hi)) throw std::domain_error("find_crossover: predicate holds at the upper end");
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (more_useful(mid) ? lo : hi) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

}  // namespace seqsteer::experiments
