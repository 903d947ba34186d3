#include "adiabatic/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "adiabatic/evolution.hpp"
#include "adiabatic/ground.hpp"

namespace adiabatic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kDefaultQubits = 5;
constexpr double kDefaultRuntime = 100.0;
constexpr std::size_t kFullColumnLimit = 256;

std::string num(double x) { return fmt::format("{:.17g}", x); }

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed JSON in '{}': {}", path.string(), e.what()));
  }
}

template <typename T>
T get_field(const json& j, const char* key, const char* where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: field '{}' missing or mistyped ({})", where, key, e.what()));
  }
}

// ---------------------------------------------------------------------------
// Output files

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& command, const ExperimentConfig& config,
          const std::vector<std::string>& extra_header)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    out_ << "# adiabatic-lab " << command << '\n';
    out_ << "# config_hash=" << config_hash(config) << '\n';
    out_ << "# seed=" << config.seed << '\n';
    out_ << "# tol=" << num(config.tol) << " norm_tolerance=1e-08 sandwich_slack=1e-09\n";
    for (const std::string& line : extra_header) out_ << "# " << line << '\n';
  }

  void columns(const std::vector<std::string>& names) { line(names); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(num(v));
    line(cells);
  }

  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct Summary {
  json body = json::object();

  Summary(const std::string& command, const ExperimentConfig& config) {
    body["command"] = command;
    body["config_hash"] = config_hash(config);
    body["seed"] = config.seed;
    body["tol"] = config.tol;
    for (const char* key : {"violation_count", "worst_deficit", "g_min", "D_max", "max_delta",
                            "oscillation_amplitude_by_T"}) {
      body[key] = nullptr;
    }
  }

  void write(const fs::path& dir) const {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write summary in '{}'", dir.string()));
    out << body.dump(2) << '\n';
  }
};

std::vector<std::string> k_columns(const char* prefix, const std::vector<std::size_t>& ks) {
  std::vector<std::string> names;
  for (std::size_t k : ks) names.push_back(fmt::format("{}_{}", prefix, k));
  return names;
}

// k-list for curve output: every k when N is small, the sparse default otherwise.
std::vector<std::size_t> curve_k_list(const ExperimentConfig& config, std::size_t dimension) {
  if (!config.k_list.empty()) return config.k_list;
  if (config.full_k || dimension <= kFullColumnLimit) {
    std::vector<std::size_t> ks = full_k_list(dimension);
    ks.push_back(dimension);
    return ks;
  }
  return default_k_list(dimension);
}

// k-list for bounds and oscillation measures, which exclude the trivial k = N.
std::vector<std::size_t> check_k_list(const ExperimentConfig& config, std::size_t dimension) {
  if (!config.k_list.empty()) return config.k_list;
  return config.full_k ? full_k_list(dimension) : default_k_list(dimension);
}

double step_for(const ExperimentConfig& config, const ProblemSpec& problem, double runtime) {
  return config.dt ? *config.dt : default_step_rule(problem)(runtime);
}

std::vector<double> runtimes_or_default(const ExperimentConfig& config) {
  if (!config.T_list.empty()) return config.T_list;
  return {10.0, 50.0, 250.0};
}

void verdict_cells(const MajorizationVerdict& v, std::vector<std::string>& cells) {
  cells.push_back(to_string(v.relation));
  cells.push_back(num(v.deficit));
  cells.push_back(v.witness_k ? std::to_string(*v.witness_k) : "");
}

void write_majorization_rows(CsvFile& csv, const MajorizationReport& report, const std::vector<double>* deltas) {
  for (std::size_t j = 0; j < report.grid.size(); ++j) {
    std::vector<std::string> cells{num(report.grid[j])};
    for (double v : report.curves[j]) cells.push_back(num(v));
    if (j < report.verdicts.size()) {
      verdict_cells(report.verdicts[j], cells);
    } else {
      cells.insert(cells.end(), {"", "", ""});
    }
    if (deltas) cells.push_back(num((*deltas)[j]));
    csv.line(cells);
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ground_curve(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const auto grid = resolve_grid(config);
  const auto ks = curve_k_list(config, problem.dimension());
  CsvFile csv(dir / "ground_curve.csv", "ground-curve", config,
              {fmt::format("N={} shift={}", problem.dimension(), num(problem.shift()))});
  std::vector<std::string> names{"s", "t", "lambda"};
  for (auto& c : k_columns("A", ks)) names.push_back(c);
  csv.columns(names);
  for (double s : grid) {
    const GroundStateSolution gs = ground_state(problem, s);
    std::vector<double> row{s, gs.t, reported_eigenvalue(problem, gs)};
    for (std::size_t k : ks) row.push_back(gs.A[k - 1]);
    csv.row(row);
  }
  Summary summary("ground-curve", config);
  summary.write(dir);
  log << fmt::format("ground curve: {} points written to {}\n", grid.size(), (dir / "ground_curve.csv").string());
  return 0;
}

int cmd_evolve(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const Schedule schedule = resolve_schedule(config);
  EvolutionOptions opts;
  opts.dt = step_for(config, problem, schedule.runtime());
  opts.output_grid = resolve_grid(config);
  const Trajectory traj = evolve(problem, schedule, opts);
  const auto ks = curve_k_list(config, problem.dimension());

  CsvFile csv(dir / "trajectory.csv", "evolve", config,
              {fmt::format("T={} dt={} steps={}", num(schedule.runtime()), num(traj.step), traj.step_count)});
  std::vector<std::string> names{"time", "s", "norm", "overlap", "delta"};
  for (auto& c : k_columns("B", ks)) names.push_back(c);
  csv.columns(names);
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    const EvolutionState& st = traj.states[j];
    const auto B = cumulative_probability(st.b);
    std::vector<double> row{st.time, st.s, st.norm, traj.fidelity[j], traj.delta[j]};
    for (std::size_t k : ks) row.push_back(B[k - 1]);
    csv.row(row);
  }

  // Final distribution against the caller's labels.
  const Amplitudes& final_b = traj.states.back().b;
  std::vector<double> probs(final_b.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(final_b[i]);
  const auto by_label = problem.to_original_labels<double>(probs);
  CsvFile final_csv(dir / "final_distribution.csv", "evolve", config, {});
  final_csv.columns({"label", "cost", "probability"});
  for (std::size_t i = 0; i < by_label.size(); ++i) {
    final_csv.line({std::to_string(i), num(problem.raw_costs()[i]), num(by_label[i])});
  }

  Summary summary("evolve", config);
  summary.body["max_delta"] = *std::max_element(traj.delta.begin(), traj.delta.end());
  summary.body["final_overlap"] = traj.fidelity.back();
  summary.body["max_norm_drift"] = traj.max_norm_drift;
  summary.write(dir);
  log << fmt::format("evolve: T = {}, {} steps, final overlap {:.6f}\n", schedule.runtime(), traj.step_count,
                     traj.fidelity.back());
  return 0;
}

int cmd_verify_ground(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const auto grid = resolve_grid(config);
  const auto ks = curve_k_list(config, problem.dimension());
  const MajorizationReport report = ground_report(problem, grid, ks, config.tol);

  CsvFile csv(dir / "ground_report.csv", "verify-ground", config, {});
  std::vector<std::string> names{"s"};
  for (auto& c : k_columns("L", ks)) names.push_back(c);
  for (const char* c : {"relation_to_next", "deficit_to_next", "witness_k"}) names.emplace_back(c);
  csv.columns(names);
  write_majorization_rows(csv, report, nullptr);

  Summary summary("verify-ground", config);
  summary.body["violation_count"] = report.violation_count;
  summary.body["worst_deficit"] = report.worst_deficit;
  summary.write(dir);
  if (report.violation_count > 0) {
    log << fmt::format(
        "ground-state step-by-step majorization check failed: {} violations, worst partial-sum deficit {:.3e}\n",
        report.violation_count, report.worst_deficit);
    return 2;
  }
  log << fmt::format("ground-state step-by-step majorization holds on {} grid points (worst deficit {:.3e})\n",
                     grid.size(), report.worst_deficit);
  return 0;
}

int cmd_verify_actual(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const Schedule schedule = resolve_schedule(config);
  EvolutionOptions opts;
  opts.dt = step_for(config, problem, schedule.runtime());
  opts.output_grid = resolve_grid(config);
  const Trajectory traj = evolve(problem, schedule, opts);
  const auto ks = curve_k_list(config, problem.dimension());
  const TrajectoryReport report = trajectory_report(problem, traj, ks, config.tol);
  const MajorizationReport& maj = report.majorization;

  CsvFile csv(dir / "actual_report.csv", "verify-actual", config, {fmt::format("T={}", num(schedule.runtime()))});
  std::vector<std::string> names{"s"};
  for (auto& c : k_columns("L", ks)) names.push_back(c);
  for (const char* c : {"relation_to_next", "deficit_to_next", "witness_k", "delta"}) names.emplace_back(c);
  csv.columns(names);
  write_majorization_rows(csv, maj, &traj.delta);

  Summary summary("verify-actual", config);
  summary.body["violation_count"] = maj.violation_count;
  summary.body["worst_deficit"] = maj.worst_deficit;
  summary.body["max_delta"] = *std::max_element(traj.delta.begin(), traj.delta.end());
  summary.body["sandwich_max_consumed_fraction"] = report.sandwich.max_consumed_fraction;
  summary.write(dir);

  log << fmt::format("actual-state majorization: {} violations over {} consecutive pairs (worst deficit {:.3e})\n",
                     maj.violation_count, maj.verdicts.size(), maj.worst_deficit);
  for (std::size_t j = 0; j < maj.verdicts.size(); ++j) {
    const auto& v = maj.verdicts[j];
    if (v.relation == Relation::NotMajorized) {
      log << fmt::format("  s = {:.6f} -> {:.6f}: deficit {:.3e} at k = {}\n", maj.grid[j], maj.grid[j + 1],
                         v.deficit, *v.witness_k);
    }
  }
  return 0;
}

int cmd_bounds(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  std::vector<double> grid;
  for (double s : resolve_grid(config)) {
    if (s > 0.0 && s < 1.0) grid.push_back(s);
  }
  const auto ks = check_k_list(config, problem.dimension());
  const BoundMargins margins = growth_bound_margins(problem, grid, ks);

  CsvFile csv(dir / "bounds.csv", "bounds", config,
              {fmt::format("c={} m={} vacuous={}", num(margins.c), num(margins.m), margins.vacuous)});
  std::vector<std::string> names{"s"};
  for (auto& c : k_columns("margin", ks)) names.push_back(c);
  csv.columns(names);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> row{grid[j]};
    row.insert(row.end(), margins.margin[j].begin(), margins.margin[j].end());
    csv.row(row);
  }
  Summary summary("bounds", config);
  summary.body["bound_vacuous"] = margins.vacuous;
  summary.body["bound_min_margin"] = margins.min_margin;
  summary.write(dir);

  if (margins.vacuous) {
    log << "growth bound dA_k/ds > (2c/k) A_k (1 - A_k) is vacuous (c = 0: tied minimum)\n";
    return 0;
  }
  if (margins.min_margin < 0.0) {
    log << fmt::format("growth bound dA_k/ds > (2c/k) A_k (1 - A_k) violated: min margin {:.3e}\n",
                       margins.min_margin);
    return 2;
  }
  log << fmt::format("growth bound holds: c = {}, min margin {:.3e}\n", margins.c, margins.min_margin);
  return 0;
}

int cmd_gap(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const Schedule schedule = resolve_schedule(config);
  const auto grid = resolve_grid(config);
  const SpectralReport report = spectral_report(problem, schedule, grid);

  json spectral;
  spectral["config_hash"] = config_hash(config);
  spectral["seed"] = config.seed;
  spectral["T"] = schedule.runtime();
  spectral["s_grid"] = report.s_grid;
  spectral["E0"] = report.E0;
  spectral["E1"] = report.E1;
  spectral["g_min"] = report.g_min;
  spectral["s_at_g_min"] = report.s_at_g_min;
  spectral["D_max"] = report.D_max;
  spectral["epsilon_bound"] = report.epsilon_bound;
  std::ofstream out(dir / "spectral.json", std::ios::binary);
  out << spectral.dump(2) << '\n';

  Summary summary("gap", config);
  summary.body["g_min"] = report.g_min;
  summary.body["D_max"] = report.D_max;
  summary.body["epsilon_bound"] = report.epsilon_bound;
  summary.write(dir);
  log << fmt::format("gap: g_min = {:.9f} at s = {:.4f}, D_max = {:.6e}, D_max/g_min^2 = {:.6e}\n", report.g_min,
                     report.s_at_g_min, report.D_max, report.epsilon_bound);
  return 0;
}

int cmd_sweep(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  SweepOptions opts;
  opts.runtimes = runtimes_or_default(config);
  if (config.dt) opts.step_rule = [dt = *config.dt](double) { return dt; };
  opts.tail = config.tail;
  opts.k_list = check_k_list(config, problem.dimension());
  opts.grid = resolve_grid(config);
  opts.parallel = config.parallel;
  const SweepResult result = oscillation_sweep(problem, opts);

  CsvFile csv(dir / "sweep.csv", "sweep", config,
              {fmt::format("tail=[{},{}]", num(config.tail.lo), num(config.tail.hi))});
  csv.columns({"T", "oscillation_amplitude", "max_delta"});
  json by_t = json::object();
  for (std::size_t j = 0; j < result.T_list.size(); ++j) {
    csv.row({result.T_list[j], result.oscillation_amplitude[j], result.max_delta[j]});
    by_t[num(result.T_list[j])] = result.oscillation_amplitude[j];
  }
  Summary summary("sweep", config);
  summary.body["oscillation_amplitude_by_T"] = by_t;
  summary.body["max_delta"] = *std::max_element(result.max_delta.begin(), result.max_delta.end());
  summary.body["trend_non_increasing"] = result.non_increasing;
  summary.write(dir);
  log << fmt::format("sweep: oscillation amplitude trend {} (10% slack)\n",
                     result.non_increasing ? "non-increasing" : "NOT non-increasing");
  return 0;
}

int cmd_figure1(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = resolve_problem(config);
  const auto grid = resolve_grid(config);
  const std::vector<std::size_t> k1{1};

  json by_t = json::object();
  double max_delta = 0.0;
  bool ground_monotone = true;
  for (double runtime : runtimes_or_default(config)) {
    EvolutionOptions opts;
    opts.dt = step_for(config, problem, runtime);
    opts.output_grid = grid;
    const Trajectory traj = evolve(problem, Schedule::linear(runtime), opts);

    CsvFile csv(dir / fmt::format("figure1_T{}.csv", runtime), "figure1", config,
                {fmt::format("T={} dt={}", num(runtime), num(traj.step))});
    csv.columns({"s", "A_1", "B_1"});
    double previous_a1 = -1.0;
    for (const EvolutionState& st : traj.states) {
      const double a1 = ground_state(problem, st.s).A[0];
      if (a1 < previous_a1) ground_monotone = false;
      previous_a1 = a1;
      csv.row({st.s, a1, std::norm(st.b[0])});
    }
    const double amplitude = oscillation_amplitude(traj, config.tail, k1);
    by_t[num(runtime)] = amplitude;
    max_delta = std::max(max_delta, *std::max_element(traj.delta.begin(), traj.delta.end()));
    log << fmt::format("figure1: T = {}: {} B_1 decreases in tail, oscillation amplitude {:.3e}\n", runtime,
                       tail_decrease_count(traj, config.tail, 1), amplitude);
  }
  Summary summary("figure1", config);
  summary.body["oscillation_amplitude_by_T"] = by_t;
  summary.body["max_delta"] = max_delta;
  summary.write(dir);
  if (!ground_monotone) {
    log << "figure1: ground-state A_1 curve is not monotone\n";
    return 2;
  }
  return 0;
}

void write_hash_digest(const std::string& text, std::string& hex) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw ConfigError("SHA-256 digest failed");
  }
  hex.clear();
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig config;
  if (j.contains("n")) {
    config.problem = j;  // the whole file is a problem description
  } else if (j.contains("problem")) {
    config.problem = j.at("problem");
  }
  if (j.contains("schedule")) config.schedule = j.at("schedule");
  try {
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_array()) {
        config.grid = g.get<std::vector<double>>();
      } else {
        const auto points = g.get<long long>();
        if (points < 2) throw ConfigError(fmt::format("grid needs at least 2 points, got {}", points));
        config.grid_points = static_cast<std::size_t>(points);
      }
    }
    if (j.contains("k")) config.k_list = j.at("k").get<std::vector<std::size_t>>();
    if (j.contains("full_k")) config.full_k = j.at("full_k").get<bool>();
    if (j.contains("dt")) config.dt = j.at("dt").get<double>();
    if (j.contains("T")) {
      const json& t = j.at("T");
      config.T_list = t.is_array() ? t.get<std::vector<double>>() : std::vector<double>{t.get<double>()};
    }
    if (j.contains("tol")) config.tol = j.at("tol").get<double>();
    if (j.contains("tail")) {
      const auto tail = j.at("tail").get<std::vector<double>>();
      if (tail.size() != 2) throw ConfigError("tail must be [lo, hi]");
      config.tail = {tail[0], tail[1]};
    }
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("parallel")) config.parallel = j.at("parallel").get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("mistyped config field: {}", e.what()));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  const fs::path file(path);
  ExperimentConfig config = config_from_json(read_json_file(file));
  if (config.problem.is_string()) {
    fs::path problem_path(config.problem.get<std::string>());
    if (problem_path.is_relative()) problem_path = file.parent_path() / problem_path;
    config.problem = read_json_file(problem_path);
  }
  return config;
}

json canonical_json(const ExperimentConfig& config) {
  json j;
  j["problem"] = config.problem;
  j["schedule"] = config.schedule;
  j["grid_points"] = config.grid_points;
  j["grid"] = config.grid;
  j["k"] = config.k_list;
  j["full_k"] = config.full_k;
  j["dt"] = config.dt ? json(*config.dt) : json(nullptr);
  j["T"] = config.T_list;
  j["tol"] = config.tol;
  j["tail"] = {config.tail.lo, config.tail.hi};
  j["seed"] = config.seed;
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  std::string hex;
  write_hash_digest(canonical_json(config).dump(), hex);
  return hex;
}

ProblemSpec resolve_problem(const ExperimentConfig& config) {
  const json& p = config.problem;
  if (p.is_null()) return grover_problem(kDefaultQubits, 0);
  if (!p.is_object()) throw ConfigError("problem must be a JSON object");
  const int n = get_field<int>(p, "n", "problem");
  if (n < 1 || n > 30) throw ConfigError(fmt::format("problem: n = {} out of range [1, 30]", n));
  const std::size_t dimension = std::size_t{1} << n;

  if (p.contains("f")) {
    auto f = get_field<std::vector<double>>(p, "f", "problem");
    if (f.size() != dimension) {
      throw NotPowerOfTwo(fmt::format("problem: {} cost values given, expected 2^{} = {}", f.size(), n, dimension));
    }
    return build_problem(std::move(f));
  }
  const auto cost = get_field<std::string>(p, "cost", "problem");
  if (cost == "grover") {
    return grover_problem(n, p.contains("marked") ? get_field<std::size_t>(p, "marked", "problem") : 0);
  }
  if (cost == "random-int") {
    const auto seed = p.contains("seed") ? get_field<std::uint64_t>(p, "seed", "problem") : config.seed;
    return random_int_problem(n, seed);
  }
  throw ConfigError(fmt::format("problem: unknown cost family '{}'", cost));
}

Schedule resolve_schedule(const ExperimentConfig& config) {
  const json& s = config.schedule;
  const double fallback_t = config.T_list.empty() ? kDefaultRuntime : config.T_list.front();
  if (s.is_null()) return Schedule::linear(fallback_t);
  if (!s.is_object()) throw ConfigError("schedule must be a JSON object");
  const auto kind = s.contains("kind") ? get_field<std::string>(s, "kind", "schedule") : std::string("linear");
  if (kind == "linear") {
    // --T on the command line takes precedence over the file.
    if (!config.T_list.empty()) return Schedule::linear(config.T_list.front());
    return Schedule::linear(s.contains("T") ? get_field<double>(s, "T", "schedule") : fallback_t);
  }
  if (kind == "tabulated") {
    const auto points = get_field<std::vector<std::vector<double>>>(s, "points", "schedule");
    std::vector<std::pair<double, double>> knots;
    for (const auto& pt : points) {
      if (pt.size() != 2) throw ConfigError("schedule: tabulated points must be [t, s] pairs");
      knots.emplace_back(pt[0], pt[1]);
    }
    return Schedule::tabulated(std::move(knots));
  }
  throw ConfigError(fmt::format("schedule: unknown kind '{}'", kind));
}

std::vector<double> resolve_grid(const ExperimentConfig& config) {
  if (!config.grid.empty()) {
    if (config.grid.size() < 2) throw ConfigError("explicit grid needs at least 2 points");
    return config.grid;
  }
  return uniform_grid(config.grid_points);
}

// ---------------------------------------------------------------------------
// Dispatch

int run(const std::string& command, const ExperimentConfig& config, std::ostream& log) {
  try {
    if (config.grid.empty() && config.grid_points < 2) {
      throw ConfigError(fmt::format("grid needs at least 2 points, got {}", config.grid_points));
    }
    if (!(config.tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    if (command == "ground-curve") return cmd_ground_curve(config, dir, log);
    if (command == "evolve") return cmd_evolve(config, dir, log);
    if (command == "verify-ground") return cmd_verify_ground(config, dir, log);
    if (command == "verify-actual") return cmd_verify_actual(config, dir, log);
    if (command == "bounds") return cmd_bounds(config, dir, log);
    if (command == "gap") return cmd_gap(config, dir, log);
    if (command == "sweep") return cmd_sweep(config, dir, log);
    if (command == "figure1") return cmd_figure1(config, dir, log);
    throw ConfigError(fmt::format("unknown command '{}'", command));
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Adiabatic majorization laboratory"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  long long grid_points = 0;
  std::vector<double> runtimes;
  double dt = 0.0;
  std::vector<std::size_t> ks;
  double tol = 0.0;
  unsigned parallel = 1;
  std::string family;
  int qubits = 0;
  std::size_t marked = 0;
  std::vector<double> tail;

  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_path, "JSON config or problem file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed for random problem families");
  app.add_option("--grid", grid_points, "Number of uniformly spaced s values");
  app.add_option("--T", runtimes, "Runtime (repeatable)");
  app.add_option("--dt", dt, "Integrator step");
  app.add_option("--k", ks, "Partial-sum order to report (repeatable)");
  app.add_option("--tol", tol, "Partial-sum comparison tolerance");
  app.add_option("--parallel", parallel, "Worker threads for sweeps");
  app.add_option("--family", family, "Built-in problem family")->check(CLI::IsMember({"grover", "random-int"}));
  app.add_option("--n", qubits, "Qubit count for --family");
  app.add_option("--marked", marked, "Marked label for the grover family");
  app.add_option("--tail", tail, "Tail window lo hi")->expected(2);
  app.add_flag("--full-k", "Report every k instead of the sparse default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream err;
    const int code = app.exit(e, log, err);
    log << err.str();
    return code == 0 ? 0 : 1;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (!family.empty()) {
      if (qubits < 1) throw ConfigError("--family requires --n");
      config.problem = {{"n", qubits}, {"cost", family}};
      if (family == "grover") config.problem["marked"] = marked;
    }
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--grid")) {
      if (grid_points < 2) throw ConfigError(fmt::format("--grid needs at least 2 points, got {}", grid_points));
      config.grid.clear();
      config.grid_points = static_cast<std::size_t>(grid_points);
    }
    if (!runtimes.empty()) config.T_list = runtimes;
    if (app.count("--dt")) config.dt = dt;
    if (!ks.empty()) config.k_list = ks;
    if (app.count("--tol")) config.tol = tol;
    if (app.count("--parallel")) config.parallel = parallel;
    if (app.count("--full-k")) config.full_k = true;
    if (tail.size() == 2) config.tail = {tail[0], tail[1]};
    config.out_dir = out_dir;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  }
  return run(command, config, log);
}

}  // namespace adiabatic
