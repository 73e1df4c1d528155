// Copyright 2026 The MATRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matrl/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "matrl/csv.hpp"
#include "matrl/evaluation.hpp"

namespace matrl {
namespace {

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MATRL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void SweepConfig::Validate() const {
  if (games_per_class < 1) throw std::invalid_argument("games_per_class must be >= 1");
  if (!(convergence_radius > 0.0)) {
    throw std::invalid_argument("convergence_radius must be positive");
  }
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  for (GameClass c : classes) {
    if (c == GameClass::kOther) throw std::invalid_argument("sweep classes exclude 'other'");
  }
  for (Method m : methods) {
    if (m == Method::kExtragradient) {
      throw std::invalid_argument("sweep methods are iga, iga_la and matrl");
    }
  }
  trust.Validate();
}

const ConvergenceCell& ConvergenceStats::Get(GameClass c, Method m) const {
  for (const auto& cell : cells) {
    if (cell.game_class == c && cell.method == m) return cell;
  }
  throw std::out_of_range("no statistics for " + std::string(GameClassName(c)) +
                          "/" + std::string(MethodName(m)));
}

std::vector<Eigen::Vector2d> NashEquilibria2x2(const MatrixGame& game) {
  if (!game.IsTwoByTwo()) {
    throw InvalidGameError("NashEquilibria2x2 requires a 2x2 game");
  }
  std::vector<Eigen::Vector2d> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (game.Payoff2(0, a, b) >= game.Payoff2(0, 1 - a, b) &&
          game.Payoff2(1, a, b) >= game.Payoff2(1, a, 1 - b)) {
        out.emplace_back(a == 0 ? 1.0 : 0.0, b == 0 ? 1.0 : 0.0);
      }
    }
  }
  const double c0 = game.Payoff2(0, 0, 0) - game.Payoff2(0, 0, 1) -
                    game.Payoff2(0, 1, 0) + game.Payoff2(0, 1, 1);
  const double c1 = game.Payoff2(1, 0, 0) - game.Payoff2(1, 0, 1) -
                    game.Payoff2(1, 1, 0) + game.Payoff2(1, 1, 1);
  if (c0 != 0.0 && c1 != 0.0) {
    // Agent 0 is indifferent at q*, agent 1 at p*.
    const double q = -(game.Payoff2(0, 0, 1) - game.Payoff2(0, 1, 1)) / c0;
    const double p = -(game.Payoff2(1, 1, 0) - game.Payoff2(1, 1, 1)) / c1;
    if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) out.emplace_back(p, q);
  }
  return out;
}

std::optional<int> RunMatrixGame(const MatrixGame& game, Method method,
                                 const SweepConfig& config, std::uint64_t seed) {
  const DifferentialGame dg = BilinearGame(game);
  DynamicsConfig dc;
  dc.method = method;
  dc.step_size = config.step_size;
  dc.max_iterations = config.max_iterations;
  dc.tolerance = config.convergence_radius;
  dc.window = config.window;
  dc.weight_policy = WeightPolicy::kFromMetaNash;
  dc.trust = config.trust;
  for (const auto& ne : NashEquilibria2x2(game)) dc.targets.push_back(ne);
  dc.record = false;
  return RunDynamics(dg, dc, config.init, seed).converged_at;
}

SweepResult SweepRandomGames(const SweepConfig& config) {
  config.Validate();
  const int nc = static_cast<int>(config.classes.size());
  const int nm = static_cast<int>(config.methods.size());
  const int ng = config.games_per_class;
  const int tasks = nc * ng;

  std::vector<std::optional<int>> steps(static_cast<size_t>(tasks) * nm);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(tasks);
  auto worker = [&]() {
    for (int t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
      try {
        const GameClass cls = config.classes[t / ng];
        const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(t % ng);
        const MatrixGame game = GenerateRandom2x2(cls, seed);
        for (int m = 0; m < nm; ++m) {
          steps[static_cast<size_t>(t) * nm + m] =
              RunMatrixGame(game, config.methods[m], config, MixSeed(seed));
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(ResolveThreads(config.threads), std::max(1, tasks));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  for (int c = 0; c < nc; ++c) {
    for (int m = 0; m < nm; ++m) {
      ConvergenceCell cell;
      cell.game_class = config.classes[c];
      cell.method = config.methods[m];
      cell.games = ng;
      double sum = 0.0;
      std::vector<double> vals;
      for (int g = 0; g < ng; ++g) {
        const auto& s = steps[static_cast<size_t>(c * ng + g) * nm + m];
        if (s) {
          vals.push_back(*s);
          sum += *s;
        }
      }
      cell.converged = static_cast<int>(vals.size());
      const double p = static_cast<double>(cell.converged) / ng;
      cell.rate = 100.0 * p;
      cell.rate_se = 100.0 * std::sqrt(p * (1.0 - p) / ng);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      cell.mean_step = vals.empty() ? nan : sum / vals.size();
      if (vals.size() >= 2) {
        double ss = 0.0;
        for (double v : vals) ss += (v - cell.mean_step) * (v - cell.mean_step);
        cell.std_step = std::sqrt(ss / (vals.size() - 1));
      } else {
        cell.std_step = nan;
      }
      result.stats.cells.push_back(cell);
    }
    for (int g = 0; g < ng; ++g) {
      for (int m = 0; m < nm; ++m) {
        result.runs.push_back({config.classes[c], config.seed_base + g,
                               config.methods[m],
                               steps[static_cast<size_t>(c * ng + g) * nm + m]});
      }
    }
  }
  return result;
}

void WriteSweepSummary(const ConvergenceStats& stats,
                       const std::filesystem::path& path) {
  CsvWriter w(path);
  w.Row({"class", "method", "games", "converged", "rate", "rate_se", "mean_step",
         "std_step"});
  for (const auto& c : stats.cells) {
    w.Row({std::string(GameClassName(c.game_class)), std::string(MethodName(c.method)),
           std::to_string(c.games), std::to_string(c.converged), FormatDouble(c.rate),
           FormatDouble(c.rate_se),
           std::isfinite(c.mean_step) ? FormatDouble(c.mean_step) : "",
           std::isfinite(c.std_step) ? FormatDouble(c.std_step) : ""});
  }
}

void WriteSweepRuns(const SweepResult& result, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.Row({"class", "seed", "method", "converged_at"});
  for (const auto& r : result.runs) {
    w.Row({std::string(GameClassName(r.game_class)), std::to_string(r.seed),
           std::string(MethodName(r.method)),
           r.converged_at ? std::to_string(*r.converged_at) : "-1"});
  }
}

SweepConfig LoadSweepConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  SweepConfig c;
  try {
    if (doc.contains("games_per_class")) c.games_per_class = doc["games_per_class"].get<int>();
    if (doc.contains("classes")) {
      c.classes.clear();
      for (const auto& v : doc["classes"]) c.classes.push_back(ParseGameClass(v.get<std::string>()));
    }
    if (doc.contains("methods")) {
      c.methods.clear();
      for (const auto& v : doc["methods"]) c.methods.push_back(ParseMethod(v.get<std::string>()));
    }
    if (doc.contains("step_size")) c.step_size = doc["step_size"].get<double>();
    if (doc.contains("max_iterations")) c.max_iterations = doc["max_iterations"].get<int>();
    if (doc.contains("convergence_radius")) {
      c.convergence_radius = doc["convergence_radius"].get<double>();
    }
    if (doc.contains("window")) c.window = doc["window"].get<int>();
    if (doc.contains("seed_base")) c.seed_base = doc["seed_base"].get<std::uint64_t>();
    if (doc.contains("delta")) c.trust.delta = doc["delta"].get<double>();
    if (doc.contains("threads")) c.threads = doc["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  c.Validate();
  return c;
}

// ---------------------------------------------------------------------------

void WriteTrajectoryCsv(const Trajectory& traj, const std::filesystem::path& path) {
  CsvWriter w(path);
  const int dim = traj.records.empty() ? static_cast<int>(traj.final_theta.size())
                                       : static_cast<int>(traj.records[0].theta.size());
  const int agents = traj.records.empty() ? 0 : static_cast<int>(traj.records[0].payoffs.size());
  std::vector<std::string> header{"iteration"};
  for (int k = 0; k < dim; ++k) header.push_back("theta_" + std::to_string(k));
  header.push_back("grad_norm");
  for (int i = 0; i < agents; ++i) header.push_back("payoff_" + std::to_string(i));
  w.Row(header);
  for (const auto& r : traj.records) {
    std::vector<std::string> row{std::to_string(r.iteration)};
    for (int k = 0; k < dim; ++k) row.push_back(FormatDouble(r.theta[k]));
    row.push_back(FormatDouble(r.grad_norm));
    for (double v : r.payoffs) row.push_back(FormatDouble(v));
    w.Row(row);
  }
}

std::vector<Trajectory> RunDifferentialExperiment(
    const DifferentialExperimentConfig& config,
    const std::optional<std::filesystem::path>& out_dir) {
  const DifferentialGame game = RotationalGame();
  std::vector<Trajectory> out;
  for (Method m : config.methods) {
    DynamicsConfig dc;
    dc.method = m;
    dc.step_size = config.alpha;
    dc.max_iterations = config.max_iterations;
    dc.tolerance = config.tolerance;
    dc.window = config.window;
    dc.trust = config.trust;
    dc.stop_on_convergence = false;
    out.push_back(RunDynamics(game, dc, config.init, config.seed));
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (const auto& t : out) WriteTrajectoryCsv(t, *out_dir / (t.method + ".csv"));
    CsvWriter w(*out_dir / "summary.csv");
    w.Row({"method", "converged_at", "diverged", "final_norm"});
    for (const auto& t : out) {
      w.Row({t.method, t.converged_at ? std::to_string(*t.converged_at) : "-1",
             t.diverged ? "1" : "0", FormatDouble(t.final_theta.norm())});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

StochasticExperimentResult RunStochasticExperiment(
    const StochasticGame& game, const StochasticExperimentConfig& config) {
  if (config.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  StochasticExperimentResult res;
  JointPolicy policy = JointPolicy::Uniform(game);
  for (int k = 0; k < config.iterations; ++k) {
    StochasticStepConfig sc = config.step;
    sc.seed = MixSeed(config.step.seed ^ static_cast<std::uint64_t>(k));
    MatrlStochasticStep step = MatrlStepStochastic(game, policy, sc);
    StochasticRow row;
    row.iteration = k;
    row.eta = step.report.eta;
    row.rho = step.nash.rho;
    row.classification =
        game.NumAgents() == 2
            ? std::string(FixedPointClassName(step.nash.fixed_point.label))
            : std::string(FixedPointClassName(FixedPointClass::kUnclassified));
    res.rows.push_back(std::move(row));
    policy = std::move(step.policy_next);
  }
  res.final_eta = Evaluate(game, policy).eta;
  res.final_policy = std::move(policy);
  return res;
}

void WriteLearningCurve(const StochasticExperimentResult& result, int num_agents,
                        const std::filesystem::path& path) {
  CsvWriter w(path);
  std::vector<std::string> header{"iteration"};
  for (int i = 0; i < num_agents; ++i) header.push_back("eta_" + std::to_string(i));
  for (int i = 0; i < num_agents; ++i) header.push_back("rho_" + std::to_string(i));
  header.push_back("classification");
  w.Row(header);
  for (const auto& r : result.rows) {
    std::vector<std::string> row{std::to_string(r.iteration)};
    for (double v : r.eta) row.push_back(FormatDouble(v));
    for (double v : r.rho) row.push_back(FormatDouble(v));
    row.push_back(r.classification);
    w.Row(row);
  }
}

}  // namespace matrl
