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

#ifndef MATRL_EXPERIMENTS_HPP_
#define MATRL_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "matrl/dynamics.hpp"
#include "matrl/game_model.hpp"

namespace matrl {

// ---------------------------------------------------------------------------
// Random 2x2 convergence sweep.

struct SweepConfig {
  int games_per_class = 1000;
  std::vector<GameClass> classes = {GameClass::kCoordination,
                                    GameClass::kAnticoordination,
                                    GameClass::kCyclic};
  std::vector<Method> methods = {Method::kIga, Method::kLookahead, Method::kMatrl};
  double step_size = 0.03;
  int max_iterations = 2000;
  double convergence_radius = 0.01;
  int window = 10;
  std::uint64_t seed_base = 0;
  // (p, q): probability of action 0 for each player.
  Eigen::Vector2d init{0.9, 0.2};
  TrustStepConfig trust;
  // 0: MATRL_THREADS if set, otherwise hardware concurrency.
  int threads = 0;

  void Validate() const;
};

struct ConvergenceCell {
  GameClass game_class = GameClass::kCyclic;
  Method method = Method::kIga;
  int games = 0;
  int converged = 0;
  double rate = 0.0;       // percent
  double rate_se = 0.0;    // binomial standard error, percent
  double mean_step = 0.0;  // over converged runs; NaN if none
  double std_step = 0.0;   // sample standard deviation; NaN if < 2 runs
};

struct ConvergenceStats {
  std::vector<ConvergenceCell> cells;
  const ConvergenceCell& Get(GameClass c, Method m) const;
};

struct GameRun {
  GameClass game_class;
  std::uint64_t seed;
  Method method;
  std::optional<int> converged_at;
};

struct SweepResult {
  ConvergenceStats stats;
  std::vector<GameRun> runs;  // ordered by class, seed, method
};

// Pure equilibria plus the interior mixed one, as (p, q) points.
std::vector<Eigen::Vector2d> NashEquilibria2x2(const MatrixGame& game);

// One game, one method, from config.init. Convergence: within radius of any
// equilibrium for `window` consecutive iterates.
std::optional<int> RunMatrixGame(const MatrixGame& game, Method method,
                                 const SweepConfig& config, std::uint64_t seed);

SweepResult SweepRandomGames(const SweepConfig& config);

// summary.csv-style output: class,method,games,converged,rate,rate_se,...
void WriteSweepSummary(const ConvergenceStats& stats,
                       const std::filesystem::path& path);
void WriteSweepRuns(const SweepResult& result, const std::filesystem::path& path);

// Reads a JSON document whose keys mirror SweepConfig field names.
SweepConfig LoadSweepConfig(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Differential-game dynamics.

struct DifferentialExperimentConfig {
  std::vector<Method> methods = {Method::kIga, Method::kExtragradient,
                                 Method::kLookahead, Method::kMatrl};
  double alpha = 0.02;
  Eigen::VectorXd init = Eigen::Vector2d(3.0, 2.0);
  int max_iterations = 5000;
  double tolerance = 1e-3;
  int window = 10;
  TrustStepConfig trust;
  std::uint64_t seed = 0;
};

// Trajectories on the rotational game; when out_dir is given, writes
// <method>.csv per method and summary.csv (method,converged_at,diverged,
// final_norm).
std::vector<Trajectory> RunDifferentialExperiment(
    const DifferentialExperimentConfig& config,
    const std::optional<std::filesystem::path>& out_dir);

void WriteTrajectoryCsv(const Trajectory& traj, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Tabular stochastic-game MATRL loop.

struct StochasticExperimentConfig {
  std::string game = "builtin:coin_gathering";
  int iterations = 200;
  StochasticStepConfig step;
};

struct StochasticRow {
  int iteration = 0;
  std::vector<double> eta;
  std::vector<double> rho;
  std::string classification;
};

struct StochasticExperimentResult {
  std::vector<StochasticRow> rows;
  JointPolicy final_policy;
  std::vector<double> final_eta;
};

// Starts from the uniform policy. Row k holds eta at policy k and the
// meta-Nash used to move from k to k+1.
StochasticExperimentResult RunStochasticExperiment(
    const StochasticGame& game, const StochasticExperimentConfig& config);

void WriteLearningCurve(const StochasticExperimentResult& result, int num_agents,
                        const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// SVG output.

enum class PlotKind { kTrajectory2d, kLearningCurve };
PlotKind ParsePlotKind(std::string_view name);

// One polyline per input file (trajectory_2d, label = file stem) or per eta_*
// column (learning_curve). Output bytes depend only on the input bytes.
std::string RenderPlot(const std::vector<std::filesystem::path>& inputs,
                       PlotKind kind);
void EmitPlot(const std::vector<std::filesystem::path>& inputs, PlotKind kind,
              const std::filesystem::path& output);

}  // namespace matrl

#endif  // MATRL_EXPERIMENTS_HPP_
