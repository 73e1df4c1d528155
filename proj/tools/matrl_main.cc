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

// Command-line front end: sweep, differential, stochastic, plot.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matrl/csv.hpp"
#include "matrl/experiments.hpp"

namespace {

std::vector<std::string> SplitCommas(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    size_t start = 0;
    while (start <= s.size()) {
      const size_t pos = s.find(',', start);
      const std::string item = s.substr(start, pos - start);
      if (!item.empty()) out.push_back(item);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return out;
}

std::string Num(double v) { return matrl::FormatDouble(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrl: trust-region multi-agent learning experiments"};
  app.require_subcommand(1);

  // sweep ------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "random 2x2 convergence sweep");
  std::string sweep_config;
  std::vector<std::string> sweep_classes, sweep_methods;
  int games = 0, sweep_iters = 0, threads = 0;
  double step = 0, radius = 0, sweep_delta = 0;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out = "sweep_out";
  sweep->add_option("--config", sweep_config, "JSON file with SweepConfig fields");
  auto* o_classes = sweep->add_option("--classes", sweep_classes,
                                      "coordination,anticoordination,cyclic");
  auto* o_methods = sweep->add_option("--methods", sweep_methods, "iga,iga_la,matrl");
  auto* o_games = sweep->add_option("--games-per-class", games);
  auto* o_step = sweep->add_option("--step-size", step);
  auto* o_iters = sweep->add_option("--max-iters", sweep_iters);
  auto* o_radius = sweep->add_option("--radius", radius);
  auto* o_seed = sweep->add_option("--seed", sweep_seed, "seed_base");
  auto* o_delta = sweep->add_option("--delta", sweep_delta, "MATRL prediction radius");
  auto* o_threads = sweep->add_option("--threads", threads, "overrides MATRL_THREADS");
  sweep->add_option("--out", sweep_out, "output directory");

  // differential -----------------------------------------------------------
  auto* diff = app.add_subcommand("differential", "rotational differential game dynamics");
  std::vector<std::string> diff_methods;
  matrl::DifferentialExperimentConfig dcfg;
  std::vector<double> init;
  std::string diff_out = "differential_out";
  diff->add_option("--methods", diff_methods, "iga,extragradient,lookahead,matrl");
  diff->add_option("--alpha", dcfg.alpha);
  diff->add_option("--init", init, "two values")->expected(2);
  diff->add_option("--max-iters", dcfg.max_iterations);
  diff->add_option("--delta", dcfg.trust.delta, "MATRL prediction radius");
  diff->add_option("--seed", dcfg.seed);
  diff->add_option("--out", diff_out, "output directory");

  // stochastic -------------------------------------------------------------
  auto* stoch = app.add_subcommand("stochastic", "tabular stochastic-game MATRL loop");
  matrl::StochasticExperimentConfig scfg;
  std::string stoch_out = "learning_curve.csv";
  stoch->add_option("--game", scfg.game,
                    "descriptor path, builtin:coin_gathering or builtin:prisoners_dilemma");
  stoch->add_option("--iters", scfg.iterations);
  stoch->add_option("--delta", scfg.step.trust.delta);
  stoch->add_option("--br-lr", scfg.step.br_lr);
  stoch->add_option("--br-iters", scfg.step.br_iterations);
  stoch->add_option("--seed", scfg.step.seed);
  stoch->add_option("--out", stoch_out, "learning-curve CSV");

  // plot -------------------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "render CSV output as SVG");
  std::vector<std::string> plot_inputs;
  std::string kind = "trajectory_2d", plot_out = "plot.svg";
  plot->add_option("--input", plot_inputs, "one or more CSV files")->required();
  plot->add_option("--kind", kind, "trajectory_2d or learning_curve");
  plot->add_option("--out", plot_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      matrl::SweepConfig c;
      if (!sweep_config.empty()) c = matrl::LoadSweepConfig(sweep_config);
      if (o_classes->count()) {
        c.classes.clear();
        for (const auto& s : SplitCommas(sweep_classes)) c.classes.push_back(matrl::ParseGameClass(s));
      }
      if (o_methods->count()) {
        c.methods.clear();
        for (const auto& s : SplitCommas(sweep_methods)) c.methods.push_back(matrl::ParseMethod(s));
      }
      if (o_games->count()) c.games_per_class = games;
      if (o_step->count()) c.step_size = step;
      if (o_iters->count()) c.max_iterations = sweep_iters;
      if (o_radius->count()) c.convergence_radius = radius;
      if (o_seed->count()) c.seed_base = sweep_seed;
      if (o_delta->count()) c.trust.delta = sweep_delta;
      if (o_threads->count()) c.threads = threads;
      const matrl::SweepResult r = matrl::SweepRandomGames(c);
      std::filesystem::create_directories(sweep_out);
      matrl::WriteSweepSummary(r.stats, std::filesystem::path(sweep_out) / "summary.csv");
      matrl::WriteSweepRuns(r, std::filesystem::path(sweep_out) / "runs.csv");
      for (const auto& cell : r.stats.cells) {
        std::cout << matrl::GameClassName(cell.game_class) << " "
                  << matrl::MethodName(cell.method) << ": rate " << Num(cell.rate)
                  << "% (se " << Num(cell.rate_se) << "), mean step "
                  << Num(cell.mean_step) << " (std " << Num(cell.std_step) << ")\n";
      }
    } else if (diff->parsed()) {
      if (!diff_methods.empty()) {
        dcfg.methods.clear();
        for (const auto& s : SplitCommas(diff_methods)) dcfg.methods.push_back(matrl::ParseMethod(s));
      }
      if (!init.empty()) dcfg.init = Eigen::Vector2d(init[0], init[1]);
      const auto trajs = matrl::RunDifferentialExperiment(dcfg, std::filesystem::path(diff_out));
      for (const auto& t : trajs) {
        std::cout << t.method << ": converged_at "
                  << (t.converged_at ? std::to_string(*t.converged_at) : "never")
                  << ", final |theta| " << Num(t.final_theta.norm()) << "\n";
      }
    } else if (stoch->parsed()) {
      const matrl::StochasticGame game = matrl::LoadStochasticGameByName(scfg.game);
      const auto res = matrl::RunStochasticExperiment(game, scfg);
      matrl::WriteLearningCurve(res, game.NumAgents(), stoch_out);
      std::cout << "final eta:";
      for (double v : res.final_eta) std::cout << " " << Num(v);
      std::cout << "\n";
    } else if (plot->parsed()) {
      std::vector<std::filesystem::path> inputs(plot_inputs.begin(), plot_inputs.end());
      matrl::EmitPlot(inputs, matrl::ParsePlotKind(kind), plot_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
