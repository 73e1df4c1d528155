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

#ifndef MATRL_DYNAMICS_HPP_
#define MATRL_DYNAMICS_HPP_

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "matrl/evaluation.hpp"
#include "matrl/game_model.hpp"
#include "matrl/metagame.hpp"
#include "matrl/trust_step.hpp"

namespace matrl {

enum class Method { kIga, kLookahead, kExtragradient, kMatrl };

std::string_view MethodName(Method m);
// Accepts iga, lookahead (or iga_la, la), extragradient (or eg), matrl.
Method ParseMethod(std::string_view name);

enum class WeightPolicy { kFixed, kFromMetaNash };

struct DynamicsConfig {
  Method method = Method::kIga;
  double step_size = 0.02;
  int max_iterations = 5000;
  double tolerance = 1e-3;
  int window = 10;
  WeightPolicy weight_policy = WeightPolicy::kFromMetaNash;
  double fixed_weight = 1.0;
  TrustStepConfig trust;  // prediction step for the meta-Nash pipeline
  // Convergence targets; empty means the game's fixed point.
  std::vector<Eigen::VectorXd> targets;
  double divergence_bound = 1e6;
  bool record = true;
  bool stop_on_convergence = true;

  void Validate() const;
};

struct TrajectoryRecord {
  int iteration = 0;
  Eigen::VectorXd theta;
  double grad_norm = 0.0;
  std::vector<double> payoffs;
};

// records[k] holds theta_k for k = 0..last; empty when max_iterations == 0.
struct Trajectory {
  std::string method;
  std::vector<TrajectoryRecord> records;
  std::optional<int> converged_at;
  bool diverged = false;
  int iterations_run = 0;
  Eigen::VectorXd final_theta;
};

// Own-block gradients of each agent's objective in its stated sense.
Eigen::VectorXd SimultaneousGradient(const DifferentialGame& game,
                                     const Eigen::VectorXd& theta);

struct GameHessian {
  Eigen::MatrixXd h;    // rows: d xi_j / d theta, stated sense
  Eigen::MatrixXd h_o;  // h with the diagonal blocks zeroed
  std::vector<int> block_sizes;
  Objective objective = Objective::kLoss;

  // Hessian of the loss-form simultaneous gradient.
  Eigen::MatrixXd LossH() const;
  Eigen::MatrixXd LossHo() const;
};

GameHessian ComputeGameHessian(const DifferentialGame& game,
                               const Eigen::VectorXd& theta);

// Direction d with theta' = theta - alpha d (loss form). kExtragradient is
// not a linear direction and is rejected.
Eigen::VectorXd UpdateDirection(Method method, const Eigen::VectorXd& xi,
                                const Eigen::MatrixXd& h_o, double alpha,
                                double w);

struct MatrlDifferentialStep {
  Eigen::VectorXd theta_next;
  Eigen::VectorXd predicted;
  Eigen::VectorXd aggregated;
  NashProfile nash;
};

// Prediction with TrustStepConfig, payoff-difference meta-game, meta-Nash,
// mixture, then a best-response gradient step of length alpha from theta_i
// against the mixed opponents.
MatrlDifferentialStep MatrlStepDifferential(const DifferentialGame& game,
                                            const Eigen::VectorXd& theta,
                                            double alpha,
                                            const TrustStepConfig& trust,
                                            std::uint64_t seed);

struct StochasticStepConfig {
  TrustStepConfig trust;
  double br_lr = 0.03;
  int br_iterations = 10;
  std::uint64_t seed = 0;
};

struct MatrlStochasticStep {
  JointPolicy policy_next;
  JointPolicy predicted;
  JointPolicy aggregated;
  MetaGame meta;
  NashProfile nash;
  EvaluationReport report;  // at the input policy
};

MatrlStochasticStep MatrlStepStochastic(const StochasticGame& game,
                                        const JointPolicy& policy,
                                        const StochasticStepConfig& config);

// Projected gradient ascent on eta_i(., target_-i) from target_i, halving the
// rate whenever a step would lower eta_i. With max_tv set, every iterate
// stays within that TV radius of target_i.
Eigen::MatrixXd BestResponse(const StochasticGame& game,
                             const JointPolicy& target, int agent, double lr,
                             int iterations,
                             std::optional<double> max_tv = std::nullopt);

// min(1 + c_bar, max(1 - c_bar, pi / pi_bar)).
double TruncatedImportanceWeight(double pi, double pi_bar, double c_bar);

struct ConvergenceCheck {
  bool contractive = false;
  std::vector<std::complex<double>> eigenvalues;  // of -(I - w alpha H_o) H
  double max_modulus = 0.0;                       // max |1 + alpha lambda|
};

// Linearised update theta' = theta - alpha (I - w alpha H_o) H theta, loss form.
ConvergenceCheck LocalConvergenceCheck(const GameHessian& hessian, double alpha,
                                       double w);

Trajectory RunDynamics(const DifferentialGame& game, const DynamicsConfig& config,
                       const Eigen::VectorXd& init, std::uint64_t seed);

// splitmix64 finaliser, used to derive per-iteration seeds.
std::uint64_t MixSeed(std::uint64_t x);

}  // namespace matrl

#endif  // MATRL_DYNAMICS_HPP_
