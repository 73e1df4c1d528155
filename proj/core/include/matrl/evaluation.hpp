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

#ifndef MATRL_EVALUATION_HPP_
#define MATRL_EVALUATION_HPP_

#include <vector>

#include <Eigen/Dense>

#include "matrl/game_model.hpp"

namespace matrl {

// Exact evaluation of a joint policy. q and advantage are (states x joint
// actions) per agent; visitation is the unnormalised discounted occupancy
// sum_t gamma^t Pr(s_t = s), totalling 1 / (1 - gamma).
struct EvaluationReport {
  JointPolicy policy;
  double gamma = 0.0;
  std::vector<double> eta;
  std::vector<Eigen::VectorXd> value;
  std::vector<Eigen::MatrixXd> q;
  std::vector<Eigen::MatrixXd> advantage;
  Eigen::VectorXd visitation;
};

// Direct LU solves of the Bellman and discounted-flow systems. Aborts with
// std::logic_error if the system is singular.
EvaluationReport Evaluate(const StochasticGame& game, const JointPolicy& policy);

// (states x own actions) matrix sum_{a_-i} pi_-i(a_-i|s) A_i(s, a_i, a_-i),
// with opponents drawn from `opponents` (agent's own component ignored).
Eigen::MatrixXd MarginalAdvantage(const StochasticGame& game,
                                  const EvaluationReport& report, int agent,
                                  const JointPolicy& opponents);

// g_i = sum_s d(s) sum_a candidate(a|s) A_i(s,a) for every agent, evaluated
// as sum_a (candidate - base)(a|s) A_i(s,a) so that candidate == base gives
// exactly zero.
std::vector<double> ExpectedAdvantage(const StochasticGame& game,
                                      const EvaluationReport& report,
                                      const JointPolicy& candidate);

// max_s TV(p(.|s), q(.|s)).
double TvAlpha(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

// max over all (state, joint action) of |A_i|.
double EpsilonMaxAdv(const EvaluationReport& report, int agent);

// g - 4 gamma eps / (1-gamma)^2 * (a_i + a_j - a_i a_j)^2.
double IidLowerBound(double g, double eps, double gamma, double alpha_i,
                     double alpha_j);

// Same penalty with alpha scaled by (1 - rho) per agent.
double MixtureLowerBound(double g, double eps, double gamma, double alpha_i,
                         double alpha_j, double rho_i, double rho_j);

}  // namespace matrl

#endif  // MATRL_EVALUATION_HPP_
