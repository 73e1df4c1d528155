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

#ifndef MATRL_TRUST_STEP_HPP_
#define MATRL_TRUST_STEP_HPP_

#include <Eigen/Dense>

#include "matrl/evaluation.hpp"
#include "matrl/game_model.hpp"

namespace matrl {

struct TrustStepConfig {
  double delta = 0.1;           // max-over-states TV radius, in (0, 1]
  int inner_iterations = 20;    // 1..50
  double inner_step_size = 0.5;

  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Independent improvement direction for every agent, opponents frozen at
// `policy`. Projected gradient ascent on the (linear) surrogate with a
// per-state radial pullback onto the TV ball; the best iterate is kept, and
// an agent whose surrogate would come out negative keeps its current policy.
JointPolicy IidStep(const StochasticGame& game, const JointPolicy& policy,
                    const EvaluationReport& report,
                    const TrustStepConfig& config);

// Single agent version; returns the predicted (states x actions) component.
Eigen::MatrixXd IidStepAgent(const StochasticGame& game,
                             const JointPolicy& policy,
                             const EvaluationReport& report, int agent,
                             const TrustStepConfig& config);

// Differential variant: every block takes one projected gradient step of
// length min(inner_step_size, delta) in its improving direction.
Eigen::VectorXd IidStep(const DifferentialGame& game,
                        const Eigen::VectorXd& theta,
                        const TrustStepConfig& config);

}  // namespace matrl

#endif  // MATRL_TRUST_STEP_HPP_
