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

#include "matrl/trust_step.hpp"

#include <cmath>
#include <stdexcept>

#include "matrl/simplex.hpp"

namespace matrl {

void TrustStepConfig::Validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("TrustStepConfig.delta must lie in (0, 1]");
  }
  if (inner_iterations < 1 || inner_iterations > 50) {
    throw std::invalid_argument("TrustStepConfig.inner_iterations must lie in [1, 50]");
  }
  if (!(inner_step_size > 0.0) || !std::isfinite(inner_step_size)) {
    throw std::invalid_argument("TrustStepConfig.inner_step_size must be positive");
  }
}

Eigen::MatrixXd IidStepAgent(const StochasticGame& game,
                             const JointPolicy& policy,
                             const EvaluationReport& report, int agent,
                             const TrustStepConfig& config) {
  config.Validate();
  const Eigen::MatrixXd& base = policy.agent(agent);
  Eigen::MatrixXd grad = MarginalAdvantage(game, report, agent, policy);
  for (int s = 0; s < grad.rows(); ++s) grad.row(s) *= report.visitation[s];
  if (!grad.allFinite()) {
    throw std::domain_error("IidStep: non-finite surrogate gradient");
  }

  auto surrogate = [&](const Eigen::MatrixXd& x) {
    return ((x - base).array() * grad.array()).sum();
  };

  Eigen::MatrixXd x = base;
  Eigen::MatrixXd best = base;
  double best_val = 0.0;
  for (int it = 0; it < config.inner_iterations; ++it) {
    for (int s = 0; s < x.rows(); ++s) {
      if ((grad.row(s).array() == 0.0).all()) continue;
      Eigen::VectorXd row = ProjectToSimplex(
          (x.row(s) + config.inner_step_size * grad.row(s)).transpose());
      const Eigen::VectorXd center = base.row(s).transpose();
      const double tv = TotalVariation(row, center);
      if (tv > config.delta) {
        row = center + (config.delta / tv) * (row - center);
      }
      x.row(s) = row.transpose();
    }
    const double val = surrogate(x);
    if (val > best_val) {
      best_val = val;
      best = x;
    }
  }
  return best;
}

JointPolicy IidStep(const StochasticGame& game, const JointPolicy& policy,
                    const EvaluationReport& report,
                    const TrustStepConfig& config) {
  std::vector<Eigen::MatrixXd> predicted;
  for (int i = 0; i < game.NumAgents(); ++i) {
    predicted.push_back(IidStepAgent(game, policy, report, i, config));
  }
  // Re-check each unilateral deviation with the same arithmetic the meta-game
  // uses, so rounding can never make an entry negative.
  for (int i = 0; i < game.NumAgents(); ++i) {
    std::vector<Eigen::MatrixXd> cand = policy.agents();
    cand[i] = predicted[i];
    const double g = ExpectedAdvantage(game, report, JointPolicy(cand))[i];
    if (g < 0.0) predicted[i] = policy.agent(i);
  }
  return JointPolicy(std::move(predicted));
}

Eigen::VectorXd IidStep(const DifferentialGame& game,
                        const Eigen::VectorXd& theta,
                        const TrustStepConfig& config) {
  config.Validate();
  const double h = std::min(config.inner_step_size, config.delta);
  const double sign = game.objective() == Objective::kPayoff ? 1.0 : -1.0;
  Eigen::VectorXd out = theta;
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int off = game.BlockOffset(i), n = game.BlockSize(i);
    const Eigen::VectorXd g = game.Gradient(i, theta).segment(off, n);
    if (!g.allFinite()) throw std::domain_error("IidStep: non-finite gradient");
    out.segment(off, n) = theta.segment(off, n) + sign * h * g;
  }
  return game.Project(out);
}

}  // namespace matrl
