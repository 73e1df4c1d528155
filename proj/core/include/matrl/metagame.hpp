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

#ifndef MATRL_METAGAME_HPP_
#define MATRL_METAGAME_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "matrl/evaluation.hpp"
#include "matrl/game_model.hpp"

namespace matrl {

inline constexpr int kMaxMetaAgents = 12;

// Two-strategy meta-game. Profiles are bitmasks: bit i set means agent i
// plays its predicted policy, clear means it stays on its current one.
class MetaGame {
 public:
  // payoff[agent][profile], 2^n entries per agent.
  explicit MetaGame(std::vector<std::vector<double>> payoff);

  int NumAgents() const { return num_agents_; }
  int NumProfiles() const { return 1 << num_agents_; }
  double Payoff(int agent, unsigned profile) const {
    return payoff_[agent][profile];
  }
  const std::vector<std::vector<double>>& payoff() const { return payoff_; }

  // Human-readable tensor listing, used in failure diagnostics.
  std::string Dump() const;

 private:
  int num_agents_;
  std::vector<std::vector<double>> payoff_;
};

enum class FixedPointClass { kStable, kSaddle, kUnstableWarning, kUnclassified };

std::string_view FixedPointClassName(FixedPointClass c);

struct FixedPointReport {
  FixedPointClass label = FixedPointClass::kUnclassified;
  std::array<double, 2> g_bar{0.0, 0.0};
  std::array<std::complex<double>, 2> eigenvalues{};
};

struct NashProfile {
  std::vector<double> rho;     // weight on the current policy
  std::vector<bool> is_pure;
  bool boundary = false;       // any rho in {0, 1}
  int num_pure_equilibria = 0;
  FixedPointReport fixed_point;  // only filled for two agents
};

// Entries by ExpectedAdvantage on every current/predicted mixture.
MetaGame BuildMetaGame(const StochasticGame& game, const JointPolicy& base,
                       const JointPolicy& predicted,
                       const EvaluationReport& report);

// All pure equilibria (weak inequalities, slack 1e-12) as profile masks.
std::vector<unsigned> PureEquilibria(const MetaGame& meta);

// Pure search first; a seeded uniform pick among several equilibria; the
// all-zero game returns all-current. Two agents without a pure equilibrium
// fall back to the closed-form mixed equilibrium. Throws std::runtime_error
// with the tensor dump when nothing is found.
NashProfile SolveNash(const MetaGame& meta, std::uint64_t seed);

// Expected meta-payoff of `agent` when every agent j plays current with
// probability rho[j].
double MetaPayoff(const MetaGame& meta, int agent, const std::vector<double>& rho);

// Largest gain each agent could get by a unilateral pure deviation.
std::vector<double> DeviationGains(const MetaGame& meta,
                                   const std::vector<double>& rho);

JointPolicy AggregatePolicies(const std::vector<double>& rho,
                              const JointPolicy& base,
                              const JointPolicy& predicted);

Eigen::VectorXd AggregateParameters(const DifferentialGame& game,
                                    const std::vector<double>& rho,
                                    const Eigen::VectorXd& base,
                                    const Eigen::VectorXd& predicted);

// (d g_0 / d rho_0, d g_1 / d rho_1) of the bilinear two-agent meta-payoff.
std::pair<double, double> RestrictedGradient(const MetaGame& meta, double rho_0,
                                             double rho_1);

FixedPointReport ClassifyFixedPoint(const MetaGame& meta);

}  // namespace matrl

#endif  // MATRL_METAGAME_HPP_
