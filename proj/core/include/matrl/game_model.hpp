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

#ifndef MATRL_GAME_MODEL_HPP_
#define MATRL_GAME_MODEL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace matrl {

// Raised when a game or policy violates one of its structural invariants.
class InvalidGameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the descriptor loader. The message names the offending field.
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Random 2x2 game taxonomy (best-reply structure).
enum class GameClass { kCoordination, kAnticoordination, kCyclic, kOther };

std::string_view GameClassName(GameClass c);
// Accepts "coordination", "anticoordination", "cyclic", "other".
GameClass ParseGameClass(std::string_view name);

// ---------------------------------------------------------------------------
// Normal-form game. Payoff tensors are stored flat, agent 0 on the slowest
// axis: index = ((a0 * n1) + a1) * n2 + a2 ...
class MatrixGame {
 public:
  MatrixGame(std::vector<int> num_actions,
             std::vector<std::vector<double>> payoffs,
             std::optional<GameClass> label = std::nullopt);

  // Two-player convenience: row[a0][a1] is agent 0's payoff, col[a0][a1]
  // agent 1's.
  static MatrixGame TwoByTwo(const std::array<std::array<double, 2>, 2>& row,
                             const std::array<std::array<double, 2>, 2>& col,
                             std::optional<GameClass> label = std::nullopt);

  int NumAgents() const { return static_cast<int>(num_actions_.size()); }
  int NumActions(int agent) const { return num_actions_.at(agent); }
  const std::vector<int>& NumActionsPerAgent() const { return num_actions_; }
  int NumProfiles() const { return static_cast<int>(payoffs_.front().size()); }

  int ProfileIndex(std::span<const int> actions) const;
  double Payoff(int agent, std::span<const int> actions) const;
  double Payoff(int agent, int profile_index) const {
    return payoffs_.at(agent).at(profile_index);
  }
  // Only meaningful for two-player games.
  double Payoff2(int agent, int a0, int a1) const;

  bool IsTwoByTwo() const;
  const std::optional<GameClass>& label() const { return label_; }

 private:
  std::vector<int> num_actions_;
  std::vector<std::vector<double>> payoffs_;
  std::optional<GameClass> label_;
};

// Rejection-samples payoffs uniformly from [-1, 1] until the class predicate
// holds. Deterministic in (cls, seed). cls must not be kOther.
MatrixGame GenerateRandom2x2(GameClass cls, std::uint64_t seed);

// Pure-Nash count and location decide the label; throws InvalidGameError for
// games that are not two-player two-action.
GameClass Classify2x2(const MatrixGame& game);

// ---------------------------------------------------------------------------
// Smooth n-agent game over a concatenated real parameter vector. Each agent
// owns a contiguous block. Objectives are either losses (minimised) or
// payoffs (maximised); the sense is a property of the whole game.
enum class Objective { kLoss, kPayoff };

// eta(theta) = 0.5 theta' Q theta + b' theta + c, Q symmetric.
struct QuadraticForm {
  Eigen::MatrixXd curvature;
  Eigen::VectorXd linear;
  double constant = 0.0;
};

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

class DifferentialGame {
 public:
  using ValueFn = std::function<double(int agent, const Eigen::VectorXd&)>;
  using GradientFn =
      std::function<Eigen::VectorXd(int agent, const Eigen::VectorXd&)>;
  using HessianFn =
      std::function<Eigen::MatrixXd(int agent, const Eigen::VectorXd&)>;

  DifferentialGame(std::vector<int> block_sizes, Objective objective,
                   ValueFn value, GradientFn gradient, HessianFn hessian);

  int NumAgents() const { return static_cast<int>(block_sizes_.size()); }
  int NumParams() const { return num_params_; }
  int BlockOffset(int agent) const { return offsets_.at(agent); }
  int BlockSize(int agent) const { return block_sizes_.at(agent); }
  const std::vector<int>& BlockSizes() const { return block_sizes_; }
  Objective objective() const { return objective_; }

  // Objective of `agent` in its stated sense.
  double Value(int agent, const Eigen::VectorXd& theta) const;
  // Gradient of agent's objective with respect to the full parameter vector.
  Eigen::VectorXd Gradient(int agent, const Eigen::VectorXd& theta) const;
  Eigen::MatrixXd Hessian(int agent, const Eigen::VectorXd& theta) const;

  // Box constraints (e.g. mixed strategies of a 2x2 game live in [0,1]^2).
  void set_box(Box box);
  const std::optional<Box>& box() const { return box_; }
  Eigen::VectorXd Project(const Eigen::VectorXd& theta) const;

  void set_fixed_point(Eigen::VectorXd theta) { fixed_point_ = std::move(theta); }
  const std::optional<Eigen::VectorXd>& fixed_point() const {
    return fixed_point_;
  }

  // Present for games built by QuadraticGame.
  const std::vector<QuadraticForm>& quadratic_forms() const {
    return quadratic_;
  }

 private:
  friend DifferentialGame QuadraticGame(std::vector<int>,
                                        std::vector<QuadraticForm>, Objective);

  std::vector<int> block_sizes_;
  std::vector<int> offsets_;
  int num_params_ = 0;
  Objective objective_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::optional<Box> box_;
  std::optional<Eigen::VectorXd> fixed_point_;
  std::vector<QuadraticForm> quadratic_;
};

// Analytic gradient and Hessian from the quadratic coefficients. The curvature
// matrices are symmetrised.
DifferentialGame QuadraticGame(std::vector<int> block_sizes,
                               std::vector<QuadraticForm> forms,
                               Objective objective);

// Two scalar agents with losses
//   eta_0 = 0.5 x^2 + 10 x y,   eta_1 = 0.5 y^2 - 10 x y.
// Fixed point at the origin.
DifferentialGame RotationalGame();

// Mixed-strategy extension of a 2x2 matrix game: theta = (p, q) with p the
// probability agent 0 plays action 0 and q the same for agent 1; payoffs
// are the expected matrix payoffs, theta is boxed to [0,1]^2.
DifferentialGame BilinearGame(const MatrixGame& game);

// ---------------------------------------------------------------------------
// Finite discounted n-agent Markov game. Joint actions are flattened with
// agent 0 on the slowest axis.
class StochasticGame {
 public:
  struct Spec {
    std::vector<std::string> state_names;
    std::vector<std::vector<std::string>> action_names;  // per agent
    // transition[s][joint] is a distribution over next states.
    std::vector<std::vector<std::vector<double>>> transition;
    // reward[agent][s][joint].
    std::vector<std::vector<std::vector<double>>> reward;
    double gamma = 0.9;
    std::vector<double> p0;
  };

  // Validates every invariant; throws LoadError naming the field.
  explicit StochasticGame(Spec spec);

  int NumAgents() const { return static_cast<int>(spec_.action_names.size()); }
  int NumStates() const { return static_cast<int>(spec_.state_names.size()); }
  int NumActions(int agent) const {
    return static_cast<int>(spec_.action_names.at(agent).size());
  }
  const std::vector<int>& NumActionsPerAgent() const { return num_actions_; }
  int NumJointActions() const { return num_joint_; }
  double gamma() const { return spec_.gamma; }
  const std::vector<double>& p0() const { return spec_.p0; }
  const std::vector<std::string>& StateNames() const { return spec_.state_names; }
  const std::vector<std::string>& ActionNames(int agent) const {
    return spec_.action_names.at(agent);
  }

  double Transition(int s, int joint, int next) const {
    return spec_.transition[s][joint][next];
  }
  const std::vector<double>& TransitionRow(int s, int joint) const {
    return spec_.transition[s][joint];
  }
  double Reward(int agent, int s, int joint) const {
    return spec_.reward[agent][s][joint];
  }

  int JointIndex(std::span<const int> actions) const;
  // Writes agent actions of `joint` into out (size NumAgents()).
  void DecodeJoint(int joint, std::span<int> out) const;
  int StateIndex(std::string_view name) const;

 private:
  Spec spec_;
  std::vector<int> num_actions_;
  int num_joint_ = 1;
};

// Single-state embedding with a self-loop; eta_i = r_i / (1 - gamma).
StochasticGame MatrixGameToStochastic(const MatrixGame& game, double gamma);

// JSON descriptor. Top-level keys: agents, states, actions, gamma, p0,
// transitions [{state, joint_action, next_state_probs}],
// rewards [{agent, state, joint_action, value}]. next_state_probs is either
// a list aligned with `states` or an object keyed by state name. Missing
// reward records default to 0; every (state, joint action) needs a
// transition record.
StochasticGame LoadStochasticGame(std::string_view descriptor);
StochasticGame LoadStochasticGameFile(const std::filesystem::path& path);

// Built-in descriptors.
std::string_view CoinGatheringDescriptor();
std::string_view PrisonersDilemmaDescriptor();
// "builtin:coin_gathering", "builtin:prisoners_dilemma" or a file path.
StochasticGame LoadStochasticGameByName(std::string_view name_or_path);

// ---------------------------------------------------------------------------
// Tabular joint policy: one (states x actions) row-stochastic matrix per
// agent.
class JointPolicy {
 public:
  JointPolicy() = default;
  explicit JointPolicy(std::vector<Eigen::MatrixXd> per_agent);

  static JointPolicy Uniform(const StochasticGame& game);

  int NumAgents() const { return static_cast<int>(agents_.size()); }
  const Eigen::MatrixXd& agent(int i) const { return agents_.at(i); }
  Eigen::MatrixXd& mutable_agent(int i) { return agents_.at(i); }
  const std::vector<Eigen::MatrixXd>& agents() const { return agents_; }

  // Product of per-agent probabilities of the decoded joint action.
  double JointProbability(const StochasticGame& game, int state,
                          int joint) const;

  // Throws InvalidGameError if any row leaves the simplex by more than tol,
  // or if shapes do not match the game (when given).
  void Validate(double tol = 1e-12) const;
  void ValidateFor(const StochasticGame& game, double tol = 1e-12) const;

 private:
  std::vector<Eigen::MatrixXd> agents_;
};

}  // namespace matrl

#endif  // MATRL_GAME_MODEL_HPP_
