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

#include "matrl/game_model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

namespace matrl {
namespace {

constexpr double kSimplexTol = 1e-12;

std::string JointLabel(const StochasticGame::Spec& spec, int joint) {
  std::vector<int> sizes;
  for (const auto& a : spec.action_names) sizes.push_back(a.size());
  std::vector<int> acts(sizes.size());
  for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
    acts[i] = joint % sizes[i];
    joint /= sizes[i];
  }
  std::string out = "(";
  for (size_t i = 0; i < acts.size(); ++i) {
    if (i) out += ",";
    out += spec.action_names[i][acts[i]];
  }
  return out + ")";
}

void CheckFinite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw LoadError(field, "non-finite value");
}

}  // namespace

std::string_view GameClassName(GameClass c) {
  switch (c) {
    case GameClass::kCoordination:
      return "coordination";
    case GameClass::kAnticoordination:
      return "anticoordination";
    case GameClass::kCyclic:
      return "cyclic";
    case GameClass::kOther:
      return "other";
  }
  return "other";
}

GameClass ParseGameClass(std::string_view name) {
  if (name == "coordination") return GameClass::kCoordination;
  if (name == "anticoordination") return GameClass::kAnticoordination;
  if (name == "cyclic") return GameClass::kCyclic;
  if (name == "other") return GameClass::kOther;
  throw std::invalid_argument("unknown game class: " + std::string(name));
}

// --- MatrixGame -------------------------------------------------------------

MatrixGame::MatrixGame(std::vector<int> num_actions,
                       std::vector<std::vector<double>> payoffs,
                       std::optional<GameClass> label)
    : num_actions_(std::move(num_actions)),
      payoffs_(std::move(payoffs)),
      label_(label) {
  if (num_actions_.empty()) throw InvalidGameError("matrix game needs agents");
  int profiles = 1;
  for (int n : num_actions_) {
    if (n < 1) throw InvalidGameError("action count must be positive");
    profiles *= n;
  }
  if (payoffs_.size() != num_actions_.size()) {
    throw InvalidGameError("one payoff tensor per agent required");
  }
  for (const auto& p : payoffs_) {
    if (static_cast<int>(p.size()) != profiles) {
      throw InvalidGameError("payoff tensor has wrong size");
    }
    for (double v : p) {
      if (!std::isfinite(v)) throw InvalidGameError("non-finite payoff");
    }
  }
}

MatrixGame MatrixGame::TwoByTwo(
    const std::array<std::array<double, 2>, 2>& row,
    const std::array<std::array<double, 2>, 2>& col,
    std::optional<GameClass> label) {
  std::vector<double> r{row[0][0], row[0][1], row[1][0], row[1][1]};
  std::vector<double> c{col[0][0], col[0][1], col[1][0], col[1][1]};
  return MatrixGame({2, 2}, {std::move(r), std::move(c)}, label);
}

int MatrixGame::ProfileIndex(std::span<const int> actions) const {
  if (actions.size() != num_actions_.size()) {
    throw InvalidGameError("profile has wrong number of agents");
  }
  int idx = 0;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions_[i]) {
      throw InvalidGameError("action out of range");
    }
    idx = idx * num_actions_[i] + actions[i];
  }
  return idx;
}

double MatrixGame::Payoff(int agent, std::span<const int> actions) const {
  return payoffs_.at(agent)[ProfileIndex(actions)];
}

double MatrixGame::Payoff2(int agent, int a0, int a1) const {
  return payoffs_.at(agent)[a0 * num_actions_[1] + a1];
}

bool MatrixGame::IsTwoByTwo() const {
  return num_actions_.size() == 2 && num_actions_[0] == 2 &&
         num_actions_[1] == 2;
}

GameClass Classify2x2(const MatrixGame& game) {
  if (!game.IsTwoByTwo()) {
    throw InvalidGameError("Classify2x2 requires a 2-agent 2-action game");
  }
  // Any best-response tie makes the label ambiguous.
  for (int j = 0; j < 2; ++j) {
    if (game.Payoff2(0, 0, j) == game.Payoff2(0, 1, j)) return GameClass::kOther;
    if (game.Payoff2(1, j, 0) == game.Payoff2(1, j, 1)) return GameClass::kOther;
  }
  bool ne[2][2];
  int count = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      ne[a][b] = game.Payoff2(0, a, b) > game.Payoff2(0, 1 - a, b) &&
                 game.Payoff2(1, a, b) > game.Payoff2(1, a, 1 - b);
      count += ne[a][b];
    }
  }
  if (count == 0) return GameClass::kCyclic;
  if (count == 2 && ne[0][0] && ne[1][1]) return GameClass::kCoordination;
  if (count == 2 && ne[0][1] && ne[1][0]) return GameClass::kAnticoordination;
  return GameClass::kOther;
}

MatrixGame GenerateRandom2x2(GameClass cls, std::uint64_t seed) {
  if (cls == GameClass::kOther) {
    throw std::invalid_argument("GenerateRandom2x2: class must be a taxonomy label");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::array<std::array<double, 2>, 2> row, col;
    for (auto& r : row) for (double& v : r) v = u(rng);
    for (auto& r : col) for (double& v : r) v = u(rng);
    MatrixGame g = MatrixGame::TwoByTwo(row, col);
    if (Classify2x2(g) == cls) return MatrixGame::TwoByTwo(row, col, cls);
  }
}

// --- DifferentialGame -------------------------------------------------------

DifferentialGame::DifferentialGame(std::vector<int> block_sizes,
                                   Objective objective, ValueFn value,
                                   GradientFn gradient, HessianFn hessian)
    : block_sizes_(std::move(block_sizes)),
      objective_(objective),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (block_sizes_.empty()) throw InvalidGameError("differential game needs agents");
  for (int b : block_sizes_) {
    if (b < 1) throw InvalidGameError("block sizes must be positive");
    offsets_.push_back(num_params_);
    num_params_ += b;
  }
  if (!value_ || !gradient_ || !hessian_) {
    throw InvalidGameError("value, gradient and Hessian evaluators are required");
  }
}

double DifferentialGame::Value(int agent, const Eigen::VectorXd& theta) const {
  return value_(agent, theta);
}

Eigen::VectorXd DifferentialGame::Gradient(int agent,
                                           const Eigen::VectorXd& theta) const {
  return gradient_(agent, theta);
}

Eigen::MatrixXd DifferentialGame::Hessian(int agent,
                                          const Eigen::VectorXd& theta) const {
  return hessian_(agent, theta);
}

void DifferentialGame::set_box(Box box) {
  if (box.lower.size() != num_params_ || box.upper.size() != num_params_) {
    throw InvalidGameError("box bounds have wrong dimension");
  }
  if ((box.lower.array() > box.upper.array()).any()) {
    throw InvalidGameError("box lower bound exceeds upper bound");
  }
  box_ = std::move(box);
}

Eigen::VectorXd DifferentialGame::Project(const Eigen::VectorXd& theta) const {
  if (!box_) return theta;
  return theta.cwiseMax(box_->lower).cwiseMin(box_->upper);
}

DifferentialGame QuadraticGame(std::vector<int> block_sizes,
                               std::vector<QuadraticForm> forms,
                               Objective objective) {
  int n = 0;
  for (int b : block_sizes) n += b;
  if (forms.size() != block_sizes.size()) {
    throw InvalidGameError("one quadratic form per agent required");
  }
  for (auto& f : forms) {
    if (f.curvature.rows() != n || f.curvature.cols() != n ||
        f.linear.size() != n) {
      throw InvalidGameError("quadratic form has wrong dimension");
    }
    f.curvature = 0.5 * (f.curvature + f.curvature.transpose()).eval();
  }
  auto shared = std::make_shared<const std::vector<QuadraticForm>>(forms);
  DifferentialGame game(
      std::move(block_sizes), objective,
      [shared](int i, const Eigen::VectorXd& t) {
        const auto& f = shared->at(i);
        return 0.5 * t.dot(f.curvature * t) + f.linear.dot(t) + f.constant;
      },
      [shared](int i, const Eigen::VectorXd& t) -> Eigen::VectorXd {
        const auto& f = shared->at(i);
        return f.curvature * t + f.linear;
      },
      [shared](int i, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return shared->at(i).curvature;
      });
  game.quadratic_ = std::move(forms);
  return game;
}

DifferentialGame RotationalGame() {
  QuadraticForm f0{Eigen::Matrix2d{{1.0, 10.0}, {10.0, 0.0}},
                   Eigen::Vector2d::Zero(), 0.0};
  QuadraticForm f1{Eigen::Matrix2d{{0.0, -10.0}, {-10.0, 1.0}},
                   Eigen::Vector2d::Zero(), 0.0};
  DifferentialGame g = QuadraticGame({1, 1}, {f0, f1}, Objective::kLoss);
  g.set_fixed_point(Eigen::Vector2d::Zero());
  return g;
}

DifferentialGame BilinearGame(const MatrixGame& game) {
  if (!game.IsTwoByTwo()) {
    throw InvalidGameError("BilinearGame requires a 2-agent 2-action game");
  }
  // u_i(p, q) = pq c_i + p d_i + q e_i + f_i.
  struct Coef {
    double c, d, e, f;
  };
  std::array<Coef, 2> k;
  for (int i = 0; i < 2; ++i) {
    const double m00 = game.Payoff2(i, 0, 0), m01 = game.Payoff2(i, 0, 1);
    const double m10 = game.Payoff2(i, 1, 0), m11 = game.Payoff2(i, 1, 1);
    k[i] = {m00 - m01 - m10 + m11, m01 - m11, m10 - m11, m11};
  }
  DifferentialGame g(
      {1, 1}, Objective::kPayoff,
      [k](int i, const Eigen::VectorXd& t) {
        const Coef& c = k.at(i);
        return t[0] * t[1] * c.c + t[0] * c.d + t[1] * c.e + c.f;
      },
      [k](int i, const Eigen::VectorXd& t) -> Eigen::VectorXd {
        const Coef& c = k.at(i);
        return Eigen::Vector2d(t[1] * c.c + c.d, t[0] * c.c + c.e);
      },
      [k](int i, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        const double c = k.at(i).c;
        return Eigen::Matrix2d{{0.0, c}, {c, 0.0}};
      });
  g.set_box({Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones()});
  return g;
}

// --- StochasticGame ---------------------------------------------------------

StochasticGame::StochasticGame(Spec spec) : spec_(std::move(spec)) {
  const int S = static_cast<int>(spec_.state_names.size());
  if (S == 0) throw LoadError("states", "at least one state required");
  std::unordered_set<std::string> seen;
  for (const auto& s : spec_.state_names) {
    if (!seen.insert(s).second) throw LoadError("states", "duplicate state '" + s + "'");
  }
  if (spec_.action_names.empty()) throw LoadError("actions", "at least one agent required");
  for (size_t i = 0; i < spec_.action_names.size(); ++i) {
    const int n = static_cast<int>(spec_.action_names[i].size());
    if (n == 0) {
      throw LoadError("actions[" + std::to_string(i) + "]", "empty action set");
    }
    num_actions_.push_back(n);
    num_joint_ *= n;
  }
  if (!(spec_.gamma >= 0.0 && spec_.gamma < 1.0)) {
    throw LoadError("gamma", "must lie in [0, 1), got " + std::to_string(spec_.gamma));
  }
  if (static_cast<int>(spec_.p0.size()) != S) {
    throw LoadError("p0", "expected " + std::to_string(S) + " entries");
  }
  double p0_sum = 0.0;
  for (double v : spec_.p0) {
    CheckFinite(v, "p0");
    if (v < 0.0) throw LoadError("p0", "negative probability");
    p0_sum += v;
  }
  if (std::abs(p0_sum - 1.0) > kSimplexTol) {
    throw LoadError("p0", "sums to " + std::to_string(p0_sum) + ", expected 1");
  }
  if (static_cast<int>(spec_.transition.size()) != S) {
    throw LoadError("transitions", "expected one block per state");
  }
  for (int s = 0; s < S; ++s) {
    if (static_cast<int>(spec_.transition[s].size()) != num_joint_) {
      throw LoadError("transitions[state=" + spec_.state_names[s] + "]",
                      "expected one row per joint action");
    }
    for (int j = 0; j < num_joint_; ++j) {
      const std::string field = "transitions[state=" + spec_.state_names[s] +
                                ", joint_action=" + JointLabel(spec_, j) + "]";
      const auto& row = spec_.transition[s][j];
      if (static_cast<int>(row.size()) != S) {
        throw LoadError(field, "next_state_probs has wrong length");
      }
      double sum = 0.0;
      for (double v : row) {
        CheckFinite(v, field);
        if (v < 0.0) throw LoadError(field, "negative probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kSimplexTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "next_state_probs sums to " << sum << ", expected 1";
        throw LoadError(field, msg.str());
      }
    }
  }
  if (spec_.reward.size() != spec_.action_names.size()) {
    throw LoadError("rewards", "expected one reward table per agent");
  }
  for (size_t i = 0; i < spec_.reward.size(); ++i) {
    if (static_cast<int>(spec_.reward[i].size()) != S) {
      throw LoadError("rewards[agent=" + std::to_string(i) + "]",
                      "expected one block per state");
    }
    for (int s = 0; s < S; ++s) {
      if (static_cast<int>(spec_.reward[i][s].size()) != num_joint_) {
        throw LoadError("rewards[agent=" + std::to_string(i) +
                            ", state=" + spec_.state_names[s] + "]",
                        "expected one value per joint action");
      }
      for (double v : spec_.reward[i][s]) {
        CheckFinite(v, "rewards[agent=" + std::to_string(i) + "]");
      }
    }
  }
}

int StochasticGame::JointIndex(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != NumAgents()) {
    throw InvalidGameError("joint action has wrong number of agents");
  }
  int idx = 0;
  for (int i = 0; i < NumAgents(); ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions_[i]) {
      throw InvalidGameError("action out of range");
    }
    idx = idx * num_actions_[i] + actions[i];
  }
  return idx;
}

void StochasticGame::DecodeJoint(int joint, std::span<int> out) const {
  for (int i = NumAgents() - 1; i >= 0; --i) {
    out[i] = joint % num_actions_[i];
    joint /= num_actions_[i];
  }
}

int StochasticGame::StateIndex(std::string_view name) const {
  for (int s = 0; s < NumStates(); ++s) {
    if (spec_.state_names[s] == name) return s;
  }
  return -1;
}

StochasticGame MatrixGameToStochastic(const MatrixGame& game, double gamma) {
  StochasticGame::Spec spec;
  spec.state_names = {"s0"};
  for (int i = 0; i < game.NumAgents(); ++i) {
    std::vector<std::string> names;
    for (int a = 0; a < game.NumActions(i); ++a) names.push_back("a" + std::to_string(a));
    spec.action_names.push_back(std::move(names));
  }
  const int J = game.NumProfiles();
  spec.transition.assign(1, std::vector<std::vector<double>>(J, {1.0}));
  spec.reward.resize(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    spec.reward[i].assign(1, std::vector<double>(J));
    for (int j = 0; j < J; ++j) spec.reward[i][0][j] = game.Payoff(i, j);
  }
  spec.gamma = gamma;
  spec.p0 = {1.0};
  return StochasticGame(std::move(spec));
}

// --- JointPolicy ------------------------------------------------------------

JointPolicy::JointPolicy(std::vector<Eigen::MatrixXd> per_agent)
    : agents_(std::move(per_agent)) {
  Validate();
}

JointPolicy JointPolicy::Uniform(const StochasticGame& game) {
  std::vector<Eigen::MatrixXd> agents;
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int n = game.NumActions(i);
    agents.push_back(Eigen::MatrixXd::Constant(game.NumStates(), n, 1.0 / n));
  }
  return JointPolicy(std::move(agents));
}

double JointPolicy::JointProbability(const StochasticGame& game, int state,
                                     int joint) const {
  double p = 1.0;
  for (int i = NumAgents() - 1; i >= 0; --i) {
    const int n = game.NumActions(i);
    p *= agents_[i](state, joint % n);
    joint /= n;
  }
  return p;
}

void JointPolicy::Validate(double tol) const {
  for (size_t i = 0; i < agents_.size(); ++i) {
    const Eigen::MatrixXd& m = agents_[i];
    for (int s = 0; s < m.rows(); ++s) {
      for (int a = 0; a < m.cols(); ++a) {
        const double v = m(s, a);
        if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
          throw InvalidGameError("policy of agent " + std::to_string(i) +
                                 " has an entry outside [0,1] at state " +
                                 std::to_string(s));
        }
      }
      if (std::abs(m.row(s).sum() - 1.0) > tol) {
        throw InvalidGameError("policy of agent " + std::to_string(i) +
                               " does not sum to 1 at state " + std::to_string(s));
      }
    }
  }
}

void JointPolicy::ValidateFor(const StochasticGame& game, double tol) const {
  if (NumAgents() != game.NumAgents()) {
    throw InvalidGameError("policy has wrong number of agents");
  }
  for (int i = 0; i < NumAgents(); ++i) {
    if (agents_[i].rows() != game.NumStates() ||
        agents_[i].cols() != game.NumActions(i)) {
      throw InvalidGameError("policy of agent " + std::to_string(i) +
                             " has wrong shape");
    }
  }
  Validate(tol);
}

}  // namespace matrl
