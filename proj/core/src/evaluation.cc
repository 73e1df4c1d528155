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

#include "matrl/evaluation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "matrl/simplex.hpp"

namespace matrl {
namespace {

void CheckUnit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

double Penalty(double eps, double gamma, double a_i, double a_j) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be finite and nonnegative");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }
  const double c = 4.0 * gamma * eps / ((1.0 - gamma) * (1.0 - gamma));
  const double t = a_i + a_j - a_i * a_j;
  return c * t * t;
}

}  // namespace

EvaluationReport Evaluate(const StochasticGame& game, const JointPolicy& policy) {
  policy.ValidateFor(game);
  const int S = game.NumStates();
  const int J = game.NumJointActions();
  const int N = game.NumAgents();
  const double gamma = game.gamma();

  Eigen::MatrixXd joint_prob(S, J);
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < J; ++j) joint_prob(s, j) = policy.JointProbability(game, s, j);
  }
  Eigen::MatrixXd p_pi = Eigen::MatrixXd::Zero(S, S);
  Eigen::MatrixXd r_pi = Eigen::MatrixXd::Zero(S, N);
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < J; ++j) {
      const double w = joint_prob(s, j);
      if (w == 0.0) continue;
      const auto& row = game.TransitionRow(s, j);
      for (int t = 0; t < S; ++t) p_pi(s, t) += w * row[t];
      for (int i = 0; i < N; ++i) r_pi(s, i) += w * game.Reward(i, s, j);
    }
  }
  const Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(S, S) - gamma * p_pi;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    throw std::logic_error("Evaluate: singular Bellman system");
  }
  const Eigen::MatrixXd v = lu.solve(r_pi);
  Eigen::VectorXd p0(S);
  for (int s = 0; s < S; ++s) p0[s] = game.p0()[s];
  Eigen::FullPivLU<Eigen::MatrixXd> lu_t(m.transpose());
  Eigen::VectorXd d = lu_t.solve(p0);

  EvaluationReport rep;
  rep.policy = policy;
  rep.gamma = gamma;
  rep.visitation = std::move(d);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd vi = v.col(i);
    Eigen::MatrixXd qi(S, J);
    for (int s = 0; s < S; ++s) {
      for (int j = 0; j < J; ++j) {
        const auto& row = game.TransitionRow(s, j);
        double cont = 0.0;
        for (int t = 0; t < S; ++t) cont += row[t] * vi[t];
        qi(s, j) = game.Reward(i, s, j) + gamma * cont;
      }
    }
    Eigen::MatrixXd ai = qi.colwise() - vi;
    rep.eta.push_back(p0.dot(vi));
    rep.value.push_back(std::move(vi));
    rep.q.push_back(std::move(qi));
    rep.advantage.push_back(std::move(ai));
  }
  return rep;
}

Eigen::MatrixXd MarginalAdvantage(const StochasticGame& game,
                                  const EvaluationReport& report, int agent,
                                  const JointPolicy& opponents) {
  const int S = game.NumStates();
  const int J = game.NumJointActions();
  const int N = game.NumAgents();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(S, game.NumActions(agent));
  std::vector<int> acts(N);
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < J; ++j) {
      game.DecodeJoint(j, acts);
      double w = 1.0;
      for (int k = 0; k < N; ++k) {
        if (k != agent) w *= opponents.agent(k)(s, acts[k]);
      }
      if (w != 0.0) out(s, acts[agent]) += w * report.advantage[agent](s, j);
    }
  }
  return out;
}

std::vector<double> ExpectedAdvantage(const StochasticGame& game,
                                      const EvaluationReport& report,
                                      const JointPolicy& candidate) {
  candidate.ValidateFor(game);
  const int S = game.NumStates();
  const int J = game.NumJointActions();
  const int N = game.NumAgents();
  std::vector<double> g(N, 0.0);
  for (int s = 0; s < S; ++s) {
    std::vector<double> acc(N, 0.0);
    for (int j = 0; j < J; ++j) {
      const double diff = candidate.JointProbability(game, s, j) -
                          report.policy.JointProbability(game, s, j);
      if (diff == 0.0) continue;
      for (int i = 0; i < N; ++i) acc[i] += diff * report.advantage[i](s, j);
    }
    for (int i = 0; i < N; ++i) g[i] += report.visitation[s] * acc[i];
  }
  return g;
}

double TvAlpha(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw std::invalid_argument("TvAlpha: shape mismatch");
  }
  double alpha = 0.0;
  for (int s = 0; s < p.rows(); ++s) {
    alpha = std::max(alpha, TotalVariation(p.row(s).transpose(), q.row(s).transpose()));
  }
  return std::min(alpha, 1.0);
}

double EpsilonMaxAdv(const EvaluationReport& report, int agent) {
  return report.advantage.at(agent).cwiseAbs().maxCoeff();
}

double IidLowerBound(double g, double eps, double gamma, double alpha_i,
                     double alpha_j) {
  CheckUnit(alpha_i, "alpha_i");
  CheckUnit(alpha_j, "alpha_j");
  return g - Penalty(eps, gamma, alpha_i, alpha_j);
}

double MixtureLowerBound(double g, double eps, double gamma, double alpha_i,
                         double alpha_j, double rho_i, double rho_j) {
  CheckUnit(alpha_i, "alpha_i");
  CheckUnit(alpha_j, "alpha_j");
  CheckUnit(rho_i, "rho_i");
  CheckUnit(rho_j, "rho_j");
  return g - Penalty(eps, gamma, alpha_i * (1.0 - rho_i), alpha_j * (1.0 - rho_j));
}

}  // namespace matrl
