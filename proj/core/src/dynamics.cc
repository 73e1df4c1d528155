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

#include "matrl/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "matrl/simplex.hpp"

namespace matrl {
namespace {

// +1 for losses, -1 for payoffs: xi_loss = LossSign * xi.
double LossSign(const DifferentialGame& game) {
  return game.objective() == Objective::kLoss ? 1.0 : -1.0;
}

Eigen::VectorXd LossGradient(const DifferentialGame& game,
                             const Eigen::VectorXd& theta) {
  return LossSign(game) * SimultaneousGradient(game, theta);
}

std::vector<double> Payoffs(const DifferentialGame& game,
                            const Eigen::VectorXd& theta) {
  std::vector<double> out;
  for (int i = 0; i < game.NumAgents(); ++i) out.push_back(game.Value(i, theta));
  return out;
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kIga:
      return "iga";
    case Method::kLookahead:
      return "lookahead";
    case Method::kExtragradient:
      return "extragradient";
    case Method::kMatrl:
      return "matrl";
  }
  return "iga";
}

Method ParseMethod(std::string_view name) {
  if (name == "iga") return Method::kIga;
  if (name == "lookahead" || name == "iga_la" || name == "la") return Method::kLookahead;
  if (name == "extragradient" || name == "eg") return Method::kExtragradient;
  if (name == "matrl") return Method::kMatrl;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

void DynamicsConfig::Validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (weight_policy == WeightPolicy::kFixed &&
      !(fixed_weight >= 0.0 && fixed_weight <= 1.0)) {
    throw std::invalid_argument("fixed_weight must lie in [0, 1]");
  }
  trust.Validate();
}

Eigen::VectorXd SimultaneousGradient(const DifferentialGame& game,
                                     const Eigen::VectorXd& theta) {
  if (theta.size() != game.NumParams()) {
    throw std::invalid_argument("SimultaneousGradient: wrong parameter dimension");
  }
  Eigen::VectorXd xi(game.NumParams());
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int off = game.BlockOffset(i), n = game.BlockSize(i);
    xi.segment(off, n) = game.Gradient(i, theta).segment(off, n);
  }
  if (!xi.allFinite()) {
    throw std::domain_error("SimultaneousGradient: non-finite gradient");
  }
  return xi;
}

Eigen::MatrixXd GameHessian::LossH() const {
  return objective == Objective::kLoss ? h : Eigen::MatrixXd(-h);
}

Eigen::MatrixXd GameHessian::LossHo() const {
  return objective == Objective::kLoss ? h_o : Eigen::MatrixXd(-h_o);
}

GameHessian ComputeGameHessian(const DifferentialGame& game,
                               const Eigen::VectorXd& theta) {
  const int n = game.NumParams();
  GameHessian out;
  out.h.resize(n, n);
  out.block_sizes = game.BlockSizes();
  out.objective = game.objective();
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int off = game.BlockOffset(i), b = game.BlockSize(i);
    out.h.middleRows(off, b) = game.Hessian(i, theta).middleRows(off, b);
  }
  out.h_o = out.h;
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int off = game.BlockOffset(i), b = game.BlockSize(i);
    out.h_o.block(off, off, b, b).setZero();
  }
  return out;
}

Eigen::VectorXd UpdateDirection(Method method, const Eigen::VectorXd& xi,
                                const Eigen::MatrixXd& h_o, double alpha,
                                double w) {
  switch (method) {
    case Method::kIga:
      return xi;
    case Method::kLookahead:
      return xi - alpha * (h_o * xi);
    case Method::kMatrl: {
      const double c = w * alpha;
      return xi - c * (h_o * xi);
    }
    case Method::kExtragradient:
      break;
  }
  throw std::invalid_argument("UpdateDirection: extragradient has no single direction");
}

MatrlDifferentialStep MatrlStepDifferential(const DifferentialGame& game,
                                            const Eigen::VectorXd& theta,
                                            double alpha,
                                            const TrustStepConfig& trust,
                                            std::uint64_t seed) {
  const int n = game.NumAgents();
  const double sign = LossSign(game);
  MatrlDifferentialStep out;
  out.predicted = IidStep(game, theta, trust);

  std::vector<double> base(n);
  for (int i = 0; i < n; ++i) base[i] = game.Value(i, theta);
  std::vector<std::vector<double>> payoff(n, std::vector<double>(1u << n));
  for (unsigned p = 0; p < (1u << n); ++p) {
    Eigen::VectorXd mixed = theta;
    for (int i = 0; i < n; ++i) {
      if ((p >> i) & 1u) {
        mixed.segment(game.BlockOffset(i), game.BlockSize(i)) =
            out.predicted.segment(game.BlockOffset(i), game.BlockSize(i));
      }
    }
    for (int i = 0; i < n; ++i) {
      const double v = p == 0 ? base[i] : game.Value(i, mixed);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "MatrlStepDifferential: non-finite payoff for agent " << i
            << " at profile " << p << ", theta = " << theta.transpose();
        throw std::domain_error(msg.str());
      }
      // Improvement in the agent's own sense.
      payoff[i][p] = -sign * (v - base[i]);
    }
  }
  MetaGame meta(std::move(payoff));
  out.nash = SolveNash(meta, seed);
  out.aggregated = AggregateParameters(game, out.nash.rho, theta, out.predicted);

  Eigen::VectorXd next = theta;
  for (int i = 0; i < n; ++i) {
    const int off = game.BlockOffset(i), b = game.BlockSize(i);
    Eigen::VectorXd point = out.aggregated;
    point.segment(off, b) = theta.segment(off, b);
    const Eigen::VectorXd g = sign * game.Gradient(i, point).segment(off, b);
    next.segment(off, b) = theta.segment(off, b) - alpha * g;
  }
  out.theta_next = game.Project(next);
  return out;
}

Eigen::MatrixXd BestResponse(const StochasticGame& game,
                             const JointPolicy& target, int agent, double lr,
                             int iterations, std::optional<double> max_tv) {
  target.ValidateFor(game);
  const Eigen::MatrixXd center = target.agent(agent);
  std::vector<Eigen::MatrixXd> comp = target.agents();
  EvaluationReport rep = Evaluate(game, target);
  double eta = rep.eta[agent];
  constexpr int kMaxHalvings = 40;
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd grad = MarginalAdvantage(game, rep, agent, target);
    for (int s = 0; s < grad.rows(); ++s) grad.row(s) *= rep.visitation[s];
    if ((grad.array() == 0.0).all()) break;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings && !accepted; ++h, lr *= 0.5) {
      Eigen::MatrixXd x = comp[agent];
      for (int s = 0; s < x.rows(); ++s) {
        Eigen::VectorXd row =
            ProjectToSimplex((x.row(s) + lr * grad.row(s)).transpose());
        if (max_tv) {
          const Eigen::VectorXd c = center.row(s).transpose();
          const double tv = TotalVariation(row, c);
          if (tv > *max_tv) row = c + (*max_tv / tv) * (row - c);
        }
        x.row(s) = row.transpose();
      }
      std::vector<Eigen::MatrixXd> trial = comp;
      trial[agent] = x;
      EvaluationReport trial_rep = Evaluate(game, JointPolicy(trial));
      if (trial_rep.eta[agent] >= eta) {
        comp = std::move(trial);
        rep = std::move(trial_rep);
        eta = rep.eta[agent];
        accepted = true;
      }
    }
    if (!accepted) break;
    // Undo the halving that closed the loop.
    lr *= 2.0;
  }
  return comp[agent];
}

MatrlStochasticStep MatrlStepStochastic(const StochasticGame& game,
                                        const JointPolicy& policy,
                                        const StochasticStepConfig& config) {
  config.trust.Validate();
  EvaluationReport report = Evaluate(game, policy);
  JointPolicy predicted = IidStep(game, policy, report, config.trust);
  MetaGame meta = BuildMetaGame(game, policy, predicted, report);
  NashProfile nash = SolveNash(meta, config.seed);
  JointPolicy aggregated = AggregatePolicies(nash.rho, policy, predicted);
  std::vector<Eigen::MatrixXd> next;
  for (int i = 0; i < game.NumAgents(); ++i) {
    next.push_back(BestResponse(game, aggregated, i, config.br_lr,
                                config.br_iterations, config.trust.delta));
  }
  return MatrlStochasticStep{JointPolicy(std::move(next)), std::move(predicted),
                             std::move(aggregated), std::move(meta),
                             std::move(nash), std::move(report)};
}

double TruncatedImportanceWeight(double pi, double pi_bar, double c_bar) {
  if (!(pi_bar > 0.0)) {
    throw std::invalid_argument("TruncatedImportanceWeight: pi_bar must be positive");
  }
  if (!(c_bar > 0.0)) {
    throw std::invalid_argument("TruncatedImportanceWeight: c_bar must be positive");
  }
  return std::min(1.0 + c_bar, std::max(1.0 - c_bar, pi / pi_bar));
}

ConvergenceCheck LocalConvergenceCheck(const GameHessian& hessian, double alpha,
                                       double w) {
  const Eigen::MatrixXd h = hessian.LossH();
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("LocalConvergenceCheck: H must be square");
  }
  const int n = static_cast<int>(h.rows());
  const Eigen::MatrixXd x =
      Eigen::MatrixXd::Identity(n, n) - (w * alpha) * hessian.LossHo();
  Eigen::EigenSolver<Eigen::MatrixXd> es(-(x * h), false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("LocalConvergenceCheck: eigensolver failed");
  }
  ConvergenceCheck out;
  out.contractive = true;
  for (int k = 0; k < n; ++k) {
    const std::complex<double> lam = es.eigenvalues()[k];
    out.eigenvalues.push_back(lam);
    const double mod = std::abs(1.0 + alpha * lam);
    out.max_modulus = std::max(out.max_modulus, mod);
    if (!(mod < 1.0)) out.contractive = false;
  }
  return out;
}

Trajectory RunDynamics(const DifferentialGame& game, const DynamicsConfig& config,
                       const Eigen::VectorXd& init, std::uint64_t seed) {
  config.Validate();
  if (init.size() != game.NumParams()) {
    throw std::invalid_argument("RunDynamics: init has wrong dimension");
  }
  std::vector<Eigen::VectorXd> targets = config.targets;
  if (targets.empty() && game.fixed_point()) targets.push_back(*game.fixed_point());

  Trajectory traj;
  traj.method = std::string(MethodName(config.method));
  Eigen::VectorXd theta = init;
  traj.final_theta = theta;
  if (config.max_iterations == 0) return traj;

  const double alpha = config.step_size;
  int streak = 0;
  for (int k = 0;; ++k) {
    const Eigen::VectorXd xi = LossGradient(game, theta);
    if (config.record) {
      traj.records.push_back({k, theta, xi.norm(), Payoffs(game, theta)});
    }
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& t : targets) dist = std::min(dist, (theta - t).norm());
    streak = dist < config.tolerance ? streak + 1 : 0;
    if (streak >= config.window && !traj.converged_at) {
      traj.converged_at = k - config.window + 1;
      if (config.stop_on_convergence) break;
    }
    if (k == config.max_iterations) break;

    Eigen::VectorXd next;
    switch (config.method) {
      case Method::kIga:
      case Method::kLookahead: {
        const GameHessian gh = ComputeGameHessian(game, theta);
        next = theta - alpha * UpdateDirection(config.method, xi, gh.LossHo(), alpha, 0.0);
        break;
      }
      case Method::kExtragradient: {
        const Eigen::VectorXd half = game.Project(theta - alpha * xi);
        next = theta - alpha * LossGradient(game, half);
        break;
      }
      case Method::kMatrl:
        if (config.weight_policy == WeightPolicy::kFixed) {
          const GameHessian gh = ComputeGameHessian(game, theta);
          next = theta - alpha * UpdateDirection(Method::kMatrl, xi, gh.LossHo(),
                                                 alpha, config.fixed_weight);
        } else {
          next = MatrlStepDifferential(game, theta, alpha, config.trust,
                                       MixSeed(seed ^ static_cast<std::uint64_t>(k)))
                     .theta_next;
        }
        break;
    }
    theta = game.Project(next);
    traj.iterations_run = k + 1;
    if (!theta.allFinite() || theta.norm() > config.divergence_bound) {
      traj.diverged = true;
      break;
    }
  }
  traj.final_theta = theta;
  return traj;
}

}  // namespace matrl
