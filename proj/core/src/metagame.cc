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

#include "matrl/metagame.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace matrl {
namespace {

constexpr double kPureSlack = 1e-12;

void RequireTwoAgents(const MetaGame& meta, const char* who) {
  if (meta.NumAgents() != 2) {
    throw std::invalid_argument(std::string(who) + " requires a two-agent meta-game");
  }
}

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

MetaGame::MetaGame(std::vector<std::vector<double>> payoff)
    : num_agents_(static_cast<int>(payoff.size())), payoff_(std::move(payoff)) {
  if (num_agents_ < 1) throw std::invalid_argument("meta-game needs agents");
  if (num_agents_ > kMaxMetaAgents) {
    throw std::invalid_argument("meta-game supports at most " +
                                std::to_string(kMaxMetaAgents) + " agents");
  }
  for (const auto& p : payoff_) {
    if (static_cast<int>(p.size()) != (1 << num_agents_)) {
      throw std::invalid_argument("meta-game payoff needs 2^n entries per agent");
    }
    for (double v : p) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite meta-game entry");
    }
  }
}

std::string MetaGame::Dump() const {
  std::ostringstream out;
  out.precision(17);
  for (int p = 0; p < NumProfiles(); ++p) {
    out << "profile ";
    for (int i = 0; i < num_agents_; ++i) out << ((p >> i) & 1 ? 'P' : 'C');
    out << ":";
    for (int i = 0; i < num_agents_; ++i) out << " " << payoff_[i][p];
    out << "\n";
  }
  return out.str();
}

std::string_view FixedPointClassName(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::kStable:
      return "stable";
    case FixedPointClass::kSaddle:
      return "saddle";
    case FixedPointClass::kUnstableWarning:
      return "unstable_warning";
    case FixedPointClass::kUnclassified:
      return "unclassified";
  }
  return "unclassified";
}

MetaGame BuildMetaGame(const StochasticGame& game, const JointPolicy& base,
                       const JointPolicy& predicted,
                       const EvaluationReport& report) {
  const int n = game.NumAgents();
  if (n > kMaxMetaAgents) {
    throw std::invalid_argument("BuildMetaGame: too many agents for the 2^n tensor");
  }
  if (base.NumAgents() != n || predicted.NumAgents() != n) {
    throw std::invalid_argument("BuildMetaGame: policy has wrong number of agents");
  }
  std::vector<std::vector<double>> payoff(n, std::vector<double>(1u << n));
  for (unsigned p = 0; p < (1u << n); ++p) {
    std::vector<Eigen::MatrixXd> comp;
    for (int i = 0; i < n; ++i) {
      comp.push_back((p >> i) & 1u ? predicted.agent(i) : base.agent(i));
    }
    const std::vector<double> g = ExpectedAdvantage(game, report, JointPolicy(comp));
    for (int i = 0; i < n; ++i) payoff[i][p] = g[i];
  }
  return MetaGame(std::move(payoff));
}

std::vector<unsigned> PureEquilibria(const MetaGame& meta) {
  std::vector<unsigned> out;
  for (unsigned p = 0; p < static_cast<unsigned>(meta.NumProfiles()); ++p) {
    bool ok = true;
    for (int i = 0; i < meta.NumAgents() && ok; ++i) {
      ok = meta.Payoff(i, p ^ (1u << i)) <= meta.Payoff(i, p) + kPureSlack;
    }
    if (ok) out.push_back(p);
  }
  return out;
}

NashProfile SolveNash(const MetaGame& meta, std::uint64_t seed) {
  const int n = meta.NumAgents();
  NashProfile out;
  out.rho.assign(n, 1.0);
  out.is_pure.assign(n, true);

  bool all_zero = true;
  for (const auto& p : meta.payoff()) {
    for (double v : p) all_zero = all_zero && v == 0.0;
  }
  const std::vector<unsigned> pure = PureEquilibria(meta);
  out.num_pure_equilibria = static_cast<int>(pure.size());
  if (!pure.empty()) {
    unsigned pick = 0;
    if (!all_zero) {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::size_t> u(0, pure.size() - 1);
      pick = pure[u(rng)];
    }
    for (int i = 0; i < n; ++i) out.rho[i] = (pick >> i) & 1u ? 0.0 : 1.0;
  } else if (n == 2) {
    const auto& g0 = meta.payoff()[0];
    const auto& g1 = meta.payoff()[1];
    const double den0 = g0[0] - g0[2] - g0[1] + g0[3];
    const double den1 = g1[0] - g1[1] - g1[2] + g1[3];
    const double rho1 = den0 != 0.0 ? (g0[3] - g0[2]) / den0 : -1.0;
    const double rho0 = den1 != 0.0 ? (g1[3] - g1[1]) / den1 : -1.0;
    if (!InUnit(rho0) || !InUnit(rho1)) {
      throw std::runtime_error("SolveNash: no equilibrium found\n" + meta.Dump());
    }
    out.rho = {rho0, rho1};
    out.is_pure = {rho0 == 0.0 || rho0 == 1.0, rho1 == 0.0 || rho1 == 1.0};
  } else {
    throw std::runtime_error("SolveNash: no pure equilibrium for " +
                             std::to_string(n) + " agents\n" + meta.Dump());
  }
  for (double r : out.rho) out.boundary = out.boundary || r == 0.0 || r == 1.0;
  if (n == 2) out.fixed_point = ClassifyFixedPoint(meta);
  return out;
}

double MetaPayoff(const MetaGame& meta, int agent, const std::vector<double>& rho) {
  const int n = meta.NumAgents();
  if (static_cast<int>(rho.size()) != n) {
    throw std::invalid_argument("MetaPayoff: rho has wrong size");
  }
  double total = 0.0;
  for (unsigned p = 0; p < static_cast<unsigned>(meta.NumProfiles()); ++p) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) w *= (p >> i) & 1u ? 1.0 - rho[i] : rho[i];
    if (w != 0.0) total += w * meta.Payoff(agent, p);
  }
  return total;
}

std::vector<double> DeviationGains(const MetaGame& meta,
                                   const std::vector<double>& rho) {
  std::vector<double> gains;
  for (int i = 0; i < meta.NumAgents(); ++i) {
    const double at = MetaPayoff(meta, i, rho);
    std::vector<double> dev = rho;
    dev[i] = 1.0;
    const double cur = MetaPayoff(meta, i, dev);
    dev[i] = 0.0;
    const double pred = MetaPayoff(meta, i, dev);
    gains.push_back(std::max(cur, pred) - at);
  }
  return gains;
}

JointPolicy AggregatePolicies(const std::vector<double>& rho,
                              const JointPolicy& base,
                              const JointPolicy& predicted) {
  if (static_cast<int>(rho.size()) != base.NumAgents() ||
      base.NumAgents() != predicted.NumAgents()) {
    throw std::invalid_argument("AggregatePolicies: agent count mismatch");
  }
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < base.NumAgents(); ++i) {
    if (base.agent(i).rows() != predicted.agent(i).rows() ||
        base.agent(i).cols() != predicted.agent(i).cols()) {
      throw std::invalid_argument("AggregatePolicies: shape mismatch");
    }
    if (rho[i] == 1.0) {
      out.push_back(base.agent(i));
    } else if (rho[i] == 0.0) {
      out.push_back(predicted.agent(i));
    } else {
      out.push_back(rho[i] * base.agent(i) + (1.0 - rho[i]) * predicted.agent(i));
    }
  }
  return JointPolicy(std::move(out));
}

Eigen::VectorXd AggregateParameters(const DifferentialGame& game,
                                    const std::vector<double>& rho,
                                    const Eigen::VectorXd& base,
                                    const Eigen::VectorXd& predicted) {
  Eigen::VectorXd out = base;
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int off = game.BlockOffset(i), n = game.BlockSize(i);
    if (rho[i] == 1.0) continue;
    if (rho[i] == 0.0) {
      out.segment(off, n) = predicted.segment(off, n);
    } else {
      out.segment(off, n) = rho[i] * base.segment(off, n) +
                            (1.0 - rho[i]) * predicted.segment(off, n);
    }
  }
  return out;
}

std::pair<double, double> RestrictedGradient(const MetaGame& meta, double rho_0,
                                             double rho_1) {
  RequireTwoAgents(meta, "RestrictedGradient");
  const auto& g0 = meta.payoff()[0];
  const auto& g1 = meta.payoff()[1];
  // Profile 1: agent 0 predicted; 2: agent 1 predicted; 3: both. The
  // all-current entry is zero for genuine meta-games; it is kept so the
  // result is the exact partial derivative for any tensor.
  const double d0 = rho_1 * g0[0] + (1.0 - rho_1) * g0[2] - rho_1 * g0[1] -
                    (1.0 - rho_1) * g0[3];
  const double d1 = rho_0 * g1[0] + (1.0 - rho_0) * g1[1] - rho_0 * g1[2] -
                    (1.0 - rho_0) * g1[3];
  return {d0, d1};
}

FixedPointReport ClassifyFixedPoint(const MetaGame& meta) {
  RequireTwoAgents(meta, "ClassifyFixedPoint");
  const auto& g0 = meta.payoff()[0];
  const auto& g1 = meta.payoff()[1];
  FixedPointReport r;
  r.g_bar = {g0[3] - g0[2] - g0[1], g1[3] - g1[1] - g1[2]};
  const std::complex<double> root = std::sqrt(std::complex<double>(r.g_bar[0] * r.g_bar[1], 0.0));
  r.eigenvalues = {root, -root};
  if (r.g_bar[0] <= 0.0 && r.g_bar[1] <= 0.0) {
    r.label = FixedPointClass::kStable;
  } else if (r.g_bar[0] > 0.0 && r.g_bar[1] > 0.0) {
    r.label = FixedPointClass::kUnstableWarning;
  } else {
    r.label = FixedPointClass::kSaddle;
  }
  return r;
}

}  // namespace matrl
