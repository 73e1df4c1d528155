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
#include <random>

#include <gtest/gtest.h>

#include "matrl/trust_step.hpp"
#include "oracles.hpp"

namespace matrl {
namespace {

StochasticGame RandomSmallGame(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> states(1, 3), acts(2, 3);
  std::uniform_real_distribution<double> gamma(0.5, 0.95);
  return testing::RandomStochasticGame(rng, states(rng), {acts(rng), acts(rng)},
                                       gamma(rng));
}

TEST(EvaluateTest, SingleStateIsGeometricSeries) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const StochasticGame g = testing::RandomStochasticGame(rng, 1, {2, 3}, 0.8);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const EvaluationReport r = Evaluate(g, pi);
    for (int i = 0; i < 2; ++i) {
      double one_shot = 0.0;
      for (int j = 0; j < g.NumJointActions(); ++j) {
        one_shot += pi.JointProbability(g, 0, j) * g.Reward(i, 0, j);
      }
      EXPECT_NEAR(r.eta[i], one_shot / 0.2, 1e-12);
    }
  }
}

TEST(EvaluateTest, TwoStateChainWithSingleReward) {
  StochasticGame::Spec spec;
  spec.state_names = {"start", "sink"};
  spec.action_names = {{"go"}, {"go"}};
  spec.transition = {{{0.0, 1.0}}, {{0.0, 1.0}}};
  spec.reward = {{{1.0}, {0.0}}, {{0.0}, {0.0}}};
  spec.gamma = 0.9;
  spec.p0 = {1.0, 0.0};
  const StochasticGame g(std::move(spec));
  const EvaluationReport r = Evaluate(g, JointPolicy::Uniform(g));
  EXPECT_DOUBLE_EQ(r.eta[0], 1.0);
  EXPECT_DOUBLE_EQ(r.eta[1], 0.0);
  EXPECT_NEAR(r.visitation[0], 1.0, 1e-15);
  EXPECT_NEAR(r.visitation[1], 9.0, 1e-12);
}

TEST(EvaluateTest, ReportInvariantsOnRandomGames) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const EvaluationReport r = Evaluate(g, pi);
    EXPECT_NEAR(r.visitation.sum(), 1.0 / (1.0 - g.gamma()), 1e-8);
    EXPECT_GE(r.visitation.minCoeff(), 0.0);
    for (int i = 0; i < 2; ++i) {
      double eta = 0.0;
      for (int s = 0; s < g.NumStates(); ++s) {
        eta += g.p0()[s] * r.value[i][s];
        double weighted = 0.0;
        for (int j = 0; j < g.NumJointActions(); ++j) {
          weighted += pi.JointProbability(g, s, j) * r.advantage[i](s, j);
        }
        EXPECT_NEAR(weighted, 0.0, 1e-10);
      }
      EXPECT_NEAR(r.eta[i], eta, 1e-10);
    }
  }
}

TEST(EvaluateTest, MatchesBellmanIteration) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const auto eta = testing::IterativeReturn(g, pi);
    const EvaluationReport r = Evaluate(g, pi);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(r.eta[i], eta[i], 1e-9);
  }
}

TEST(EvaluateTest, VisitationMatchesDistributionRollout) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const int S = g.NumStates();
    Eigen::VectorXd p(S), d = Eigen::VectorXd::Zero(S);
    for (int s = 0; s < S; ++s) p[s] = g.p0()[s];
    double disc = 1.0;
    for (int step = 0; step < 2000; ++step) {
      d += disc * p;
      Eigen::VectorXd next = Eigen::VectorXd::Zero(S);
      for (int s = 0; s < S; ++s) {
        for (int j = 0; j < g.NumJointActions(); ++j) {
          const double w = p[s] * pi.JointProbability(g, s, j);
          for (int u = 0; u < S; ++u) next[u] += w * g.Transition(s, j, u);
        }
      }
      p = next;
      disc *= g.gamma();
    }
    EXPECT_LE((Evaluate(g, pi).visitation - d).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(EvaluateTest, MatchesMonteCarlo) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const auto mc = testing::MonteCarloReturn(g, pi, 20000, 100 + t);
    const EvaluationReport r = Evaluate(g, pi);
    for (int i = 0; i < 2; ++i) {
      EXPECT_LE(std::abs(r.eta[i] - mc.mean[i]), 4.0 * mc.stderr_[i]);
    }
  }
}

TEST(EvaluateTest, RejectsMismatchedPolicy) {
  std::mt19937_64 rng(6);
  const StochasticGame g = testing::RandomStochasticGame(rng, 2, {2, 2}, 0.9);
  const StochasticGame h = testing::RandomStochasticGame(rng, 3, {2, 2}, 0.9);
  EXPECT_THROW(Evaluate(g, JointPolicy::Uniform(h)), InvalidGameError);
}

TEST(ExpectedAdvantageTest, ZeroAtBase) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const EvaluationReport r = Evaluate(g, pi);
    for (double v : ExpectedAdvantage(g, r, pi)) EXPECT_EQ(v, 0.0);
  }
}

TEST(ExpectedAdvantageTest, SingleStateClosedForm) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const double gamma = 0.7;
    const StochasticGame g = testing::RandomStochasticGame(rng, 1, {2, 2}, gamma);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const JointPolicy cand = testing::RandomPolicy(rng, g);
    const auto got = ExpectedAdvantage(g, Evaluate(g, pi), cand);
    for (int i = 0; i < 2; ++i) {
      // (r(cand) - r(pi)) / (1 - gamma), expanded by hand.
      double r_pi = 0.0, r_cand = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double r = g.Reward(i, 0, 2 * a + b);
          r_pi += pi.agent(0)(0, a) * pi.agent(1)(0, b) * r;
          r_cand += cand.agent(0)(0, a) * cand.agent(1)(0, b) * r;
        }
      }
      EXPECT_NEAR(got[i], (r_cand - r_pi) / (1.0 - gamma), 1e-12);
    }
  }
}

TEST(ExpectedAdvantageTest, TrustStepDirectionIsNonNegative) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const JointPolicy pi = testing::RandomPolicy(rng, g);
    const EvaluationReport r = Evaluate(g, pi);
    const JointPolicy predicted = IidStep(g, pi, r, TrustStepConfig{});
    for (int i = 0; i < 2; ++i) {
      JointPolicy cand = pi;
      cand.mutable_agent(i) = predicted.agent(i);
      EXPECT_GE(ExpectedAdvantage(g, r, cand)[i], 0.0);
    }
  }
}

TEST(TvAlphaTest, Examples) {
  Eigen::MatrixXd p(1, 2), q(1, 2);
  p << 0.9, 0.1;
  q << 0.2, 0.8;
  EXPECT_NEAR(TvAlpha(p, q), 0.7, 1e-15);
  EXPECT_EQ(TvAlpha(p, p), 0.0);
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 0, 0.5, 0.5;
  b << 0, 1, 0.5, 0.5;
  EXPECT_EQ(TvAlpha(a, b), 1.0);
  EXPECT_THROW(TvAlpha(a, p), std::invalid_argument);
}

TEST(EpsilonMaxAdvTest, Examples) {
  EvaluationReport r;
  Eigen::MatrixXd adv(1, 4);
  adv << -2, 1, 0.5, -0.5;
  r.advantage = {adv};
  EXPECT_EQ(EpsilonMaxAdv(r, 0), 2.0);

  StochasticGame::Spec spec;
  spec.state_names = {"s"};
  spec.action_names = {{"a", "b"}, {"a", "b"}};
  spec.transition = {{{1.0}, {1.0}, {1.0}, {1.0}}};
  spec.reward = {{{0, 0, 0, 0}}, {{0, 0, 0, 0}}};
  spec.p0 = {1.0};
  const StochasticGame zero(std::move(spec));
  EXPECT_EQ(EpsilonMaxAdv(Evaluate(zero, JointPolicy::Uniform(zero)), 1), 0.0);
}

TEST(EpsilonMaxAdvTest, MatchesBruteForceScan) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 50; ++t) {
    const StochasticGame g = RandomSmallGame(rng);
    const EvaluationReport r = Evaluate(g, testing::RandomPolicy(rng, g));
    for (int i = 0; i < 2; ++i) {
      double m = 0.0;
      for (int s = 0; s < g.NumStates(); ++s) {
        for (int j = 0; j < g.NumJointActions(); ++j) {
          m = std::max(m, std::abs(r.advantage[i](s, j)));
        }
      }
      EXPECT_EQ(EpsilonMaxAdv(r, i), m);
    }
  }
}

TEST(LowerBoundTest, Examples) {
  EXPECT_EQ(IidLowerBound(0.3, 5.0, 0.9, 0.0, 0.0), 0.3);
  // 0.5 - (4 * 0.9 / 0.01) * 0.19^2
  EXPECT_NEAR(IidLowerBound(0.5, 1.0, 0.9, 0.1, 0.1), -12.496, 1e-12);
  EXPECT_EQ(IidLowerBound(0.5, 1.0, 0.9, 0.2, 0.05),
            IidLowerBound(0.5, 1.0, 0.9, 0.05, 0.2));
  EXPECT_EQ(MixtureLowerBound(0.5, 1.0, 0.9, 0.2, 0.05, 0.0, 0.0),
            IidLowerBound(0.5, 1.0, 0.9, 0.2, 0.05));
  EXPECT_EQ(MixtureLowerBound(0.5, 1.0, 0.9, 0.2, 0.05, 1.0, 1.0), 0.5);
}

TEST(LowerBoundTest, DomainErrors) {
  EXPECT_THROW(IidLowerBound(0, 1, 0.9, 1.1, 0), std::invalid_argument);
  EXPECT_THROW(IidLowerBound(0, 1, 0.9, 0, -0.1), std::invalid_argument);
  EXPECT_THROW(IidLowerBound(0, -1, 0.9, 0, 0), std::invalid_argument);
  EXPECT_THROW(IidLowerBound(0, 1, 1.0, 0, 0), std::invalid_argument);
  EXPECT_THROW(MixtureLowerBound(0, 1, 0.9, 0, 0, 1.5, 0), std::invalid_argument);
  EXPECT_THROW(IidLowerBound(0, NAN, 0.9, 0, 0), std::invalid_argument);
}

TEST(LowerBoundTest, MixtureNeverLooserThanIid) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const double g = u(rng) - 0.5, eps = 3 * u(rng), gamma = 0.99 * u(rng);
    const double ai = u(rng), aj = u(rng), ri = u(rng), rj = u(rng);
    EXPECT_GE(MixtureLowerBound(g, eps, gamma, ai, aj, ri, rj),
              IidLowerBound(g, eps, gamma, ai, aj));
  }
}

}  // namespace
}  // namespace matrl
