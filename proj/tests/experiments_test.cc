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

#include "matrl/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "matrl/csv.hpp"
#include "oracles.hpp"

namespace matrl {
namespace {

namespace fs = std::filesystem;

fs::path ScratchDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir = fs::temp_directory_path() / "matrl_experiments_test" /
                       (std::string(info->test_suite_name()) + "." + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

Eigen::Matrix2d PayoffMatrix(const MatrixGame& g, int agent) {
  Eigen::Matrix2d m;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m(a, b) = g.Payoff2(agent, a, b);
  }
  return m;
}

TEST(NashEquilibria2x2Test, AgreesWithSupportEnumeration) {
  for (GameClass c : {GameClass::kCoordination, GameClass::kAnticoordination,
                      GameClass::kCyclic}) {
    for (int seed = 0; seed < 300; ++seed) {
      const MatrixGame g = GenerateRandom2x2(c, seed);
      const auto got = NashEquilibria2x2(g);
      const auto want = testing::SupportEnumeration2x2(PayoffMatrix(g, 0), PayoffMatrix(g, 1));
      ASSERT_EQ(got.size(), want.size());
      EXPECT_EQ(got.size(), c == GameClass::kCyclic ? 1u : 3u);
      for (const auto& w : want) {
        bool found = false;
        for (const auto& e : got) found = found || (e - w).norm() < 1e-12;
        EXPECT_TRUE(found) << GameClassName(c) << " seed " << seed;
      }
    }
  }
}

TEST(RunMatrixGameTest, DominantStrategyConvergesQuickly) {
  const MatrixGame pd = MatrixGame::TwoByTwo({{{3, 0}, {5, 1}}}, {{{3, 5}, {0, 1}}});
  SweepConfig c;
  for (Method m : {Method::kIga, Method::kLookahead, Method::kMatrl}) {
    const auto steps = RunMatrixGame(pd, m, c, 1);
    ASSERT_TRUE(steps.has_value()) << MethodName(m);
    EXPECT_LT(*steps, 100) << MethodName(m);
  }
}

TEST(SweepTest, DeterministicAcrossThreadCounts) {
  SweepConfig c;
  c.games_per_class = 12;
  c.max_iterations = 300;
  c.threads = 1;
  const SweepResult a = SweepRandomGames(c);
  c.threads = 3;
  const SweepResult b = SweepRandomGames(c);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  EXPECT_EQ(a.runs.size(), 3u * 12u * 3u);
  for (size_t k = 0; k < a.runs.size(); ++k) {
    EXPECT_EQ(a.runs[k].converged_at, b.runs[k].converged_at);
    EXPECT_EQ(a.runs[k].seed, b.runs[k].seed);
  }
  const ConvergenceCell& cell = a.stats.Get(GameClass::kCoordination, Method::kIga);
  EXPECT_EQ(cell.games, 12);
  EXPECT_NEAR(cell.rate, 100.0 * cell.converged / 12.0, 1e-12);
  EXPECT_THROW(a.stats.Get(GameClass::kOther, Method::kIga), std::out_of_range);
}

TEST(SweepTest, ConfigValidationAndFiles) {
  SweepConfig c;
  c.classes = {GameClass::kOther};
  EXPECT_THROW(SweepRandomGames(c), std::invalid_argument);
  c = SweepConfig{};
  c.methods = {Method::kExtragradient};
  EXPECT_THROW(SweepRandomGames(c), std::invalid_argument);

  const fs::path dir = ScratchDir();
  WriteText(dir / "cfg.json",
            R"({"games_per_class": 4, "classes": ["cyclic"], "methods": ["iga", "matrl"],)"
            R"( "max_iterations": 50, "seed_base": 10, "delta": 0.05})");
  const SweepConfig loaded = LoadSweepConfig(dir / "cfg.json");
  EXPECT_EQ(loaded.games_per_class, 4);
  EXPECT_EQ(loaded.seed_base, 10u);
  EXPECT_EQ(loaded.trust.delta, 0.05);
  const SweepResult r = SweepRandomGames(loaded);
  WriteSweepSummary(r.stats, dir / "summary.csv");
  WriteSweepRuns(r, dir / "runs.csv");
  const CsvTable summary = ReadCsv(dir / "summary.csv");
  EXPECT_EQ(summary.rows.size(), 2u);
  EXPECT_EQ(summary.header.size(), 8u);
  const CsvTable runs = ReadCsv(dir / "runs.csv");
  EXPECT_EQ(runs.rows.size(), 8u);
  EXPECT_EQ(runs.rows[0][1], "10");

  WriteText(dir / "bad.json", R"({"games_per_class": "many"})");
  EXPECT_THROW(LoadSweepConfig(dir / "bad.json"), std::runtime_error);
}

TEST(DifferentialExperimentTest, WritesTrajectoriesAndSummary) {
  const fs::path dir = ScratchDir();
  DifferentialExperimentConfig c;
  c.max_iterations = 300;
  const auto trajs = RunDifferentialExperiment(c, dir);
  ASSERT_EQ(trajs.size(), 4u);
  for (const char* m : {"iga", "extragradient", "lookahead", "matrl"}) {
    const CsvTable t = ReadCsv(dir / (std::string(m) + ".csv"));
    EXPECT_EQ(t.rows.size(), 301u) << m;
    EXPECT_EQ(t.header.size(), 6u);
    EXPECT_EQ(t.Column("theta_1"), 2);
  }
  const CsvTable s = ReadCsv(dir / "summary.csv");
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_EQ(s.rows[0][0], "iga");
  EXPECT_EQ(s.rows[0][1], "-1");
  EXPECT_NE(s.rows[3][1], "-1");
}

TEST(DifferentialExperimentTest, ZeroIterations) {
  const fs::path dir = ScratchDir();
  DifferentialExperimentConfig c;
  c.max_iterations = 0;
  const auto trajs = RunDifferentialExperiment(c, dir);
  for (const auto& t : trajs) {
    EXPECT_TRUE(t.records.empty());
    EXPECT_FALSE(t.converged_at.has_value());
    EXPECT_TRUE(ReadCsv(dir / (t.method + ".csv")).rows.empty());
  }
  const CsvTable s = ReadCsv(dir / "summary.csv");
  for (const auto& row : s.rows) EXPECT_EQ(row[1], "-1");
}

TEST(StochasticExperimentTest, ZeroIterationsHeaderOnly) {
  const fs::path dir = ScratchDir();
  StochasticExperimentConfig c;
  c.iterations = 0;
  const StochasticGame g = LoadStochasticGameByName(c.game);
  const auto res = RunStochasticExperiment(g, c);
  WriteLearningCurve(res, g.NumAgents(), dir / "curve.csv");
  EXPECT_EQ(Slurp(dir / "curve.csv"), "iteration,eta_0,eta_1,rho_0,rho_1,classification\n");
}

TEST(StochasticExperimentTest, PrisonersDilemmaEndsInMutualDefection) {
  StochasticExperimentConfig c;
  c.game = "builtin:prisoners_dilemma";
  c.iterations = 150;
  const StochasticGame g = LoadStochasticGameByName(c.game);
  const auto res = RunStochasticExperiment(g, c);
  const int defect = 1;
  EXPECT_GT(res.final_policy.agent(0)(0, defect), 0.99);
  EXPECT_GT(res.final_policy.agent(1)(0, defect), 0.99);
  // Mutual defection pays 1 per step.
  EXPECT_NEAR(res.final_eta[0], 1.0 / (1.0 - g.gamma()), 0.2);
}

TEST(StochasticExperimentTest, CoinGatheringIsMostlyMonotone) {
  StochasticExperimentConfig c;
  const StochasticGame g = LoadStochasticGameByName(c.game);
  const auto res = RunStochasticExperiment(g, c);
  ASSERT_EQ(res.rows.size(), 200u);
  for (int i = 0; i < 2; ++i) {
    int ok = 0;
    for (size_t k = 0; k + 1 < res.rows.size(); ++k) {
      ok += res.rows[k + 1].eta[i] >= res.rows[k].eta[i];
    }
    ok += res.final_eta[i] >= res.rows.back().eta[i];
    EXPECT_GE(ok, 180) << "agent " << i;
  }
  for (const auto& row : res.rows) {
    EXPECT_NE(row.classification, "unclassified");
    for (double r : row.rho) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

// --- plots ------------------------------------------------------------------

struct Polyline {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string Attribute(const std::string& tag, const std::string& name) {
  const std::string key = name + "=\"";
  const size_t at = tag.find(key);
  if (at == std::string::npos) return "";
  const size_t begin = at + key.size();
  return tag.substr(begin, tag.find('"', begin) - begin);
}

// std::regex recurses per character and overflows on long point lists.
std::vector<Polyline> ParsePolylines(const std::string& svg) {
  std::vector<Polyline> out;
  for (size_t at = svg.find("<polyline"); at != std::string::npos;
       at = svg.find("<polyline", at + 1)) {
    const std::string tag = svg.substr(at, svg.find('>', at) - at);
    Polyline p{Attribute(tag, "data-label"), {}};
    std::istringstream pts(Attribute(tag, "points"));
    std::string tok;
    while (pts >> tok) {
      const size_t comma = tok.find(',');
      p.points.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

TEST(PlotTest, TwoPointTrajectory) {
  const fs::path dir = ScratchDir();
  WriteText(dir / "t.csv", "iteration,theta_0,theta_1\n0,1,2\n1,0.5,1\n");
  const std::string svg = RenderPlot({dir / "t.csv"}, PlotKind::kTrajectory2d);
  const auto lines = ParsePolylines(svg);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].points.size(), 2u);
  EXPECT_EQ(lines[0].label, "t");
}

TEST(PlotTest, ByteIdenticalOutput) {
  const fs::path dir = ScratchDir();
  WriteText(dir / "t.csv", "iteration,theta_0,theta_1\n0,1,2\n1,0.5,1\n2,0.1,0.3\n");
  EmitPlot({dir / "t.csv"}, PlotKind::kTrajectory2d, dir / "a.svg");
  EmitPlot({dir / "t.csv"}, PlotKind::kTrajectory2d, dir / "b.svg");
  EXPECT_EQ(Slurp(dir / "a.svg"), Slurp(dir / "b.svg"));
  EXPECT_FALSE(Slurp(dir / "a.svg").empty());
}

TEST(PlotTest, DifferentialFigureMatrlArrivesFirst) {
  const fs::path dir = ScratchDir();
  const auto trajs = RunDifferentialExperiment(DifferentialExperimentConfig{}, dir);
  std::vector<fs::path> inputs;
  for (const auto& t : trajs) inputs.push_back(dir / (t.method + ".csv"));
  const std::string svg = RenderPlot(inputs, PlotKind::kTrajectory2d);
  const auto lines = ParsePolylines(svg);
  ASSERT_EQ(lines.size(), 4u);
  // Recover the data-space bounds from the axis captions and invert the map.
  const std::regex cap(R"re(theta_(\d) \[([-0-9.]+), ([-0-9.]+)\])re");
  double lo[2] = {0, 0}, hi[2] = {1, 1};
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cap);
       it != std::sregex_iterator(); ++it) {
    const int k = std::stoi((*it)[1]);
    lo[k] = std::stod((*it)[2]);
    hi[k] = std::stod((*it)[3]);
  }
  const double w = 640, h = 480, m = 48;
  // First rendered point within 0.05 of the origin, well above pixel size.
  std::map<std::string, size_t> arrival;
  for (const auto& l : lines) {
    size_t k = 0;
    for (; k < l.points.size(); ++k) {
      const auto [px, py] = l.points[k];
      const double x = lo[0] + (px - m) / (w - 2 * m) * (hi[0] - lo[0]);
      const double y = lo[1] + (h - m - py) / (h - 2 * m) * (hi[1] - lo[1]);
      if (std::hypot(x, y) < 0.05) break;
    }
    arrival[l.label] = k;
  }
  ASSERT_EQ(arrival.size(), 4u);
  for (const auto& [label, k] : arrival) {
    if (label != "matrl") {
      EXPECT_LT(arrival["matrl"], k) << label;
    }
  }
}

TEST(PlotTest, LearningCurveHasOneSeriesPerAgent) {
  const fs::path dir = ScratchDir();
  WriteText(dir / "c.csv",
            "iteration,eta_0,eta_1,rho_0,rho_1,classification\n0,1,2,1,1,stable\n1,2,3,0,1,saddle\n");
  const auto lines = ParsePolylines(RenderPlot({dir / "c.csv"}, PlotKind::kLearningCurve));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].label, "eta_0");
}

TEST(PlotTest, MalformedCsvReportsLine) {
  const fs::path dir = ScratchDir();
  WriteText(dir / "bad.csv", "iteration,theta_0,theta_1\n0,1,2\n1,abc,1\n");
  try {
    RenderPlot({dir / "bad.csv"}, PlotKind::kTrajectory2d);
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  WriteText(dir / "ragged.csv", "iteration,theta_0,theta_1\n0,1,2\n1,2\n");
  try {
    RenderPlot({dir / "ragged.csv"}, PlotKind::kTrajectory2d);
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  WriteText(dir / "nocols.csv", "iteration,x\n0,1\n");
  EXPECT_THROW(RenderPlot({dir / "nocols.csv"}, PlotKind::kTrajectory2d), CsvError);
  EXPECT_THROW(ParsePlotKind("histogram"), std::invalid_argument);
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) {
    const CsvTable t = ParseCsv("x\n" + FormatDouble(v) + "\n");
    EXPECT_EQ(t.Number(0, 0), v);
  }
}

}  // namespace
}  // namespace matrl
