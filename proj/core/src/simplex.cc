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

#include "matrl/simplex.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace matrl {

Eigen::VectorXd ProjectToSimplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (int j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  Eigen::VectorXd out = (v.array() - tau).cwiseMax(0.0);
  // Renormalise away the last bit of rounding so rows sum to 1 to ~1 ulp.
  const double s = out.sum();
  if (s > 0.0) out /= s;
  return out;
}

double TotalVariation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace matrl
