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

#ifndef MATRL_SIMPLEX_HPP_
#define MATRL_SIMPLEX_HPP_

#include <Eigen/Dense>

namespace matrl {

// Euclidean projection onto the probability simplex (sort-based, O(n log n)).
Eigen::VectorXd ProjectToSimplex(const Eigen::VectorXd& v);

// Half the L1 distance between two distributions.
double TotalVariation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace matrl

#endif  // MATRL_SIMPLEX_HPP_
