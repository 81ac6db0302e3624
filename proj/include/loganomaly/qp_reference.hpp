// Copyright 2025 loganomaly Authors
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

#ifndef LOGANOMALY_QP_REFERENCE_HPP
#define LOGANOMALY_QP_REFERENCE_HPP

#include <cstddef>
#include <vector>

namespace loganomaly {

// Independent desk-scale solver for the one-class dual, used as a test
// oracle for the SMO trainer. Projected gradient descent on 1/2 a'Qa with
// projection onto {0 <= a <= 1/(nu l), sum a = 1}; fixed step 0.5/|Q|_inf,
// at most 200,000 iterations per run, each run stopping when the
// gradient-mapping norm drops below 1e-10. A positive semidefinite matrix
// makes the problem convex and a single run from the uniform start
// suffices. An indefinite matrix (the sigmoid kernel produces them) makes
// the dual non-convex, and a single first-order run can stop in a local
// minimum, so the descent is repeated from a fixed set of seeded feasible
// starts. Returns the feasible iterate with the lowest objective seen
// across all runs. Throws InfeasibleBox when nu*l < 1.
std::vector<double> solve_dual_reference(const std::vector<double>& gram,
                                         double nu, std::size_t l);

// Euclidean projection of x onto {0 <= a <= cap, sum a = 1} by bisection on
// the shift parameter. Exposed for direct testing.
std::vector<double> project_capped_simplex(const std::vector<double>& x,
                                           double cap);

}  // namespace loganomaly

#endif  // LOGANOMALY_QP_REFERENCE_HPP
