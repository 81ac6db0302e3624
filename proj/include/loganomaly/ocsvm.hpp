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

#ifndef LOGANOMALY_OCSVM_HPP
#define LOGANOMALY_OCSVM_HPP

#include <cstddef>
#include <vector>

#include "loganomaly/features.hpp"
#include "loganomaly/kernel.hpp"
#include "loganomaly/syslog.hpp"

namespace loganomaly {

struct TrainConfig {
    double nu = 0.02;
    double tolerance = 1e-3;
    // 0 means "derive the default 10 * l * max(l, 1000) at train time".
    std::size_t max_iterations = 0;
    KernelSpec kernel;
};

struct OcsvmModel {
    KernelSpec kernel;
    std::vector<Point3> support_vectors;  // scaled feature space
    std::vector<double> alphas;           // aligned with support_vectors
    double rho = 0.0;
    FeatureScaler scaler;
    Dictionary dictionary;
    IdfTable idf;
    double nu = 0.02;
    std::size_t training_size = 0;
};

enum class Verdict { normal, anomaly };

const char* verdict_name(Verdict v);

struct Prediction {
    Verdict verdict = Verdict::normal;
    double decision_value = 0.0;
};

// Solves the one-class dual, min 1/2 a'Qa subject to 0 <= a_i <= 1/(nu l)
// and sum a = 1, by sequential minimal optimization with maximal-violating-
// pair selection (lowest index on ties). Kernels that can produce an
// indefinite Gram matrix (sigmoid; linear/polynomial with negative coef0)
// make the dual non-convex, so a converged working set may sit in a local
// minimum; for those the trainer jumps along negative-curvature pair
// directions when that lowers the objective and, at desk scale, adopts the
// multi-start reference solution when it is strictly better, re-tightening
// to a KKT point afterwards. Support vectors are the points with
// alpha > 1e-12 / (nu l). The returned model has empty dictionary/idf/scaler;
// the caller wires those in.
// Throws InvalidNu when nu is outside (0,1] or nu*l < 1, DidNotConverge when
// the iteration cap is hit before the KKT gap drops below cfg.tolerance.
OcsvmModel train(const std::vector<Point3>& X, const TrainConfig& cfg);

// Offset recovery: mean of sum_j alpha_j gram[j][i] over free support
// vectors; with none free, the midpoint between the at-upper-bound max and
// the zero-alpha min (one side alone when the other is empty).
double compute_rho(const std::vector<double>& gram,
                   const std::vector<double>& alphas, double nu,
                   std::size_t l);

// f(x) = sum_i alpha_i k(sv_i, x) - rho.
double decision_value(const OcsvmModel& model, const Point3& x);

// Batch scoring; parallel over points, output order matches input order.
// The serial variant is the reference for testing.
std::vector<double> decision_values(const OcsvmModel& model,
                                    const std::vector<Point3>& X);
std::vector<double> decision_values_serial(const OcsvmModel& model,
                                           const std::vector<Point3>& X);

// Full pipeline for one record: normalize, extract features, scale, score.
// Normal iff the decision value is >= 0 (boundary counts as Normal).
Prediction predict(const OcsvmModel& model, const LogRecord& record);

// Dual objective 1/2 a'Qa for diagnostics and oracle comparisons.
double dual_objective(const std::vector<double>& gram,
                      const std::vector<double>& alphas);

// Data-driven RBF width: 1 / (3 vbar), vbar being the mean per-component
// variance of X. Falls back to 1.0 for degenerate inputs.
double auto_rbf_gamma(const std::vector<Point3>& X);

}  // namespace loganomaly

#endif  // LOGANOMALY_OCSVM_HPP
