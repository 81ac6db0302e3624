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

#include "loganomaly/qp_reference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "loganomaly/errors.hpp"

namespace loganomaly {

namespace {

// Number of extra seeded descent runs for non-convex duals, and the fixed
// seed that makes them reproducible. Eight restarts already recovered the
// global minimum on every sampled indefinite instance; sixteen doubles the
// margin at negligible cost.
constexpr int kRestartCount = 16;
constexpr std::uint64_t kRestartSeed = 0x1f2e3d4c5b6a7988ULL;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Cholesky factorization attempt with a small diagonal ridge. Success means
// the matrix is positive semidefinite to working precision, so the dual is
// convex and every descent run reaches the same objective.
bool is_positive_semidefinite(const std::vector<double>& gram, std::size_t l) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        max_diag = std::max(max_diag, std::abs(gram[i * l + i]));
    }
    const double ridge = 1e-10 * std::max(max_diag, 1.0);
    std::vector<double> chol(gram);
    for (std::size_t i = 0; i < l; ++i) {
        chol[i * l + i] += ridge;
    }
    for (std::size_t j = 0; j < l; ++j) {
        double d = chol[j * l + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= chol[j * l + k] * chol[j * l + k];
        }
        if (d <= 0.0) {
            return false;
        }
        const double root = std::sqrt(d);
        chol[j * l + j] = root;
        for (std::size_t i = j + 1; i < l; ++i) {
            double v = chol[i * l + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= chol[i * l + k] * chol[j * l + k];
            }
            chol[i * l + j] = v / root;
        }
    }
    return true;
}

}  // namespace

std::vector<double> project_capped_simplex(const std::vector<double>& x,
                                           double cap) {
    // Find the shift t with sum_i clamp(x_i - t, 0, cap) = 1 by bisection.
    // The sum is continuous and nonincreasing in t.
    const std::size_t n = x.size();
    double lo = *std::min_element(x.begin(), x.end()) - cap - 1.0;
    double hi = *std::max_element(x.begin(), x.end()) + 1.0;
    auto mass = [&](double t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += std::clamp(x[i] - t, 0.0, cap);
        }
        return sum;
    };
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) >= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::clamp(x[i] - t, 0.0, cap);
    }
    // Bisection leaves a sub-ulp mass error; push it into a coordinate with
    // room so the iterate is feasible to machine precision.
    double sum = 0.0;
    for (double v : out) sum += v;
    double residual = 1.0 - sum;
    for (std::size_t i = 0; i < n && residual != 0.0; ++i) {
        const double adjusted = std::clamp(out[i] + residual, 0.0, cap);
        residual -= adjusted - out[i];
        out[i] = adjusted;
    }
    return out;
}

std::vector<double> solve_dual_reference(const std::vector<double>& gram,
                                         double nu, std::size_t l) {
    if (nu * static_cast<double>(l) < 1.0) {
        throw InfeasibleBox("nu * l = " +
                            std::to_string(nu * static_cast<double>(l)) +
                            " < 1: no feasible alpha exists");
    }
    const double cap = 1.0 / (nu * static_cast<double>(l));

    // Fixed step 0.5 / |Q|_inf (max absolute row sum).
    double norm_inf = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
            row += std::abs(gram[i * l + j]);
        }
        norm_inf = std::max(norm_inf, row);
    }
    const double step = 0.5 / std::max(norm_inf, 1e-300);

    auto objective = [&](const std::vector<double>& a) {
        double total = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < l; ++j) {
                row += a[j] * gram[i * l + j];
            }
            total += a[i] * row;
        }
        return 0.5 * total;
    };

    std::vector<double> best;
    double best_objective = 0.0;

    auto descend_from = [&](std::vector<double> start) {
        std::vector<double> alpha = project_capped_simplex(start, cap);
        double run_best_objective = objective(alpha);
        std::vector<double> run_best = alpha;

        std::vector<double> grad(l), trial(l);
        for (int iter = 0; iter < 200000; ++iter) {
            for (std::size_t i = 0; i < l; ++i) {
                double sum = 0.0;
                for (std::size_t j = 0; j < l; ++j) {
                    sum += alpha[j] * gram[i * l + j];
                }
                grad[i] = sum;
            }
            for (std::size_t i = 0; i < l; ++i) {
                trial[i] = alpha[i] - step * grad[i];
            }
            std::vector<double> next = project_capped_simplex(trial, cap);

            // Gradient mapping: the step actually taken after projection.
            double mapping = 0.0;
            for (std::size_t i = 0; i < l; ++i) {
                const double d = (alpha[i] - next[i]) / step;
                mapping += d * d;
            }
            alpha = std::move(next);

            const double value = objective(alpha);
            if (value < run_best_objective) {
                run_best_objective = value;
                run_best = alpha;
            }
            if (std::sqrt(mapping) < 1e-10) break;
        }
        if (best.empty() || run_best_objective < best_objective) {
            best_objective = run_best_objective;
            best = std::move(run_best);
        }
    };

    descend_from(std::vector<double>(l, 1.0 / static_cast<double>(l)));

    // A convex dual has a single optimal value, so one run settles it. An
    // indefinite matrix can strand a single run in a local minimum; rerun
    // from seeded feasible starts and keep the lowest objective.
    if (!is_positive_semidefinite(gram, l)) {
        std::mt19937_64 rng(kRestartSeed);
        for (int r = 0; r < kRestartCount; ++r) {
            std::vector<double> start(l);
            for (std::size_t i = 0; i < l; ++i) {
                start[i] = cap * uniform01(rng);
            }
            descend_from(std::move(start));
        }
    }
    return best;
}

}  // namespace loganomaly
