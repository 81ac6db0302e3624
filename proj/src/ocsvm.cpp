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

#include "loganomaly/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "loganomaly/errors.hpp"
#include "loganomaly/qp_reference.hpp"

namespace loganomaly {

namespace {

// Full Gram matrix for l <= 10,000; on-demand row cache above that.
class GramSource {
public:
    static constexpr std::size_t kFullMatrixLimit = 10000;
    static constexpr std::size_t kCacheBytes = 256u << 20;

    GramSource(const KernelSpec& spec, const std::vector<Point3>& X)
        : spec_(spec), X_(X), l_(X.size()) {
        if (l_ <= kFullMatrixLimit) {
            full_ = gram_matrix(spec, X);
        } else {
            max_rows_ = std::max<std::size_t>(4, kCacheBytes / (sizeof(double) * l_));
        }
    }

    bool has_full_matrix() const { return !full_.empty(); }
    const std::vector<double>& full_matrix() const { return full_; }

    // Pointer stays valid until two further row() calls.
    const double* row(std::size_t i) {
        if (!full_.empty()) return full_.data() + i * l_;
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            note_use(i);
            return it->second.data();
        }
        std::vector<double> values(l_);
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(l_);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            values[static_cast<std::size_t>(j)] =
                kernel_eval(spec_, X_[i], X_[static_cast<std::size_t>(j)]);
        }
        while (cache_.size() >= max_rows_ && !fifo_.empty()) {
            std::size_t victim = fifo_.front();
            fifo_.pop_front();
            // Never evict the rows in use by the current iteration.
            if (victim == recent_[0] || victim == recent_[1]) {
                fifo_.push_back(victim);
                continue;
            }
            cache_.erase(victim);
        }
        auto* slot = &cache_.emplace(i, std::move(values)).first->second;
        fifo_.push_back(i);
        note_use(i);
        return slot->data();
    }

private:
    void note_use(std::size_t i) {
        recent_[1] = recent_[0];
        recent_[0] = i;
    }

    const KernelSpec& spec_;
    const std::vector<Point3>& X_;
    std::size_t l_;
    std::vector<double> full_;
    std::unordered_map<std::size_t, std::vector<double>> cache_;
    std::deque<std::size_t> fifo_;
    std::size_t max_rows_ = 0;
    std::size_t recent_[2] = {static_cast<std::size_t>(-1),
                              static_cast<std::size_t>(-1)};
};

// Offset from fresh gradient values g_i = (Q alpha)_i: mean over free
// support vectors, else midpoint between the bound groups.
double rho_from_gradient(const std::vector<double>& g,
                         const std::vector<double>& alphas, double upper) {
    const double tau = 1e-9 * upper;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double at_upper_max = -std::numeric_limits<double>::infinity();
    double at_zero_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double a = alphas[i];
        if (a > tau && a < upper - tau) {
            free_sum += g[i];
            ++free_count;
        } else if (a >= upper - tau) {
            at_upper_max = std::max(at_upper_max, g[i]);
        } else {
            at_zero_min = std::min(at_zero_min, g[i]);
        }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    const bool have_upper = std::isfinite(at_upper_max);
    const bool have_zero = std::isfinite(at_zero_min);
    if (have_upper && have_zero) return 0.5 * (at_upper_max + at_zero_min);
    if (have_upper) return at_upper_max;
    if (have_zero) return at_zero_min;
    return 0.0;
}

void validate_nu(double nu, std::size_t l) {
    if (!(nu > 0.0) || nu > 1.0) {
        throw InvalidNu("nu must lie in (0, 1], got " + std::to_string(nu));
    }
    if (nu * static_cast<double>(l) < 1.0) {
        throw InvalidNu("nu * l = " + std::to_string(nu * static_cast<double>(l)) +
                        " < 1: the box constraint cannot reach sum 1 "
                        "(need more training points or a larger nu)");
    }
}

// Whether the kernel can produce a Gram matrix that is not positive
// semidefinite. rbf is always PSD; linear and polynomial are PSD for
// coef0 >= 0; sigmoid is indefinite in general.
bool maybe_indefinite(const KernelSpec& spec) {
    switch (spec.kind) {
    case KernelKind::rbf:
        return false;
    case KernelKind::linear:
    case KernelKind::polynomial:
        return spec.coef0 < 0.0;
    case KernelKind::sigmoid:
        return true;
    }
    return true;
}

// Largest training size at which an indefinite dual is cross-checked
// against the multi-start reference solver. Matches the desk scale that
// solver is written for; beyond it the working-set solution stands.
constexpr std::size_t kCrossCheckLimit = 64;

}  // namespace

const char* verdict_name(Verdict v) {
    return v == Verdict::normal ? "normal" : "anomaly";
}

double dual_objective(const std::vector<double>& gram,
                      const std::vector<double>& alphas) {
    const std::size_t l = alphas.size();
    double total = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
            row += alphas[j] * gram[i * l + j];
        }
        total += alphas[i] * row;
    }
    return 0.5 * total;
}

double compute_rho(const std::vector<double>& gram,
                   const std::vector<double>& alphas, double nu,
                   std::size_t l) {
    const double upper = 1.0 / (nu * static_cast<double>(l));
    std::vector<double> g(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
            sum += alphas[j] * gram[j * l + i];
        }
        g[i] = sum;
    }
    return rho_from_gradient(g, alphas, upper);
}

double auto_rbf_gamma(const std::vector<Point3>& X) {
    if (X.size() < 2) return 1.0;
    const double l = static_cast<double>(X.size());
    double variance_sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (const Point3& x : X) sum += x[c];
        const double mean = sum / l;
        double ss = 0.0;
        for (const Point3& x : X) ss += (x[c] - mean) * (x[c] - mean);
        variance_sum += ss / (l - 1.0);
    }
    if (variance_sum <= 0.0) return 1.0;
    // 1 / (3 vbar) with vbar the mean per-component variance.
    return 1.0 / variance_sum;
}

OcsvmModel train(const std::vector<Point3>& X, const TrainConfig& cfg) {
    const std::size_t l = X.size();
    if (l == 0) {
        throw InvalidNu("cannot train on an empty feature set");
    }
    validate_nu(cfg.nu, l);

    const double upper = 1.0 / (cfg.nu * static_cast<double>(l));
    const std::size_t max_iterations =
        cfg.max_iterations > 0
            ? cfg.max_iterations
            : 10 * l * std::max<std::size_t>(l, 1000);

    GramSource gram(cfg.kernel, X);

    // Self-similarities, needed by the curvature checks below without
    // touching the row cache.
    const bool check_curvature = maybe_indefinite(cfg.kernel);
    std::vector<double> diag;
    if (check_curvature) {
        diag.resize(l);
        for (std::size_t k = 0; k < l; ++k) {
            diag[k] = kernel_eval(cfg.kernel, X[k], X[k]);
        }
    }

    // Feasible start: the first floor(nu*l) points at the upper bound, the
    // next point takes the fractional remainder, the rest zero.
    std::vector<double> alpha(l, 0.0);
    {
        const double nl = cfg.nu * static_cast<double>(l);
        const std::size_t full = std::min(l, static_cast<std::size_t>(nl));
        for (std::size_t i = 0; i < full; ++i) alpha[i] = upper;
        const double remainder = nl - static_cast<double>(full);
        if (remainder > 0.0 && full < l) alpha[full] = remainder * upper;
    }

    // g_i = (Q alpha)_i, maintained incrementally across updates.
    std::vector<double> g(l, 0.0);
    for (std::size_t j = 0; j < l; ++j) {
        if (alpha[j] == 0.0) continue;
        const double* row = gram.row(j);
        const double aj = alpha[j];
        for (std::size_t i = 0; i < l; ++i) g[i] += aj * row[i];
    }

    double gap = 0.0;
    std::size_t iter = 0;
    bool converged = false;
    bool cross_checked = false;
    for (; iter < max_iterations; ++iter) {
        // Maximal violating pair; lowest index wins ties.
        std::size_t up = l, down = l;
        double g_min = std::numeric_limits<double>::infinity();
        double g_max = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < l; ++k) {
            if (alpha[k] < upper && g[k] < g_min) {
                g_min = g[k];
                up = k;
            }
            if (alpha[k] > 0.0 && g[k] > g_max) {
                g_max = g[k];
                down = k;
            }
        }
        if (up == l || down == l) {
            // One of the index sets is empty (nu = 1): the box has a single
            // feasible point and it is already optimal.
            converged = true;
            gap = 0.0;
            break;
        }
        gap = g_max - g_min;
        if (gap <= cfg.tolerance) {
            // A first-order point of an indefinite dual need not minimize:
            // along a pair direction with negative curvature the objective
            // is concave, so its minimum over the feasible segment sits at
            // an endpoint. Jump to the best strictly improving endpoint and
            // resume; stop once no such direction remains.
            if (check_curvature) {
                std::size_t esc_up = l, esc_down = l;
                double esc_change = -1e-12;
                double esc_step = 0.0;
                for (std::size_t i = 0; i < l; ++i) {
                    if (alpha[i] >= upper) continue;
                    const double* row_i = gram.row(i);
                    for (std::size_t j = 0; j < l; ++j) {
                        if (j == i || alpha[j] <= 0.0) continue;
                        const double q = diag[i] + diag[j] - 2.0 * row_i[j];
                        if (q >= -1e-9) continue;
                        const double t = std::min(upper - alpha[i], alpha[j]);
                        if (t <= 0.0) continue;
                        const double change = (g[i] - g[j]) * t + 0.5 * q * t * t;
                        if (change < esc_change) {
                            esc_change = change;
                            esc_up = i;
                            esc_down = j;
                            esc_step = t;
                        }
                    }
                }
                if (esc_up != l) {
                    const double* row_up = gram.row(esc_up);
                    const double* row_down = gram.row(esc_down);
                    const double room_up = upper - alpha[esc_up];
                    const double room_down = alpha[esc_down];
                    alpha[esc_up] += esc_step;
                    alpha[esc_down] -= esc_step;
                    if (esc_step == room_up) alpha[esc_up] = upper;
                    if (esc_step == room_down) alpha[esc_down] = 0.0;
                    for (std::size_t k = 0; k < l; ++k) {
                        g[k] += esc_step * (row_up[k] - row_down[k]);
                    }
                    continue;
                }
                // Pair moves cannot leave a pairwise-optimal local minimum
                // of a non-convex dual; escaping one can require several
                // coordinates to move at once. At desk scale, compare
                // against the multi-start reference solver and adopt its
                // point when strictly better, then let the working-set loop
                // tighten it back to a KKT point.
                if (!cross_checked && l <= kCrossCheckLimit) {
                    cross_checked = true;
                    std::vector<double> dense(l * l);
                    for (std::size_t i = 0; i < l; ++i) {
                        const double* row = gram.row(i);
                        std::copy(row, row + l, dense.begin() + i * l);
                    }
                    const std::vector<double> candidate =
                        solve_dual_reference(dense, cfg.nu, l);
                    auto objective_of = [&](const std::vector<double>& a) {
                        double total = 0.0;
                        for (std::size_t i = 0; i < l; ++i) {
                            double row_sum = 0.0;
                            for (std::size_t j = 0; j < l; ++j) {
                                row_sum += a[j] * dense[i * l + j];
                            }
                            total += a[i] * row_sum;
                        }
                        return 0.5 * total;
                    };
                    if (objective_of(candidate) <
                        objective_of(alpha) - 1e-12) {
                        alpha = candidate;
                        for (std::size_t k = 0; k < l; ++k) {
                            const double* row = gram.row(k);
                            double sum = 0.0;
                            for (std::size_t j = 0; j < l; ++j) {
                                sum += alpha[j] * row[j];
                            }
                            g[k] = sum;
                        }
                        continue;
                    }
                }
            }
            converged = true;
            break;
        }

        const double* row_up = gram.row(up);
        const double* row_down = gram.row(down);
        const double quad =
            row_up[up] + row_down[down] - 2.0 * row_up[down];
        // Indefinite kernels (sigmoid) can make quad nonpositive; a full
        // step to the nearest bound still decreases the objective.
        double delta = gap / std::max(quad, 1e-12);
        const double room_up = upper - alpha[up];
        const double room_down = alpha[down];
        if (delta > room_up) delta = room_up;
        if (delta > room_down) delta = room_down;

        alpha[up] += delta;
        alpha[down] -= delta;
        if (delta == room_up) alpha[up] = upper;
        if (delta == room_down) alpha[down] = 0.0;

        for (std::size_t k = 0; k < l; ++k) {
            g[k] += delta * (row_up[k] - row_down[k]);
        }
    }
    if (!converged) {
        throw DidNotConverge(iter, gap);
    }

    // Zero out numerically dead coefficients, then repair the equality
    // constraint on the survivors.
    const double support_threshold = 1e-12 * upper;
    for (double& a : alpha) {
        if (a <= support_threshold) a = 0.0;
    }
    double sum = 0.0;
    for (double a : alpha) sum += a;
    const double residual = 1.0 - sum;
    if (residual != 0.0) {
        const double tau = 1e-9 * upper;
        std::size_t target = l;
        double best = -1.0;
        for (std::size_t k = 0; k < l; ++k) {
            if (alpha[k] > tau && alpha[k] < upper - tau && alpha[k] > best) {
                best = alpha[k];
                target = k;
            }
        }
        if (target == l) {
            for (std::size_t k = 0; k < l; ++k) {
                if (alpha[k] > best) {
                    best = alpha[k];
                    target = k;
                }
            }
        }
        alpha[target] += residual;
    }

    OcsvmModel model;
    model.kernel = cfg.kernel;
    model.nu = cfg.nu;
    model.training_size = l;
    if (gram.has_full_matrix()) {
        model.rho = compute_rho(gram.full_matrix(), alpha, cfg.nu, l);
    } else {
        std::vector<double> fresh(l, 0.0);
        for (std::size_t i = 0; i < l; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < l; ++j) {
                if (alpha[j] == 0.0) continue;
                s += alpha[j] * kernel_eval(cfg.kernel, X[j], X[i]);
            }
            fresh[i] = s;
        }
        model.rho = rho_from_gradient(fresh, alpha, upper);
    }
    for (std::size_t k = 0; k < l; ++k) {
        if (alpha[k] > 0.0) {
            model.support_vectors.push_back(X[k]);
            model.alphas.push_back(alpha[k]);
        }
    }
    return model;
}

double decision_value(const OcsvmModel& model, const Point3& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        sum += model.alphas[i] *
               kernel_eval(model.kernel, model.support_vectors[i], x);
    }
    return sum - model.rho;
}

std::vector<double> decision_values_serial(const OcsvmModel& model,
                                           const std::vector<Point3>& X) {
    std::vector<double> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        out[i] = decision_value(model, X[i]);
    }
    return out;
}

std::vector<double> decision_values(const OcsvmModel& model,
                                    const std::vector<Point3>& X) {
    std::vector<double> out(X.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(X.size());
    // Each point's kernel expansion stays in support-vector order, so the
    // values do not depend on the thread count.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            decision_value(model, X[static_cast<std::size_t>(i)]);
    }
    return out;
}

Prediction predict(const OcsvmModel& model, const LogRecord& record) {
    NormalizedMessage msg = normalize_message(record.message);
    FeatureVector features = extract_features(msg, model.dictionary, model.idf);
    Point3 x = scale(features, model.scaler);
    Prediction p;
    p.decision_value = decision_value(model, x);
    p.verdict = p.decision_value >= 0.0 ? Verdict::normal : Verdict::anomaly;
    return p;
}

}  // namespace loganomaly
