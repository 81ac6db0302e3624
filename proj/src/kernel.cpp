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

#include "loganomaly/kernel.hpp"

#include <cmath>

#include "loganomaly/errors.hpp"

namespace loganomaly {

const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::rbf: return "rbf";
        case KernelKind::linear: return "linear";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::sigmoid: return "sigmoid";
    }
    return "unknown";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "rbf") return KernelKind::rbf;
    if (name == "linear") return KernelKind::linear;
    if (name == "polynomial" || name == "poly") return KernelKind::polynomial;
    if (name == "sigmoid") return KernelKind::sigmoid;
    throw Error("unknown kernel: '" + name +
                "' (expected rbf, linear, poly, or sigmoid)");
}

namespace {

double dot(const Point3& x, const Point3& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const Point3& x, const Point3& y) {
    switch (spec.kind) {
        case KernelKind::rbf: {
            const double d0 = x[0] - y[0];
            const double d1 = x[1] - y[1];
            const double d2 = x[2] - y[2];
            return std::exp(-spec.gamma * (d0 * d0 + d1 * d1 + d2 * d2));
        }
        case KernelKind::linear:
            return dot(x, y) + spec.coef0;
        case KernelKind::polynomial:
            return std::pow(spec.gamma * dot(x, y) + spec.coef0, spec.degree);
        case KernelKind::sigmoid:
            return std::tanh(spec.gamma * dot(x, y) + spec.coef0);
    }
    return 0.0;
}

std::vector<double> gram_matrix_serial(const KernelSpec& spec,
                                       const std::vector<Point3>& X) {
    const std::size_t l = X.size();
    std::vector<double> gram(l * l);
    for (std::size_t i = 0; i < l; ++i) {
        gram[i * l + i] = kernel_eval(spec, X[i], X[i]);
        for (std::size_t j = i + 1; j < l; ++j) {
            const double k = kernel_eval(spec, X[i], X[j]);
            gram[i * l + j] = k;
            gram[j * l + i] = k;
        }
    }
    return gram;
}

std::vector<double> gram_matrix(const KernelSpec& spec,
                                const std::vector<Point3>& X) {
    const std::size_t l = X.size();
    std::vector<double> gram(l * l);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(l);
    // Each (i,j) entry is independent; dynamic schedule balances the
    // shrinking upper-triangle rows.
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        gram[ui * l + ui] = kernel_eval(spec, X[ui], X[ui]);
        for (std::size_t j = ui + 1; j < l; ++j) {
            const double k = kernel_eval(spec, X[ui], X[j]);
            gram[ui * l + j] = k;
            gram[j * l + ui] = k;
        }
    }
    return gram;
}

}  // namespace loganomaly
