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

#ifndef LOGANOMALY_KERNEL_HPP
#define LOGANOMALY_KERNEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "loganomaly/features.hpp"

namespace loganomaly {

enum class KernelKind { rbf, linear, polynomial, sigmoid };

const char* kernel_kind_name(KernelKind kind);
// Throws Error on an unknown name.
KernelKind kernel_kind_from_name(const std::string& name);

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 1.0;   // rbf: gamma = 1/(2 sigma^2); polynomial/sigmoid: factor on x.y
    double coef0 = 0.0;   // additive constant for linear/polynomial/sigmoid
    int degree = 3;       // polynomial exponent
};

// rbf        exp(-gamma * |x-y|^2)
// linear     x.y + coef0
// polynomial (gamma * x.y + coef0)^degree
// sigmoid    tanh(gamma * x.y + coef0)
double kernel_eval(const KernelSpec& spec, const Point3& x, const Point3& y);

// Dense l x l kernel matrix, entry (i,j) = kernel_eval(spec, X[i], X[j]).
// The parallel variant splits rows across threads; both produce identical
// matrices. Row-major, row i at data()[i*l].
std::vector<double> gram_matrix(const KernelSpec& spec,
                                const std::vector<Point3>& X);
std::vector<double> gram_matrix_serial(const KernelSpec& spec,
                                       const std::vector<Point3>& X);

}  // namespace loganomaly

#endif  // LOGANOMALY_KERNEL_HPP
