/*
 * Copyright (c) 2026, the swnprior authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SWNPRIOR_KERNELS_HPP
#define SWNPRIOR_KERNELS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "swnprior/errors.hpp"

namespace swnprior {

enum class KernelKind { linear, rbf };

inline const char* to_string(KernelKind k) { return k == KernelKind::linear ? "linear" : "rbf"; }

inline std::optional<KernelKind> kernel_kind_from_string(std::string_view s) {
    if (s == "linear") return KernelKind::linear;
    if (s == "rbf") return KernelKind::rbf;
    return std::nullopt;
}

/// One kernel configuration. scale applies to linear, gamma to rbf;
/// noise_variance is the white-noise term of the regression solve.
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double scale = 1.0;
    double gamma = 1.0;
    double noise_variance = 0.0;

    void validate() const {
        if (kind == KernelKind::linear && !(scale > 0.0)) {
            throw ConfigError("linear kernel requires scale > 0");
        }
        if (kind == KernelKind::rbf && !(gamma > 0.0)) {
            throw ConfigError("rbf kernel requires gamma > 0");
        }
        if (noise_variance < 0.0) throw ConfigError("noise variance must be >= 0");
    }

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

inline double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) {
    if (spec.kind == KernelKind::linear) return spec.scale * a.dot(b);
    return std::exp(-spec.gamma * (a - b).squaredNorm());
}

/// K(A, B): rows(A) x rows(B) kernel matrix between two row sets.
inline Eigen::MatrixXd kernel_cross(const KernelSpec& spec, const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b) {
    if (a.cols() != b.cols()) throw ConfigError("kernel: dimension mismatch between row sets");
    if (spec.kind == KernelKind::linear) return spec.scale * (a * b.transpose());
    // rbf via the ||x||^2 + ||y||^2 - 2 x.y expansion
    const Eigen::VectorXd an = a.rowwise().squaredNorm();
    const Eigen::VectorXd bn = b.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * (a * b.transpose());
    d2.colwise() += an;
    d2.rowwise() += bn.transpose();
    return (-spec.gamma * d2.cwiseMax(0.0)).array().exp().matrix();
}

/// Symmetric Gram matrix K(X, X).
inline Eigen::MatrixXd kernel_gram(const KernelSpec& spec, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd k = kernel_cross(spec, x, x);
    // force exact symmetry against floating-point drift in the expansion
    k = ((k + k.transpose()) / 2.0).eval();
    return k;
}

} // namespace swnprior

#endif
