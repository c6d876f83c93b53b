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
#ifndef SWNPRIOR_KERNEL_REGRESSION_HPP
#define SWNPRIOR_KERNEL_REGRESSION_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/kernels.hpp"

namespace swnprior {

/// Hard cap on kernel-candidate evaluations during model selection.
inline constexpr std::size_t kMaxKernelCandidates = 100;

struct KernelRegressionFit {
    KernelSpec kernel;
    Eigen::VectorXd alpha;      ///< (K + sigma^2 I)^-1 y
    double log_marginal = 0.0;  ///< data log-likelihood under the fitted kernel
};

/// Exact-inference solve for one kernel: coefficients via Cholesky and the
/// closed-form log marginal likelihood
///   -1/2 y^T alpha - 1/2 log det(K + sigma^2 I) - n/2 log 2 pi.
inline KernelRegressionFit fit_kernel_regression(const Eigen::MatrixXd& x,
                                                 const Eigen::VectorXd& y,
                                                 const KernelSpec& kernel) {
    kernel.validate();
    if (x.rows() != y.size()) throw DomainError("kernel regression: rows(X) != len(y)");
    if (x.rows() < 2) throw DomainError("kernel regression: need at least 2 training rows");

    const Eigen::Index n = x.rows();
    Eigen::MatrixXd k = kernel_gram(kernel, x);
    k.diagonal().array() += kernel.noise_variance;

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        throw SolverError(
            "kernel regression: K + sigma^2 I is numerically singular; raise noise_variance "
            "(e.g. >= 1e-8) to regularize duplicate or near-duplicate rows");
    }

    KernelRegressionFit fit;
    fit.kernel = kernel;
    fit.alpha = llt.solve(y);
    const double log_det =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    fit.log_marginal = -0.5 * y.dot(fit.alpha) - 0.5 * log_det -
                       0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return fit;
}

/// Default model-selection menu: a linear kernel and an rbf ladder, each
/// crossed with log-spaced noise levels. 77 candidates, under the 100 cap.
inline std::vector<KernelSpec> default_kernel_candidates() {
    std::vector<KernelSpec> out;
    std::vector<double> noises;
    for (int e = -6; e <= 0; ++e) noises.push_back(std::pow(10.0, e));
    for (double nv : noises) {
        out.push_back(KernelSpec{KernelKind::linear, 1.0, 1.0, nv});
    }
    for (int g = -15; g <= 3; g += 2) {
        for (double nv : noises) {
            out.push_back(KernelSpec{KernelKind::rbf, 1.0, std::pow(2.0, g), nv});
        }
    }
    return out;
}

/// Best-of-grid model selection by log marginal likelihood. Evaluates at
/// most kMaxKernelCandidates candidates (extras are ignored); candidates
/// whose solve fails are skipped. Ties keep the earlier candidate.
inline KernelRegressionFit train_kernel_regression(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
    const std::vector<KernelSpec>& candidates = default_kernel_candidates()) {
    if (candidates.empty()) throw ConfigError("kernel regression: no kernel candidates");
    const std::size_t budget = std::min(candidates.size(), kMaxKernelCandidates);

    bool have_best = false;
    KernelRegressionFit best;
    std::string last_error = "no candidate evaluated";
    for (std::size_t i = 0; i < budget; ++i) {
        try {
            KernelRegressionFit fit = fit_kernel_regression(x, y, candidates[i]);
            if (!have_best || fit.log_marginal > best.log_marginal) {
                best = std::move(fit);
                have_best = true;
            }
        } catch (const SolverError& e) {
            last_error = e.what();
        }
    }
    if (!have_best) {
        throw SolverError("kernel regression: every candidate failed; last error: " + last_error);
    }
    return best;
}

/// Posterior mean at query rows: K(X*, X) alpha.
inline Eigen::VectorXd predict_kernel_regression(const KernelRegressionFit& fit,
                                                 const Eigen::MatrixXd& train_x,
                                                 const Eigen::MatrixXd& query_x) {
    if (query_x.rows() == 0) return Eigen::VectorXd(0);
    return kernel_cross(fit.kernel, query_x, train_x) * fit.alpha;
}

} // namespace swnprior

#endif
