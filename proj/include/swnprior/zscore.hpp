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
#ifndef SWNPRIOR_ZSCORE_HPP
#define SWNPRIOR_ZSCORE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "swnprior/errors.hpp"

namespace swnprior {

/// Per-feature standardization parameters, fitted on training data only.
struct ZScoreParams {
    std::vector<double> means;
    std::vector<double> stds; ///< sample (n-1) standard deviation; >= 0

    friend bool operator==(const ZScoreParams&, const ZScoreParams&) = default;
};

inline ZScoreParams zscore_fit(const Eigen::MatrixXd& train) {
    if (train.rows() == 0) throw DomainError("z-score fit: empty training matrix");
    if (train.rows() < 2) {
        throw DomainError("z-score fit: a single training row has no spread to standardize");
    }
    const auto n = static_cast<double>(train.rows());
    ZScoreParams p;
    p.means.resize(static_cast<std::size_t>(train.cols()));
    p.stds.resize(static_cast<std::size_t>(train.cols()));
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
        const double mean = train.col(j).mean();
        const double ss = (train.col(j).array() - mean).square().sum();
        p.means[static_cast<std::size_t>(j)] = mean;
        p.stds[static_cast<std::size_t>(j)] = std::sqrt(ss / (n - 1.0));
    }
    return p;
}

/// (x - mean)/std per column; zero-variance columns map to 0 everywhere.
inline Eigen::MatrixXd zscore_apply(const ZScoreParams& params, const Eigen::MatrixXd& m) {
    if (static_cast<std::size_t>(m.cols()) != params.means.size()) {
        throw ConfigError("z-score apply: column count does not match fitted params");
    }
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mean = params.means[static_cast<std::size_t>(j)];
        const double sd = params.stds[static_cast<std::size_t>(j)];
        if (sd > 0.0) {
            out.col(j) = ((m.col(j).array() - mean) / sd).matrix();
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

} // namespace swnprior

#endif
