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
#ifndef SWNPRIOR_LASSO_HPP
#define SWNPRIOR_LASSO_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/rng.hpp"

namespace swnprior {

/// Stability-selection knobs. l1_penalty <= 0 means "not chosen yet"; pick
/// one with choose_l1_penalty before calling stability_select.
struct SelectionConfig {
    double sample_fraction = 0.75;
    double threshold = 0.25;
    std::size_t resamples = 1000;
    double l1_penalty = 0.0;

    void validate() const {
        if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
            throw ConfigError("selection: sample_fraction must be in (0,1]");
        }
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            throw ConfigError("selection: threshold must be in [0,1]");
        }
        if (resamples < 1) throw ConfigError("selection: resamples must be >= 1");
        if (!(l1_penalty > 0.0)) throw ConfigError("selection: l1_penalty must be > 0");
    }
};

struct SelectionResult {
    std::vector<bool> mask;
    std::vector<double> frequency; ///< fraction of resamples each feature survived
    double l1_penalty = 0.0;
};

/// Coordinate-descent solve of  (1/2n) ||y - X b||^2 + lambda ||b||_1.
/// An unpenalized intercept is handled by centering internally; the returned
/// vector holds only the feature coefficients.
inline Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 double lambda, double tol = 1e-7,
                                 std::size_t max_sweeps = 1000) {
    if (!(lambda > 0.0)) throw ConfigError("lasso: penalty must be > 0");
    if (x.rows() != y.size()) throw DomainError("lasso: rows(X) != len(y)");
    if (x.rows() == 0) throw DomainError("lasso: empty data");

    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const double dn = static_cast<double>(n);

    const Eigen::RowVectorXd col_means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - col_means;
    const Eigen::VectorXd yc = (y.array() - y.mean()).matrix();
    const Eigen::RowVectorXd col_ss = xc.colwise().squaredNorm(); // ||x_j||^2

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd residual = yc; // y - X b
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_step = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (col_ss[j] == 0.0) continue; // constant column can never enter
            const double old = beta[j];
            // rho_j = (1/n) x_j . (residual + x_j b_j)
            const double rho = (xc.col(j).dot(residual) + col_ss[j] * old) / dn;
            const double denom = col_ss[j] / dn;
            double next = 0.0;
            if (rho > lambda) {
                next = (rho - lambda) / denom;
            } else if (rho < -lambda) {
                next = (rho + lambda) / denom;
            }
            if (next != old) {
                residual += xc.col(j) * (old - next);
                beta[j] = next;
                max_step = std::max(max_step, std::abs(next - old));
            }
        }
        if (max_step < tol) break;
    }
    return beta;
}

namespace detail {

inline double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::RowVectorXd col_means = x.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - col_means;
    const Eigen::VectorXd yc = (y.array() - y.mean()).matrix();
    return (xc.transpose() * yc).cwiseAbs().maxCoeff() / static_cast<double>(x.rows());
}

} // namespace detail

/// One 5-fold CV sweep down a log-spaced ladder from the smallest
/// all-zero penalty; returns the penalty with the lowest held-out squared
/// error (ties keep the larger, sparser penalty).
inline double choose_l1_penalty(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                std::uint64_t seed, int folds = 5,
                                std::size_t ladder_size = 30) {
    if (x.rows() < folds) throw DomainError("penalty selection: fewer rows than folds");
    const double lmax = detail::lambda_max(x, y);
    if (!(lmax > 0.0)) {
        // y is constant after centering; any penalty zeroes everything
        return 1.0;
    }
    std::vector<double> ladder;
    for (std::size_t i = 0; i < ladder_size; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(ladder_size - 1);
        ladder.push_back(lmax * std::pow(10.0, -3.0 * t));
    }

    const std::size_t n = static_cast<std::size_t>(x.rows());
    auto rng = RandomStream::substream(seed, "selection/penalty-cv");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<int> fold_of(n);
    for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % folds);

    double best_lambda = ladder.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (const double lambda : ladder) { // descending: ties keep the sparser fit
        double err = 0.0;
        for (int f = 0; f < folds; ++f) {
            std::vector<std::size_t> tr, te;
            for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? te : tr).push_back(i);
            Eigen::MatrixXd xtr(static_cast<Eigen::Index>(tr.size()), x.cols());
            Eigen::VectorXd ytr(static_cast<Eigen::Index>(tr.size()));
            for (std::size_t i = 0; i < tr.size(); ++i) {
                xtr.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(tr[i]));
                ytr[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(tr[i])];
            }
            const Eigen::VectorXd beta = lasso_fit(xtr, ytr, lambda);
            const Eigen::RowVectorXd train_means = xtr.colwise().mean();
            const double intercept = ytr.mean() - train_means.dot(beta);
            for (std::size_t i : te) {
                const double pred = x.row(static_cast<Eigen::Index>(i)).dot(beta) + intercept;
                const double diff = pred - y[static_cast<Eigen::Index>(i)];
                err += diff * diff;
            }
        }
        if (err < best_err) {
            best_err = err;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

/// Stability selection: refit the L1 model on `resamples` row subsamples of
/// size floor(sample_fraction * n) and keep the features whose nonzero
/// frequency reaches the threshold. Deterministic for a fixed seed (each
/// resample derives its own generator stream, so the loop could run in any
/// order or in parallel).
inline SelectionResult stability_select(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const SelectionConfig& config, std::uint64_t seed) {
    config.validate();
    if (x.rows() != y.size()) throw DomainError("selection: rows(X) != len(y)");
    const std::size_t n = static_cast<std::size_t>(x.rows());
    const std::size_t take =
        std::max<std::size_t>(2, static_cast<std::size_t>(
                                     std::floor(config.sample_fraction * static_cast<double>(n))));
    if (take > n) throw DomainError("selection: sample larger than data");

    const std::size_t d = static_cast<std::size_t>(x.cols());
    std::vector<std::size_t> hits(d, 0);
    for (std::size_t r = 0; r < config.resamples; ++r) {
        auto rng = RandomStream::substream(seed, "selection/resample/" + std::to_string(r));
        const std::vector<std::size_t> rows = rng.sample_without_replacement(n, take);
        Eigen::MatrixXd xs(static_cast<Eigen::Index>(take), x.cols());
        Eigen::VectorXd ys(static_cast<Eigen::Index>(take));
        for (std::size_t i = 0; i < take; ++i) {
            xs.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
            ys[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
        }
        const Eigen::VectorXd beta = lasso_fit(xs, ys, config.l1_penalty);
        for (std::size_t j = 0; j < d; ++j) {
            if (std::abs(beta[static_cast<Eigen::Index>(j)]) > 1e-12) ++hits[j];
        }
    }

    SelectionResult result;
    result.l1_penalty = config.l1_penalty;
    result.frequency.resize(d);
    result.mask.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        result.frequency[j] =
            static_cast<double>(hits[j]) / static_cast<double>(config.resamples);
        result.mask[j] = result.frequency[j] >= config.threshold;
    }
    return result;
}

} // namespace swnprior

#endif
