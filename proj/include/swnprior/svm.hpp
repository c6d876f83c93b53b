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
#ifndef SWNPRIOR_SVM_HPP
#define SWNPRIOR_SVM_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/kernels.hpp"
#include "swnprior/rng.hpp"

namespace swnprior {

enum class Task { regression, classification };

inline const char* to_string(Task t) {
    return t == Task::regression ? "regression" : "classification";
}

/// Default KKT stopping tolerance for the pairwise-update dual solver.
inline constexpr double kSmoTolerance = 1e-3;

namespace detail {

/// Dual problem  min 1/2 a^T Q a + p^T a  s.t.  y^T a = 0,  0 <= a_i <= C,
/// with Q_st = y_s y_t K(base_s, base_t). `base` maps dual variables onto
/// Gram-matrix rows, so the doubled regression problem shares one n x n
/// kernel matrix instead of materializing 2n x 2n.
struct SmoProblem {
    const Eigen::MatrixXd* gram = nullptr;
    std::vector<int> base;
    std::vector<int> y; ///< +1 / -1 per dual variable
    Eigen::VectorXd p;
    double c = 1.0;
};

struct SmoSolution {
    Eigen::VectorXd alpha;
    double rho = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    double kkt_violation = 0.0; ///< final m(a) - M(a) gap
};

/// Maximal-violating-pair solver with second-order selection of the second
/// index; stops when the KKT gap m(a) - M(a) drops below eps.
inline SmoSolution smo_solve(const SmoProblem& prob, double eps = kSmoTolerance,
                             std::size_t max_iter = 0) {
    const std::size_t n = prob.y.size();
    if (n == 0) throw DomainError("dual solver: empty problem");
    if (max_iter == 0) max_iter = std::max<std::size_t>(200000, 40 * n);
    constexpr double kTau = 1e-12;

    const Eigen::MatrixXd& km = *prob.gram;
    auto k = [&](std::size_t s, std::size_t t) -> double {
        return km(prob.base[s], prob.base[t]);
    };

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd grad = prob.p; // G = Q a + p, and a starts at 0
    const double c = prob.c;

    auto in_up = [&](std::size_t t) {
        const double a = alpha[static_cast<Eigen::Index>(t)];
        return prob.y[t] == +1 ? a < c : a > 0.0;
    };
    auto in_low = [&](std::size_t t) {
        const double a = alpha[static_cast<Eigen::Index>(t)];
        return prob.y[t] == +1 ? a > 0.0 : a < c;
    };

    std::size_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (; iter < max_iter; ++iter) {
        // i: largest -y G over the up set
        double gmax = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_up(t)) continue;
            const double v = -prob.y[t] * grad[static_cast<Eigen::Index>(t)];
            if (v > gmax) {
                gmax = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
        }
        // j: most objective decrease among violating members of the low set.
        // The curvature along any feasible pair direction is Kii + Ktt - 2Kit.
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::ptrdiff_t j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            const double yg = prob.y[t] * grad[static_cast<Eigen::Index>(t)];
            gmax2 = std::max(gmax2, yg);
            if (i < 0) continue;
            const double grad_diff = gmax + yg;
            if (grad_diff <= 0.0) continue;
            const std::size_t si = static_cast<std::size_t>(i);
            double quad = k(si, si) + k(t, t) - 2.0 * k(si, t);
            if (quad <= 0.0) quad = kTau;
            const double obj = -(grad_diff * grad_diff) / quad;
            if (obj < best_obj) {
                best_obj = obj;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        gap = gmax + gmax2; // m(a) - M(a)
        if (i < 0 || j < 0 || gap <= eps) break;

        const std::size_t si = static_cast<std::size_t>(i);
        const std::size_t sj = static_cast<std::size_t>(j);
        double& ai = alpha[static_cast<Eigen::Index>(si)];
        double& aj = alpha[static_cast<Eigen::Index>(sj)];
        const double old_ai = ai;
        const double old_aj = aj;
        const double gi = grad[static_cast<Eigen::Index>(si)];
        const double gj = grad[static_cast<Eigen::Index>(sj)];
        double quad = k(si, si) + k(sj, sj) - 2.0 * k(si, sj);
        if (quad <= 0.0) quad = kTau;

        if (prob.y[si] != prob.y[sj]) {
            const double delta = (-gi - gj) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
                if (ai > c) {
                    ai = c;
                    aj = c - diff;
                }
            } else {
                if (ai < 0.0) {
                    ai = 0.0;
                    aj = -diff;
                }
                if (aj > c) {
                    aj = c;
                    ai = c + diff;
                }
            }
        } else {
            const double delta = (gi - gj) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) {
                    ai = c;
                    aj = sum - c;
                }
                if (aj > c) {
                    aj = c;
                    ai = sum - c;
                }
            } else {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = sum;
                }
                if (ai < 0.0) {
                    ai = 0.0;
                    aj = sum;
                }
            }
        }

        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        if (dai == 0.0 && daj == 0.0) break; // numerically stuck; avoid spinning
        const double wi = prob.y[si] * dai;
        const double wj = prob.y[sj] * daj;
        for (std::size_t t = 0; t < n; ++t) {
            grad[static_cast<Eigen::Index>(t)] +=
                prob.y[t] * (wi * k(t, si) + wj * k(t, sj));
        }
    }

    SmoSolution sol;
    sol.iterations = iter;
    sol.converged = gap <= eps;
    sol.kkt_violation = std::max(gap, 0.0);

    // rho: average y G over free variables, else midpoint of the bound range
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t nr_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = prob.y[t] * grad[static_cast<Eigen::Index>(t)];
        const double a = alpha[static_cast<Eigen::Index>(t)];
        if (a >= c) {
            if (prob.y[t] == -1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (a <= 0.0) {
            if (prob.y[t] == +1) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++nr_free;
            sum_free += yg;
        }
    }
    sol.rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free) : (ub + lb) / 2.0;
    sol.alpha = std::move(alpha);
    return sol;
}

} // namespace detail

/// A fitted max-margin model: decision(x) = sum_i coef_i K(x_i, x) + bias,
/// where x_i are the training rows the caller retains.
struct MaxMarginFit {
    Task task = Task::classification;
    KernelSpec kernel;
    Eigen::VectorXd coef; ///< y_i alpha_i (classification) or beta_i (regression)
    double bias = 0.0;
    double c = 1.0;
    double epsilon = 0.0; ///< regression tube half-width
    bool converged = true;
    std::size_t iterations = 0;
};

/// Soft-margin classifier on labels in {-1,+1}.
inline MaxMarginFit train_svc(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                              const KernelSpec& kernel, double c,
                              double tol = kSmoTolerance) {
    kernel.validate();
    if (!(c > 0.0)) throw ConfigError("max-margin: C must be > 0");
    if (static_cast<std::size_t>(x.rows()) != labels.size()) {
        throw DomainError("max-margin: rows(X) != len(labels)");
    }
    bool has_pos = false, has_neg = false;
    for (int l : labels) {
        if (l == +1) {
            has_pos = true;
        } else if (l == -1) {
            has_neg = true;
        } else {
            throw DomainError("max-margin: classification labels must be -1 or +1");
        }
    }
    if (!has_pos || !has_neg) {
        throw DomainError("max-margin: training labels are single-class (degenerate)");
    }

    const Eigen::MatrixXd gram = kernel_gram(kernel, x);
    detail::SmoProblem prob;
    prob.gram = &gram;
    prob.base.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) prob.base[i] = static_cast<int>(i);
    prob.y = labels;
    prob.p = Eigen::VectorXd::Constant(x.rows(), -1.0);
    prob.c = c;
    const auto sol = detail::smo_solve(prob, tol);

    MaxMarginFit fit;
    fit.task = Task::classification;
    fit.kernel = kernel;
    fit.c = c;
    fit.coef.resize(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        fit.coef[i] = labels[static_cast<std::size_t>(i)] * sol.alpha[i];
    }
    fit.bias = -sol.rho;
    fit.converged = sol.converged;
    fit.iterations = sol.iterations;
    return fit;
}

/// Epsilon-insensitive regressor; solved as the standard doubled dual with
/// beta = alpha - alpha*.
inline MaxMarginFit train_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const KernelSpec& kernel, double c, double epsilon,
                              double tol = kSmoTolerance) {
    kernel.validate();
    if (!(c > 0.0)) throw ConfigError("max-margin: C must be > 0");
    if (!(epsilon >= 0.0)) throw ConfigError("max-margin: epsilon must be >= 0");
    if (x.rows() != y.size()) throw DomainError("max-margin: rows(X) != len(y)");
    if (x.rows() < 2) throw DomainError("max-margin: need at least 2 training rows");

    const Eigen::Index n = x.rows();
    const Eigen::MatrixXd gram = kernel_gram(kernel, x);
    detail::SmoProblem prob;
    prob.gram = &gram;
    prob.base.resize(static_cast<std::size_t>(2 * n));
    prob.y.resize(static_cast<std::size_t>(2 * n));
    prob.p.resize(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        prob.base[static_cast<std::size_t>(i)] = static_cast<int>(i);
        prob.base[static_cast<std::size_t>(n + i)] = static_cast<int>(i);
        prob.y[static_cast<std::size_t>(i)] = +1;
        prob.y[static_cast<std::size_t>(n + i)] = -1;
        prob.p[i] = epsilon - y[i];
        prob.p[n + i] = epsilon + y[i];
    }
    prob.c = c;
    const auto sol = detail::smo_solve(prob, tol);

    MaxMarginFit fit;
    fit.task = Task::regression;
    fit.kernel = kernel;
    fit.c = c;
    fit.epsilon = epsilon;
    fit.coef.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        fit.coef[i] = sol.alpha[i] - sol.alpha[n + i];
    }
    fit.bias = -sol.rho;
    fit.converged = sol.converged;
    fit.iterations = sol.iterations;
    return fit;
}

/// Decision values at query rows (sign = class for classification).
inline Eigen::VectorXd decision_values(const MaxMarginFit& fit, const Eigen::MatrixXd& train_x,
                                       const Eigen::MatrixXd& query_x) {
    if (query_x.rows() == 0) return Eigen::VectorXd(0);
    Eigen::VectorXd out = kernel_cross(fit.kernel, query_x, train_x) * fit.coef;
    out.array() += fit.bias;
    return out;
}

/// Hyperparameter menu for cross-validated grid search.
struct MaxMarginGrid {
    KernelKind kind = KernelKind::rbf;
    std::vector<double> c_values;
    std::vector<double> gamma_values;   ///< ignored for linear kernels
    std::vector<double> epsilon_values; ///< ignored for classification
};

inline MaxMarginGrid default_max_margin_grid(Task task, KernelKind kind = KernelKind::rbf) {
    MaxMarginGrid g;
    g.kind = kind;
    for (int e = -5; e <= 15; e += 2) g.c_values.push_back(std::pow(2.0, e));
    if (kind == KernelKind::rbf) {
        for (int e = -15; e <= 3; e += 2) g.gamma_values.push_back(std::pow(2.0, e));
    } else {
        g.gamma_values.push_back(1.0);
    }
    if (task == Task::regression) {
        g.epsilon_values = {0.01, 0.1, 0.5};
    } else {
        g.epsilon_values = {0.0};
    }
    return g;
}

struct MaxMarginSearchResult {
    MaxMarginFit fit;
    double cv_metric = 0.0; ///< mean CV accuracy (classification) or MAE (regression)
    double best_c = 0.0;
    double best_gamma = 0.0;
    double best_epsilon = 0.0;
};

namespace detail {

/// Deterministic fold assignment: stratified per class for classification,
/// a plain shuffled deal for regression. Returned values lie in [0, folds).
inline std::vector<int> assign_folds(std::size_t n, int folds, Task task,
                                     const std::vector<int>& labels, std::uint64_t seed) {
    std::vector<int> fold_of(n, 0);
    if (task == Task::classification) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < n; ++i) (labels[i] == +1 ? pos : neg).push_back(i);
        auto deal = [&](std::vector<std::size_t>& group, const char* name, int offset) {
            auto rng = RandomStream::substream(seed, std::string("cv/strata/") + name);
            rng.shuffle(group);
            int next = offset;
            for (std::size_t idx : group) fold_of[idx] = next++ % folds;
        };
        deal(pos, "pos", 0);
        // start the negative deal where the positive one's counts are lowest
        deal(neg, "neg", static_cast<int>(pos.size()) % folds);
    } else {
        auto rng = RandomStream::substream(seed, "cv/plain");
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);
        int next = 0;
        for (std::size_t idx : order) fold_of[idx] = next++ % folds;
    }
    return fold_of;
}

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(idx[r]));
    }
    return out;
}

} // namespace detail

/// Cross-validated grid search, then a full refit with the winning
/// hyperparameters. Classification maximizes accuracy; regression minimizes
/// mean absolute error. Ties prefer smaller C, then smaller gamma, then
/// smaller epsilon. Fold assignment is seed-deterministic. Candidates that
/// fail on every fold are dropped; a fold-level failure (e.g. a single-class
/// sub-training set) invalidates just that candidate.
inline MaxMarginSearchResult train_max_margin(const Eigen::MatrixXd& x,
                                              const Eigen::VectorXd& y_real,
                                              const std::vector<int>& labels, Task task,
                                              const MaxMarginGrid& grid, int folds,
                                              std::uint64_t seed,
                                              double tol = kSmoTolerance) {
    const std::size_t n = static_cast<std::size_t>(x.rows());
    if (folds < 2) throw ConfigError("max-margin grid search: folds must be >= 2");
    if (n < static_cast<std::size_t>(folds)) {
        throw DomainError("max-margin grid search: fewer rows than folds");
    }
    if (grid.c_values.empty() || grid.gamma_values.empty() || grid.epsilon_values.empty()) {
        throw ConfigError("max-margin grid search: empty hyperparameter grid");
    }
    if (task == Task::classification) {
        bool has_pos = false, has_neg = false;
        for (int l : labels) (l == +1 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) {
            throw DomainError("max-margin: training labels are single-class (degenerate)");
        }
        if (labels.size() != n) throw DomainError("max-margin: rows(X) != len(labels)");
    } else if (static_cast<std::size_t>(y_real.size()) != n) {
        throw DomainError("max-margin: rows(X) != len(y)");
    }

    const std::vector<int> fold_of = detail::assign_folds(n, folds, task, labels, seed);
    std::vector<std::vector<std::size_t>> train_idx(folds), test_idx(folds);
    for (std::size_t i = 0; i < n; ++i) {
        for (int f = 0; f < folds; ++f) {
            (fold_of[i] == f ? test_idx[f] : train_idx[f]).push_back(i);
        }
    }

    const std::size_t nc = grid.c_values.size();
    const std::size_t ng = grid.gamma_values.size();
    const std::size_t ne = grid.epsilon_values.size();
    std::vector<double> metric(nc * ng * ne, 0.0);
    std::vector<bool> valid(nc * ng * ne, true);
    auto slot = [&](std::size_t ci, std::size_t gi, std::size_t ei) {
        return (gi * nc + ci) * ne + ei;
    };

    // gamma-major loops so each fold's training/test split of the data is
    // reused across every (C, epsilon) pair with the same kernel
    for (std::size_t gi = 0; gi < ng; ++gi) {
        KernelSpec kernel;
        kernel.kind = grid.kind;
        kernel.gamma = grid.gamma_values[gi];
        for (int f = 0; f < folds; ++f) {
            const Eigen::MatrixXd xtr = detail::take_rows(x, train_idx[f]);
            const Eigen::MatrixXd xte = detail::take_rows(x, test_idx[f]);
            std::vector<int> ltr;
            Eigen::VectorXd ytr;
            if (task == Task::classification) {
                ltr.reserve(train_idx[f].size());
                for (std::size_t i : train_idx[f]) ltr.push_back(labels[i]);
            } else {
                ytr.resize(static_cast<Eigen::Index>(train_idx[f].size()));
                for (std::size_t i = 0; i < train_idx[f].size(); ++i) {
                    ytr[static_cast<Eigen::Index>(i)] =
                        y_real[static_cast<Eigen::Index>(train_idx[f][i])];
                }
            }
            for (std::size_t ci = 0; ci < nc; ++ci) {
                for (std::size_t ei = 0; ei < ne; ++ei) {
                    const std::size_t at = slot(ci, gi, ei);
                    if (!valid[at]) continue;
                    try {
                        double fold_metric = 0.0;
                        if (task == Task::classification) {
                            const auto fit =
                                train_svc(xtr, ltr, kernel, grid.c_values[ci], tol);
                            const Eigen::VectorXd dec = decision_values(fit, xtr, xte);
                            std::size_t correct = 0;
                            for (std::size_t i = 0; i < test_idx[f].size(); ++i) {
                                const int pred =
                                    dec[static_cast<Eigen::Index>(i)] >= 0.0 ? +1 : -1;
                                if (pred == labels[test_idx[f][i]]) ++correct;
                            }
                            fold_metric = static_cast<double>(correct) /
                                          static_cast<double>(test_idx[f].size());
                        } else {
                            const auto fit = train_svr(xtr, ytr, kernel, grid.c_values[ci],
                                                       grid.epsilon_values[ei], tol);
                            const Eigen::VectorXd pred = decision_values(fit, xtr, xte);
                            double abs_sum = 0.0;
                            for (std::size_t i = 0; i < test_idx[f].size(); ++i) {
                                abs_sum += std::abs(
                                    pred[static_cast<Eigen::Index>(i)] -
                                    y_real[static_cast<Eigen::Index>(test_idx[f][i])]);
                            }
                            fold_metric = abs_sum / static_cast<double>(test_idx[f].size());
                        }
                        metric[at] += fold_metric / static_cast<double>(folds);
                    } catch (const Error&) {
                        valid[at] = false;
                    }
                }
            }
        }
    }

    std::ptrdiff_t best = -1;
    // C-major walk with strict improvement implements the tie-break: first
    // seen among equals has the smallest C, then gamma, then epsilon
    for (std::size_t ci = 0; ci < nc; ++ci) {
        for (std::size_t gi = 0; gi < ng; ++gi) {
            for (std::size_t ei = 0; ei < ne; ++ei) {
                const std::size_t at = slot(ci, gi, ei);
                if (!valid[at]) continue;
                if (best < 0) {
                    best = static_cast<std::ptrdiff_t>(at);
                    continue;
                }
                const double gain = task == Task::classification
                                        ? metric[at] - metric[static_cast<std::size_t>(best)]
                                        : metric[static_cast<std::size_t>(best)] - metric[at];
                if (gain > 0.0) best = static_cast<std::ptrdiff_t>(at);
            }
        }
    }
    if (best < 0) {
        throw SolverError("max-margin grid search: every candidate failed in cross-validation");
    }
    const std::size_t b = static_cast<std::size_t>(best);
    const std::size_t b_ei = b % ne;
    const std::size_t b_ci = (b / ne) % nc;
    const std::size_t b_gi = b / (ne * nc);

    KernelSpec kernel;
    kernel.kind = grid.kind;
    kernel.gamma = grid.gamma_values[b_gi];
    MaxMarginSearchResult out;
    out.fit = task == Task::classification
                  ? train_svc(x, labels, kernel, grid.c_values[b_ci], tol)
                  : train_svr(x, y_real, kernel, grid.c_values[b_ci],
                              grid.epsilon_values[b_ei], tol);
    out.cv_metric = metric[b];
    out.best_c = grid.c_values[b_ci];
    out.best_gamma = grid.gamma_values[b_gi];
    out.best_epsilon = task == Task::regression ? grid.epsilon_values[b_ei] : 0.0;
    return out;
}

} // namespace swnprior

#endif
