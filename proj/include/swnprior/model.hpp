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
#ifndef SWNPRIOR_MODEL_HPP
#define SWNPRIOR_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swnprior/errors.hpp"
#include "swnprior/kernel_regression.hpp"
#include "swnprior/kernels.hpp"
#include "swnprior/svm.hpp"
#include "swnprior/version.hpp"
#include "swnprior/zscore.hpp"

namespace swnprior {

enum class Algorithm { kernel_reg, max_margin };

inline const char* to_string(Algorithm a) {
    return a == Algorithm::kernel_reg ? "kernel_reg" : "max_margin";
}

/// A frozen predictor. Raw feature rows are standardized with the stored
/// z-score params, reduced by the feature mask, and pushed through the
/// kernel expansion against the stored support rows:
///   f(x) = sum_i coef_i K(support_i, T(x)) + bias.
struct TrainedModel {
    Task task = Task::regression;
    Algorithm algorithm = Algorithm::kernel_reg;
    KernelSpec kernel;
    Eigen::MatrixXd support;      ///< transformed training rows
    Eigen::VectorXd coefficients; ///< one per support row
    double bias = 0.0;
    ZScoreParams zscore;          ///< over the full raw schema
    std::vector<bool> feature_mask;
    std::vector<std::string> feature_names; ///< raw schema, pre-mask
    std::uint64_t seed = 0;
};

namespace detail {

inline Eigen::MatrixXd mask_columns(const Eigen::MatrixXd& m, const std::vector<bool>& mask) {
    Eigen::Index kept = 0;
    for (bool b : mask) kept += b ? 1 : 0;
    Eigen::MatrixXd out(m.rows(), kept);
    Eigen::Index at = 0;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) out.col(at++) = m.col(static_cast<Eigen::Index>(j));
    }
    return out;
}

} // namespace detail

/// Standardize + mask raw feature rows with the model's stored transform.
inline Eigen::MatrixXd transform_features(const TrainedModel& model, const Eigen::MatrixXd& raw) {
    if (static_cast<std::size_t>(raw.cols()) != model.feature_mask.size()) {
        throw ConfigError("predict: feature count does not match the model's schema");
    }
    return detail::mask_columns(zscore_apply(model.zscore, raw), model.feature_mask);
}

/// Regression: real-valued predictions. Classification: signed decision
/// values (sign is the label). Deterministic.
inline std::vector<double> predict(const TrainedModel& model, const Eigen::MatrixXd& raw_query) {
    if (raw_query.rows() == 0) return {};
    const Eigen::MatrixXd q = transform_features(model, raw_query);
    Eigen::VectorXd vals = kernel_cross(model.kernel, q, model.support) * model.coefficients;
    vals.array() += model.bias;
    return std::vector<double>(vals.data(), vals.data() + vals.size());
}

namespace detail {

inline nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index cols_hint = -1) {
    if (!j.is_array()) throw FormatError("model file: matrix field is not an array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = cols_hint;
    if (rows > 0) cols = static_cast<Eigen::Index>(j.front().size());
    if (cols < 0) cols = 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw FormatError("model file: ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

} // namespace detail

inline void save_model(const TrainedModel& model, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = kModelSchemaVersion;
    j["toolkit_version"] = kToolkitVersion;
    j["task"] = to_string(model.task);
    j["algorithm"] = to_string(model.algorithm);
    j["kernel"] = {{"kind", to_string(model.kernel.kind)},
                   {"scale", model.kernel.scale},
                   {"gamma", model.kernel.gamma},
                   {"noise_variance", model.kernel.noise_variance}};
    j["zscore"] = {{"means", model.zscore.means}, {"stds", model.zscore.stds}};
    j["feature_mask"] = model.feature_mask;
    j["feature_names"] = model.feature_names;
    j["support"] = detail::matrix_to_json(model.support);
    j["coefficients"] =
        std::vector<double>(model.coefficients.data(),
                            model.coefficients.data() + model.coefficients.size());
    j["bias"] = model.bias;
    j["seed"] = model.seed;
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write model file");
}

inline TrainedModel load_model(std::istream& in) {
    if (!in) throw IoError("cannot read model stream");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model file: invalid structure: ") + e.what());
    }
    try {
        if (!j.contains("schema_version") || j["schema_version"].get<int>() != kModelSchemaVersion) {
            throw ConfigError("model file: unsupported schema version");
        }
        TrainedModel m;
        const std::string task = j.at("task").get<std::string>();
        if (task == "regression") {
            m.task = Task::regression;
        } else if (task == "classification") {
            m.task = Task::classification;
        } else {
            throw FormatError("model file: unknown task " + task);
        }
        const std::string algo = j.at("algorithm").get<std::string>();
        if (algo == "kernel_reg") {
            m.algorithm = Algorithm::kernel_reg;
        } else if (algo == "max_margin") {
            m.algorithm = Algorithm::max_margin;
        } else {
            throw FormatError("model file: unknown algorithm " + algo);
        }
        const auto& jk = j.at("kernel");
        const auto kind = kernel_kind_from_string(jk.at("kind").get<std::string>());
        if (!kind) throw FormatError("model file: unknown kernel kind");
        m.kernel.kind = *kind;
        m.kernel.scale = jk.at("scale").get<double>();
        m.kernel.gamma = jk.at("gamma").get<double>();
        m.kernel.noise_variance = jk.at("noise_variance").get<double>();
        m.zscore.means = j.at("zscore").at("means").get<std::vector<double>>();
        m.zscore.stds = j.at("zscore").at("stds").get<std::vector<double>>();
        m.feature_mask = j.at("feature_mask").get<std::vector<bool>>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        m.support = detail::matrix_from_json(j.at("support"));
        const auto coefs = j.at("coefficients").get<std::vector<double>>();
        m.coefficients = Eigen::Map<const Eigen::VectorXd>(coefs.data(),
                                                           static_cast<Eigen::Index>(coefs.size()));
        m.bias = j.at("bias").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        if (m.support.rows() != m.coefficients.size()) {
            throw FormatError("model file: support/coefficient size mismatch");
        }
        if (m.zscore.means.size() != m.feature_mask.size()) {
            throw FormatError("model file: z-score/mask size mismatch");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model file: missing or mistyped field: ") + e.what());
    }
}

} // namespace swnprior

#endif
