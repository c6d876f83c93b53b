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
#ifndef SWNPRIOR_METRICS_HPP
#define SWNPRIOR_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <span>

#include "swnprior/errors.hpp"

namespace swnprior {

inline double mae(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) {
        throw DomainError("mae: prediction/target length mismatch");
    }
    if (predictions.empty()) throw DomainError("mae: empty inputs");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        sum += std::abs(predictions[i] - targets[i]);
    }
    return sum / static_cast<double>(predictions.size());
}

/// A decision score of exactly 0 counts as +1; tie_count reports how often
/// the rule fired so the choice stays auditable.
inline int label_from_score(double score, std::size_t* tie_count = nullptr) {
    if (score == 0.0 && tie_count != nullptr) ++*tie_count;
    return score >= 0.0 ? +1 : -1;
}

inline double accuracy(std::span<const double> decision_scores, std::span<const int> gold_labels,
                       std::size_t* tie_count = nullptr) {
    if (decision_scores.size() != gold_labels.size()) {
        throw DomainError("accuracy: prediction/label length mismatch");
    }
    if (decision_scores.empty()) throw DomainError("accuracy: empty inputs");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < decision_scores.size(); ++i) {
        if (label_from_score(decision_scores[i], tie_count) == gold_labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(decision_scores.size());
}

} // namespace swnprior

#endif
