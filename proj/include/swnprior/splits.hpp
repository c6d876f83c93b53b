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
#ifndef SWNPRIOR_SPLITS_HPP
#define SWNPRIOR_SPLITS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/rng.hpp"

namespace swnprior {

/// Repeated random train/test split protocol.
struct SplitPlan {
    double train_fraction = 0.7;
    int repeats = 5;
    std::uint64_t master_seed = 0;

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
            throw ConfigError("split plan: train_fraction must lie in (0,1)");
        }
        if (repeats < 1) throw ConfigError("split plan: repeats must be >= 1");
    }
};

struct Split {
    std::vector<std::size_t> train_ids;
    std::vector<std::size_t> test_ids;
};

/// `repeats` independent partitions of 0..n-1. Split i depends only on
/// (master_seed, i), so adding repeats never changes earlier splits.
inline std::vector<Split> make_splits(std::size_t n, const SplitPlan& plan) {
    plan.validate();
    if (n < 10) throw ConfigError("split plan: need at least 10 instances");
    const std::size_t train_count = static_cast<std::size_t>(
        std::floor(plan.train_fraction * static_cast<double>(n) + 1e-9));
    if (train_count == 0 || train_count >= n) {
        throw ConfigError("split plan: fraction leaves an empty side");
    }

    std::vector<Split> out;
    out.reserve(static_cast<std::size_t>(plan.repeats));
    for (int i = 0; i < plan.repeats; ++i) {
        auto rng = RandomStream::substream(plan.master_seed, "split/" + std::to_string(i));
        std::vector<std::size_t> perm = rng.permutation(n);
        Split split;
        split.train_ids.assign(perm.begin(),
                               perm.begin() + static_cast<std::ptrdiff_t>(train_count));
        split.test_ids.assign(perm.begin() + static_cast<std::ptrdiff_t>(train_count),
                              perm.end());
        std::sort(split.train_ids.begin(), split.train_ids.end());
        std::sort(split.test_ids.begin(), split.test_ids.end());
        out.push_back(std::move(split));
    }
    return out;
}

} // namespace swnprior

#endif
