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
#ifndef SWNPRIOR_SIGNIFICANCE_HPP
#define SWNPRIOR_SIGNIFICANCE_HPP

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/rng.hpp"

namespace swnprior {

enum class SignificanceTest { t_test, approx_randomization };

inline const char* to_string(SignificanceTest t) {
    return t == SignificanceTest::t_test ? "t_test" : "approx_randomization";
}

struct SignificanceResult {
    SignificanceTest test = SignificanceTest::t_test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    /// Set when the paired differences have zero variance around a nonzero
    /// mean: the t statistic diverges and p collapses to the 0 limit.
    bool degenerate = false;
};

/// Two-tailed paired t-test on per-instance values (typically absolute
/// errors of two systems on identical test items).
inline SignificanceResult t_test_paired(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("t-test: paired lists differ in length");
    if (a.size() < 2) throw DomainError("t-test: need at least 2 pairs");
    const std::size_t n = a.size();

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) all_zero = false;
        ss += (d - mean) * (d - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    SignificanceResult res;
    res.test = SignificanceTest::t_test;
    res.n = n;
    if (all_zero) {
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    if (sd == 0.0) {
        // identical nonzero differences everywhere: report the limit
        res.statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
        res.degenerate = true;
        return res;
    }
    res.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t_distribution<double> dist(static_cast<double>(n - 1));
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.statistic)));
    return res;
}

/// Stratified-shuffling randomization test on paired correctness outcomes.
/// The statistic is |accuracy_a - accuracy_b|; each iteration flips every
/// instance's (a,b) pair with probability 1/2. The +1 smoothing keeps the
/// p-value achievable: p = (hits + 1) / (iterations + 1).
inline SignificanceResult approx_randomization(std::span<const char> correct_a,
                                               std::span<const char> correct_b,
                                               std::size_t iterations, RandomStream& rng) {
    if (correct_a.size() != correct_b.size()) {
        throw DomainError("randomization test: paired lists differ in length");
    }
    if (correct_a.empty()) throw DomainError("randomization test: empty inputs");
    if (iterations < 1) throw ConfigError("randomization test: iterations must be >= 1");
    const std::size_t n = correct_a.size();

    // Only discordant pairs move the statistic; the difference sum stays an
    // integer, so every comparison below is exact.
    std::vector<int> diff;
    diff.reserve(n);
    long long observed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int d = static_cast<int>(correct_a[i] != 0) - static_cast<int>(correct_b[i] != 0);
        if (d != 0) diff.push_back(d);
        observed += d;
    }
    const long long observed_abs = std::llabs(observed);

    std::size_t hits = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        long long sum = 0;
        std::uint64_t bits = 0;
        int bits_left = 0;
        for (const int d : diff) {
            if (bits_left == 0) {
                bits = rng.next_u64();
                bits_left = 64;
            }
            const bool flip = (bits & 1u) != 0;
            bits >>= 1;
            --bits_left;
            sum += flip ? -d : d;
        }
        if (std::llabs(sum) >= observed_abs) ++hits;
    }

    SignificanceResult res;
    res.test = SignificanceTest::approx_randomization;
    res.statistic = static_cast<double>(observed_abs) / static_cast<double>(n);
    res.p_value = (static_cast<double>(hits) + 1.0) / (static_cast<double>(iterations) + 1.0);
    res.n = n;
    return res;
}

} // namespace swnprior

#endif
