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
#ifndef SWNPRIOR_TESTS_ORACLE_HPP
#define SWNPRIOR_TESTS_ORACLE_HPP

// A deliberately naive, independent transcription of the prior-polarity
// formula definitions. It shares no code with the library implementation so
// the two can cross-check each other. Everything here favors clarity over
// speed.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using List = std::vector<double>;

inline double first_sense(const List& v) { return v.front(); }

inline double mean(const List& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double maximum(const List& v) {
    double best = v.front();
    for (double x : v) best = std::max(best, x);
    return best;
}

inline double median(const List& v) {
    List s = v;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    if (n % 2 == 1) return s[n / 2];
    return (s[n / 2 - 1] + s[n / 2]) / 2.0;
}

/// Geometric weights 1/2, 1/4, 1/8, ... normalized to sum one.
inline double geometric_weighted(const List& v) {
    double num = 0.0, den = 0.0, w = 0.5;
    for (double x : v) {
        num += w * x;
        den += w;
        w /= 2.0;
    }
    return num / den;
}

/// Harmonic weights 1, 1/2, 1/3, ... normalized to sum one.
inline double harmonic_weighted(const List& v) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = 1.0 / static_cast<double>(i + 1);
        num += w * v[i];
        den += w;
    }
    return num / den;
}

inline List sort_strength(const List& v) {
    List s = v;
    std::sort(s.begin(), s.end());
    std::reverse(s.begin(), s.end());
    return s;
}

inline void drop_empty_senses(List& pos, List& neg) {
    List p, q;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] == 0.0 && neg[i] == 0.0) continue;
        p.push_back(pos[i]);
        q.push_back(neg[i]);
    }
    pos = p;
    neg = q;
}

struct Sides {
    double pos = 0.0;
    double neg = 0.0;
};

/// stronglyPos mean, stronglyNeg mean, and the set sizes.
struct Dominant {
    double pos_mean = 0.0;
    double neg_mean = 0.0;
    std::size_t pos_count = 0;
    std::size_t neg_count = 0;
};

inline Dominant dominant(const List& pos, const List& neg) {
    Dominant d;
    double sp = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] >= neg[i] && pos[i] > 0.0) {
            sp += pos[i];
            ++d.pos_count;
        }
        if (neg[i] >= pos[i] && neg[i] > 0.0) {
            sn += neg[i];
            ++d.neg_count;
        }
    }
    if (d.pos_count > 0) d.pos_mean = sp / static_cast<double>(d.pos_count);
    if (d.neg_count > 0) d.neg_mean = sn / static_cast<double>(d.neg_count);
    return d;
}

inline Sides two_sided(const std::string& name, List pos, List neg) {
    if (name == "fs") return {first_sense(pos), first_sense(neg)};
    if (name == "mean") return {mean(pos), mean(neg)};
    if (name == "max") return {maximum(pos), maximum(neg)};
    if (name == "median") return {median(pos), median(neg)};
    if (name == "w1") return {geometric_weighted(pos), geometric_weighted(neg)};
    if (name == "w2") return {harmonic_weighted(pos), harmonic_weighted(neg)};
    if (name == "w1s") {
        return {geometric_weighted(sort_strength(pos)), geometric_weighted(sort_strength(neg))};
    }
    if (name == "w2s") {
        return {harmonic_weighted(sort_strength(pos)), harmonic_weighted(sort_strength(neg))};
    }
    if (name == "w1n" || name == "w2n" || name == "w1sn" || name == "w2sn") {
        drop_empty_senses(pos, neg);
        if (pos.empty()) return {0.0, 0.0};
        if (name == "w1sn" || name == "w2sn") {
            pos = sort_strength(pos);
            neg = sort_strength(neg);
        }
        if (name == "w1n" || name == "w1sn") {
            return {geometric_weighted(pos), geometric_weighted(neg)};
        }
        return {harmonic_weighted(pos), harmonic_weighted(neg)};
    }
    if (name == "uniw") {
        const Dominant d = dominant(pos, neg);
        return {d.pos_mean, d.neg_mean};
    }
    throw std::invalid_argument("oracle: unknown two-sided formula " + name);
}

inline double uni(const List& pos, const List& neg) {
    const Dominant d = dominant(pos, neg);
    if (d.pos_mean > d.neg_mean) return d.pos_mean;
    if (d.neg_mean > d.pos_mean) return -d.neg_mean;
    if (d.pos_count > d.neg_count) return d.pos_mean;
    if (d.neg_count > d.pos_count) return -d.neg_mean;
    return 0.0;
}

inline double variant_m(Sides s) { return s.pos >= s.neg ? s.pos : -s.neg; }
inline double variant_d(Sides s) { return s.pos - s.neg; }

inline const std::vector<std::string>& two_sided_names() {
    static const std::vector<std::string> names = {"fs",  "mean", "max",  "median", "w1",
                                                   "w2",  "w1s",  "w2s",  "w1n",    "w2n",
                                                   "w1sn", "w2sn", "uniw"};
    return names;
}

} // namespace oracle

#endif
