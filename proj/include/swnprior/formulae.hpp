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
#ifndef SWNPRIOR_FORMULAE_HPP
#define SWNPRIOR_FORMULAE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/lexicon.hpp"
#include "swnprior/rng.hpp"

namespace swnprior {

/// Ways to collapse a lemma#PoS's per-sense posterior polarities into one
/// prior-polarity score. All two-sided formulas apply independently to the
/// positive and negative score lists; uni and rnd return a signed value
/// directly; rnd and swnrnd are randomized baselines.
enum class Formula {
    fs,     ///< first (most frequent) sense only
    mean,   ///< mean over all senses
    max,    ///< per-side maximum over senses
    median, ///< per-side median of the sorted scores
    w1,     ///< geometric weights (1/2)^i over frequency rank, normalized
    w2,     ///< harmonic weights 1/i over frequency rank, normalized
    w1s,    ///< w1 after sorting each side by strength
    w2s,    ///< w2 after sorting each side by strength
    w1n,    ///< w1 with jointly-zero senses removed
    w2n,    ///< w2 with jointly-zero senses removed
    w1sn,   ///< w1 with jointly-zero senses removed, then sorted by strength
    w2sn,   ///< w2 with jointly-zero senses removed, then sorted by strength
    uni,    ///< signed dominant-side mean, ties broken by side weight
    uniw,   ///< per-side means over the dominant-sense sets
    rnd,    ///< signed uniform draw in [-1,1]
    swnrnd, ///< scores of one uniformly drawn sense
};

inline constexpr std::array<Formula, 16> kAllFormulae = {
    Formula::fs,  Formula::mean, Formula::max,  Formula::median,
    Formula::w1,  Formula::w2,   Formula::w1s,  Formula::w2s,
    Formula::w1n, Formula::w2n,  Formula::w1sn, Formula::w2sn,
    Formula::uni, Formula::uniw, Formula::rnd,  Formula::swnrnd};

/// The 13 deterministic two-sided formulas, in feature-schema order.
inline constexpr std::array<Formula, 13> kDeterministicTwoSided = {
    Formula::fs,  Formula::mean, Formula::max,  Formula::median, Formula::w1,
    Formula::w2,  Formula::w1s,  Formula::w2s,  Formula::w1n,    Formula::w2n,
    Formula::w1sn, Formula::w2sn, Formula::uniw};

enum class Variant { m, d };

inline bool is_signed_formula(Formula f) { return f == Formula::uni || f == Formula::rnd; }
inline bool is_random_formula(Formula f) { return f == Formula::rnd || f == Formula::swnrnd; }

inline const char* to_string(Formula f) {
    switch (f) {
        case Formula::fs: return "fs";
        case Formula::mean: return "mean";
        case Formula::max: return "max";
        case Formula::median: return "median";
        case Formula::w1: return "w1";
        case Formula::w2: return "w2";
        case Formula::w1s: return "w1s";
        case Formula::w2s: return "w2s";
        case Formula::w1n: return "w1n";
        case Formula::w2n: return "w2n";
        case Formula::w1sn: return "w1sn";
        case Formula::w2sn: return "w2sn";
        case Formula::uni: return "uni";
        case Formula::uniw: return "uniw";
        case Formula::rnd: return "rnd";
        case Formula::swnrnd: return "swnrnd";
    }
    return "?";
}

inline const char* to_string(Variant v) { return v == Variant::m ? "m" : "d"; }

inline std::optional<Formula> formula_from_string(std::string_view s) {
    for (Formula f : kAllFormulae) {
        if (s == to_string(f)) return f;
    }
    return std::nullopt;
}

/// f(posScore), f(negScore) for one two-sided formula; both sides in [0,1].
struct SideScores {
    double pos = 0.0;
    double neg = 0.0;
};

struct PriorScore {
    double value = 0.0;
    Formula formula = Formula::fs;
    std::optional<Variant> variant;
};

using ComputeResult = std::variant<SideScores, double>;

namespace detail {

inline void check_score_lists(std::span<const double> pos, std::span<const double> neg) {
    if (pos.empty() || neg.empty()) throw DomainError("formula: empty sense score list");
    if (pos.size() != neg.size()) throw DomainError("formula: pos/neg score lists differ in length");
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] < 0.0 || pos[i] > 1.0 || neg[i] < 0.0 || neg[i] > 1.0) {
            throw DomainError("formula: sense score outside [0,1]");
        }
    }
}

inline double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double median_of(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    // even count: mean of the two middle values
    return (s[(n - 1) / 2] + s[n / 2]) / 2.0;
}

/// Weighted mean with weights (1/2)^i (geometric) or 1/i (harmonic) over
/// rank i = 1..n, normalized to sum 1 so the output stays in [0,1].
inline double weighted_mean(std::span<const double> v, bool geometric) {
    double wsum = 0.0, acc = 0.0, w = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (geometric) {
            w *= 0.5;
        } else {
            w = 1.0 / static_cast<double>(i + 1);
        }
        wsum += w;
        acc += w * v[i];
    }
    return acc / wsum;
}

inline std::pair<std::vector<double>, std::vector<double>> drop_joint_zeros(
    std::span<const double> pos, std::span<const double> neg) {
    std::vector<double> p, q;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] != 0.0 || neg[i] != 0.0) {
            p.push_back(pos[i]);
            q.push_back(neg[i]);
        }
    }
    return {std::move(p), std::move(q)};
}

inline std::vector<double> sorted_desc(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

struct DominantSets {
    double pos_mean = 0.0; ///< mean of Pos(s) over the stronglyPos senses
    double neg_mean = 0.0;
    double pos_weight = 0.0; ///< |stronglyPos| / n
    double neg_weight = 0.0;
};

inline DominantSets dominant_sets(std::span<const double> pos, std::span<const double> neg) {
    DominantSets out;
    std::size_t np = 0, nn = 0;
    double sp = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] >= neg[i] && pos[i] > 0.0) {
            sp += pos[i];
            ++np;
        }
        if (neg[i] >= pos[i] && neg[i] > 0.0) {
            sn += neg[i];
            ++nn;
        }
    }
    const double n = static_cast<double>(pos.size());
    if (np > 0) out.pos_mean = sp / static_cast<double>(np);
    if (nn > 0) out.neg_mean = sn / static_cast<double>(nn);
    out.pos_weight = static_cast<double>(np) / n;
    out.neg_weight = static_cast<double>(nn) / n;
    return out;
}

} // namespace detail

/// Applies one formula to the sense score lists (frequency order). Two-sided
/// formulas yield SideScores; uni and rnd yield a signed double in [-1,1].
/// rng is consumed only by rnd and swnrnd.
inline ComputeResult compute(Formula formula, std::span<const double> pos_scores,
                             std::span<const double> neg_scores,
                             RandomStream* rng = nullptr) {
    detail::check_score_lists(pos_scores, neg_scores);
    if (is_random_formula(formula) && rng == nullptr) {
        throw ConfigError(std::string("formula ") + to_string(formula) +
                          " requires a seeded generator");
    }
    const std::size_t n = pos_scores.size();

    switch (formula) {
        case Formula::fs:
            return SideScores{pos_scores[0], neg_scores[0]};
        case Formula::mean:
            return SideScores{detail::mean_of(pos_scores), detail::mean_of(neg_scores)};
        case Formula::max:
            return SideScores{*std::max_element(pos_scores.begin(), pos_scores.end()),
                              *std::max_element(neg_scores.begin(), neg_scores.end())};
        case Formula::median:
            return SideScores{detail::median_of(pos_scores), detail::median_of(neg_scores)};
        case Formula::w1:
            return SideScores{detail::weighted_mean(pos_scores, true),
                              detail::weighted_mean(neg_scores, true)};
        case Formula::w2:
            return SideScores{detail::weighted_mean(pos_scores, false),
                              detail::weighted_mean(neg_scores, false)};
        case Formula::w1s:
        case Formula::w2s: {
            const auto p = detail::sorted_desc(pos_scores);
            const auto q = detail::sorted_desc(neg_scores);
            const bool geo = formula == Formula::w1s;
            return SideScores{detail::weighted_mean(p, geo), detail::weighted_mean(q, geo)};
        }
        case Formula::w1n:
        case Formula::w2n: {
            const auto [p, q] = detail::drop_joint_zeros(pos_scores, neg_scores);
            if (p.empty()) return SideScores{0.0, 0.0};
            const bool geo = formula == Formula::w1n;
            return SideScores{detail::weighted_mean(p, geo), detail::weighted_mean(q, geo)};
        }
        case Formula::w1sn:
        case Formula::w2sn: {
            const auto [p, q] = detail::drop_joint_zeros(pos_scores, neg_scores);
            if (p.empty()) return SideScores{0.0, 0.0};
            const auto ps = detail::sorted_desc(p);
            const auto qs = detail::sorted_desc(q);
            const bool geo = formula == Formula::w1sn;
            return SideScores{detail::weighted_mean(ps, geo), detail::weighted_mean(qs, geo)};
        }
        case Formula::uniw: {
            const auto d = detail::dominant_sets(pos_scores, neg_scores);
            return SideScores{d.pos_mean, d.neg_mean};
        }
        case Formula::uni: {
            const auto d = detail::dominant_sets(pos_scores, neg_scores);
            if (d.pos_mean > d.neg_mean) return d.pos_mean;
            if (d.neg_mean > d.pos_mean) return -d.neg_mean;
            // score tie: the side with the larger weight wins; full tie is 0
            if (d.pos_weight > d.neg_weight) return d.pos_mean;
            if (d.neg_weight > d.pos_weight) return -d.neg_mean;
            return 0.0;
        }
        case Formula::rnd:
            return rng->symmetric_unit();
        case Formula::swnrnd: {
            const std::size_t j = rng->below(n);
            return SideScores{pos_scores[j], neg_scores[j]};
        }
    }
    throw ConfigError("compute: unknown formula");
}

/// f_m keeps the larger side's score (negative side sign-flipped, ties go
/// positive); f_d is the difference. Both land in [-1,1].
inline double map_variant(SideScores sides, Variant variant) {
    if (variant == Variant::d) return sides.pos - sides.neg;
    return sides.pos >= sides.neg ? sides.pos : -sides.neg;
}

/// One prior polarity for a lemma#PoS: compute then map. Two-sided formulas
/// require a variant; uni and rnd forbid one.
inline PriorScore prior_polarity(const LemmaPosEntry& entry, Formula formula,
                                 std::optional<Variant> variant = std::nullopt,
                                 RandomStream* rng = nullptr) {
    if (is_signed_formula(formula) && variant.has_value()) {
        throw ConfigError(std::string("formula ") + to_string(formula) +
                          " is signed; no m/d variant applies");
    }
    if (!is_signed_formula(formula) && !variant.has_value()) {
        throw ConfigError(std::string("formula ") + to_string(formula) +
                          " is two-sided; a variant (m or d) is required");
    }
    const auto [pos, neg] = sense_vectors(entry);
    const ComputeResult result = compute(formula, pos, neg, rng);
    if (std::holds_alternative<double>(result)) {
        return PriorScore{std::get<double>(result), formula, std::nullopt};
    }
    return PriorScore{map_variant(std::get<SideScores>(result), *variant), formula, variant};
}

inline constexpr std::size_t kFeatureCount = 27;

/// Fixed feature order: m and d variants of the 13 deterministic two-sided
/// formulas, then uni. Random formulas are excluded so runs stay reproducible.
inline const std::vector<std::string>& feature_schema() {
    static const std::vector<std::string> schema = [] {
        std::vector<std::string> s;
        for (Formula f : kDeterministicTwoSided) {
            s.push_back(std::string(to_string(f)) + "_m");
            s.push_back(std::string(to_string(f)) + "_d");
        }
        s.push_back("uni");
        return s;
    }();
    return schema;
}

inline std::array<double, kFeatureCount> feature_vector(const LemmaPosEntry& entry) {
    const auto [pos, neg] = sense_vectors(entry);
    std::array<double, kFeatureCount> out{};
    std::size_t k = 0;
    for (Formula f : kDeterministicTwoSided) {
        const auto sides = std::get<SideScores>(compute(f, pos, neg));
        out[k++] = map_variant(sides, Variant::m);
        out[k++] = map_variant(sides, Variant::d);
    }
    out[k++] = std::get<double>(compute(Formula::uni, pos, neg));
    return out;
}

} // namespace swnprior

#endif
