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
#ifndef SWNPRIOR_EVAL_HPP
#define SWNPRIOR_EVAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/formulae.hpp"
#include "swnprior/gold.hpp"
#include "swnprior/kernel_regression.hpp"
#include "swnprior/lasso.hpp"
#include "swnprior/lexicon.hpp"
#include "swnprior/metrics.hpp"
#include "swnprior/model.hpp"
#include "swnprior/significance.hpp"
#include "swnprior/splits.hpp"
#include "swnprior/svm.hpp"
#include "swnprior/zscore.hpp"

namespace swnprior {

/// One system under evaluation: either a single formula-variant applied
/// directly, or a learner blending the full feature vector.
struct SystemSpec {
    enum class Kind { formula, learner };
    Kind kind = Kind::formula;
    // formula systems
    Formula formula = Formula::fs;
    std::optional<Variant> variant;
    // learner systems
    Algorithm algorithm = Algorithm::kernel_reg;
    bool feature_selection = false;

    std::string name() const {
        if (kind == Kind::formula) {
            std::string n = to_string(formula);
            if (variant) n += std::string("_") + to_string(*variant);
            return n;
        }
        std::string n = algorithm == Algorithm::kernel_reg ? "kernelreg" : "maxmargin";
        if (feature_selection) n += "_fs";
        return n;
    }
};

inline std::optional<SystemSpec> parse_system_token(std::string_view token) {
    SystemSpec spec;
    if (token == "kernelreg" || token == "kernelreg_fs" || token == "maxmargin" ||
        token == "maxmargin_fs") {
        spec.kind = SystemSpec::Kind::learner;
        spec.algorithm = token.starts_with("kernelreg") ? Algorithm::kernel_reg
                                                        : Algorithm::max_margin;
        spec.feature_selection = token.ends_with("_fs");
        return spec;
    }
    spec.kind = SystemSpec::Kind::formula;
    std::string_view base = token;
    if (token.size() > 2 && token.ends_with("_m")) {
        spec.variant = Variant::m;
        base = token.substr(0, token.size() - 2);
    } else if (token.size() > 2 && token.ends_with("_d")) {
        spec.variant = Variant::d;
        base = token.substr(0, token.size() - 2);
    }
    const auto f = formula_from_string(base);
    if (!f) return std::nullopt;
    spec.formula = *f;
    // two-sided formulas need the _m/_d suffix; signed ones must not have it
    if (is_signed_formula(*f) == spec.variant.has_value()) return std::nullopt;
    return spec;
}

/// Every formula-variant (27 deterministic + uni's random siblings) plus the
/// learners that apply to the task.
inline std::vector<SystemSpec> default_systems(Task task) {
    std::vector<SystemSpec> out;
    for (Formula f : kDeterministicTwoSided) {
        for (Variant v : {Variant::m, Variant::d}) {
            SystemSpec s;
            s.kind = SystemSpec::Kind::formula;
            s.formula = f;
            s.variant = v;
            out.push_back(s);
        }
    }
    for (Formula f : {Formula::uni, Formula::rnd}) {
        SystemSpec s;
        s.kind = SystemSpec::Kind::formula;
        s.formula = f;
        out.push_back(s);
    }
    {
        SystemSpec s;
        s.kind = SystemSpec::Kind::formula;
        s.formula = Formula::swnrnd;
        s.variant = Variant::m; // random sense, collapsed like the others
        out.push_back(s);
    }
    if (task == Task::regression) {
        for (bool fs : {false, true}) {
            SystemSpec s;
            s.kind = SystemSpec::Kind::learner;
            s.algorithm = Algorithm::kernel_reg;
            s.feature_selection = fs;
            out.push_back(s);
        }
    }
    for (bool fs : {false, true}) {
        SystemSpec s;
        s.kind = SystemSpec::Kind::learner;
        s.algorithm = Algorithm::max_margin;
        s.feature_selection = fs;
        out.push_back(s);
    }
    return out;
}

/// Outcome of one system on one test instance of one split.
struct InstanceOutcome {
    double prediction = 0.0;
    double gold = 0.0;
    double value = 0.0; ///< absolute error (regression) or correctness 1/0
};

using InstanceKey = std::pair<int, std::size_t>; ///< (split index, instance index)

struct EvalReport {
    std::string system;
    Task task = Task::regression;
    std::vector<double> per_split;
    double mean = 0.0;
    double stddev = 0.0;
    std::map<InstanceKey, InstanceOutcome> per_instance;
    std::size_t tie_count = 0;       ///< zero decision scores mapped to +1
    std::size_t group_size = 0;      ///< instances contributing (subgroup runs)
    bool unreliable = false;         ///< subgroup below the minimum size
};

struct EvalOptions {
    SplitPlan plan;
    int folds = 10;
    SelectionConfig selection;                   ///< l1_penalty <= 0 -> choose by CV
    std::vector<KernelSpec> kernel_candidates;   ///< empty -> default menu
    MaxMarginGrid classification_grid;           ///< empty values -> default grid
    MaxMarginGrid regression_grid;
    std::size_t min_subgroup_size = 60;
};

struct SystemFailure {
    std::string system;
    std::string message;
};

struct EvalRun {
    Task task = Task::regression;
    std::vector<EvalReport> reports;
    std::vector<SystemFailure> failures;
    std::size_t instance_count = 0;
};

namespace detail {

/// Missing (lemma, PoS) in this lexicon contributes a single all-zero
/// sense: the lexicon is silent about the word, every formula yields 0.
inline LemmaPosEntry entry_or_zero(const Lexicon& lex, const GoldInstance& inst) {
    if (const LemmaPosEntry* e = lex.lookup(inst.lemma, inst.pos)) return *e;
    LemmaPosEntry zero;
    zero.lemma = inst.lemma;
    zero.pos = inst.pos;
    zero.senses.push_back(SenseEntry{0.0, 0.0, 1});
    return zero;
}

inline void finish_stats(EvalReport& r) {
    const std::size_t n = r.per_split.size();
    if (n == 0) {
        r.mean = 0.0;
        r.stddev = 0.0;
        return;
    }
    double mean = 0.0;
    for (double v : r.per_split) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : r.per_split) ss += (v - mean) * (v - mean);
    r.mean = mean;
    r.stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

inline double gold_value(const GoldInstance& inst, Task task) {
    if (task == Task::regression) {
        if (!inst.target_real) throw ConfigError("evaluation: instance lacks a real target");
        return *inst.target_real;
    }
    if (!inst.target_class) throw ConfigError("evaluation: instance lacks a class label");
    return static_cast<double>(*inst.target_class);
}

inline void record_outcome(EvalReport& report, int split, std::size_t idx, double prediction,
                           double gold, Task task) {
    InstanceOutcome o;
    o.prediction = prediction;
    o.gold = gold;
    if (task == Task::regression) {
        o.value = std::abs(prediction - gold);
    } else {
        const int label = label_from_score(prediction, &report.tie_count);
        o.value = label == static_cast<int>(gold) ? 1.0 : 0.0;
    }
    report.per_instance[{split, idx}] = o;
}

inline double split_metric(const EvalReport& report, int split) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [key, outcome] : report.per_instance) {
        if (key.first != split) continue;
        sum += outcome.value;
        ++count;
    }
    if (count == 0) throw DomainError("evaluation: empty test side");
    // MAE and accuracy are both plain means of the per-instance values
    return sum / static_cast<double>(count);
}

} // namespace detail

/// Evaluate formula systems and learners over shared repeated splits.
/// A failure aborts only that system and is reported alongside the results.
inline EvalRun evaluate_systems(const std::vector<GoldInstance>& instances, const Lexicon& lexicon,
                                Task task, const std::vector<SystemSpec>& systems,
                                const EvalOptions& options) {
    EvalRun run;
    run.task = task;
    run.instance_count = instances.size();
    const std::size_t n = instances.size();
    const std::vector<Split> splits = make_splits(n, options.plan);
    const std::uint64_t master = options.plan.master_seed;

    // shared raw feature matrix and gold targets
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(kFeatureCount));
    std::vector<double> gold(n);
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const LemmaPosEntry entry = detail::entry_or_zero(lexicon, instances[i]);
        const auto fv = feature_vector(entry);
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fv[j];
        }
        gold[i] = detail::gold_value(instances[i], task);
        if (task == Task::classification) labels[i] = *instances[i].target_class;
    }

    const std::vector<KernelSpec> kreg_candidates = options.kernel_candidates.empty()
                                                        ? default_kernel_candidates()
                                                        : options.kernel_candidates;
    const MaxMarginGrid cls_grid = options.classification_grid.c_values.empty()
                                       ? default_max_margin_grid(Task::classification)
                                       : options.classification_grid;
    const MaxMarginGrid reg_grid = options.regression_grid.c_values.empty()
                                       ? default_max_margin_grid(Task::regression)
                                       : options.regression_grid;

    for (const SystemSpec& spec : systems) {
        const std::string name = spec.name();
        try {
            EvalReport report;
            report.system = name;
            report.task = task;
            report.group_size = n;

            if (spec.kind == SystemSpec::Kind::formula) {
                // deterministic formulas: one prior per instance, reused per split
                std::vector<double> prior(n, 0.0);
                if (!is_random_formula(spec.formula)) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const LemmaPosEntry entry =
                            detail::entry_or_zero(lexicon, instances[i]);
                        prior[i] =
                            prior_polarity(entry, spec.formula, spec.variant).value;
                    }
                }
                for (int s = 0; s < static_cast<int>(splits.size()); ++s) {
                    auto rng = RandomStream::substream(
                        master, "system/" + name + "/split/" + std::to_string(s));
                    for (std::size_t idx : splits[static_cast<std::size_t>(s)].test_ids) {
                        double pred;
                        if (is_random_formula(spec.formula)) {
                            const LemmaPosEntry entry =
                                detail::entry_or_zero(lexicon, instances[idx]);
                            pred = prior_polarity(entry, spec.formula, spec.variant, &rng)
                                       .value;
                        } else {
                            pred = prior[idx];
                        }
                        detail::record_outcome(report, s, idx, pred, gold[idx], task);
                    }
                    report.per_split.push_back(detail::split_metric(report, s));
                }
            } else {
                if (spec.algorithm == Algorithm::kernel_reg && task != Task::regression) {
                    throw ConfigError(
                        "kernel regression applies only to real-valued targets");
                }
                for (int s = 0; s < static_cast<int>(splits.size()); ++s) {
                    const Split& split = splits[static_cast<std::size_t>(s)];
                    const std::string split_tag = name + "/split/" + std::to_string(s);

                    Eigen::MatrixXd train_raw = detail::take_rows(raw, split.train_ids);
                    Eigen::MatrixXd test_raw = detail::take_rows(raw, split.test_ids);
                    const ZScoreParams zs = zscore_fit(train_raw);
                    Eigen::MatrixXd train_std = zscore_apply(zs, train_raw);
                    Eigen::MatrixXd test_std = zscore_apply(zs, test_raw);

                    Eigen::VectorXd ytr(static_cast<Eigen::Index>(split.train_ids.size()));
                    std::vector<int> ltr;
                    for (std::size_t i = 0; i < split.train_ids.size(); ++i) {
                        ytr[static_cast<Eigen::Index>(i)] = gold[split.train_ids[i]];
                    }
                    if (task == Task::classification) {
                        ltr.reserve(split.train_ids.size());
                        for (std::size_t idx : split.train_ids) ltr.push_back(labels[idx]);
                    }

                    std::vector<bool> mask(kFeatureCount, true);
                    if (spec.feature_selection) {
                        SelectionConfig sel = options.selection;
                        const std::uint64_t sel_seed =
                            derive_seed(master, split_tag + "/selection");
                        if (!(sel.l1_penalty > 0.0)) {
                            sel.l1_penalty = choose_l1_penalty(train_std, ytr, sel_seed);
                        }
                        const SelectionResult chosen =
                            stability_select(train_std, ytr, sel, sel_seed);
                        bool any = false;
                        for (bool b : chosen.mask) any = any || b;
                        // an empty mask would leave the learner inputless;
                        // fall back to the full feature set
                        if (any) mask = chosen.mask;
                    }
                    const Eigen::MatrixXd xtr = detail::mask_columns(train_std, mask);
                    const Eigen::MatrixXd xte = detail::mask_columns(test_std, mask);

                    std::vector<double> preds;
                    if (spec.algorithm == Algorithm::kernel_reg) {
                        const auto fit =
                            train_kernel_regression(xtr, ytr, kreg_candidates);
                        const Eigen::VectorXd p = predict_kernel_regression(fit, xtr, xte);
                        preds.assign(p.data(), p.data() + p.size());
                    } else {
                        const std::uint64_t cv_seed = derive_seed(master, split_tag + "/cv");
                        const auto search = train_max_margin(
                            xtr, ytr, ltr, task,
                            task == Task::classification ? cls_grid : reg_grid,
                            options.folds, cv_seed);
                        const Eigen::VectorXd p = decision_values(search.fit, xtr, xte);
                        preds.assign(p.data(), p.data() + p.size());
                    }
                    for (std::size_t i = 0; i < split.test_ids.size(); ++i) {
                        detail::record_outcome(report, s, split.test_ids[i], preds[i],
                                               gold[split.test_ids[i]], task);
                    }
                    report.per_split.push_back(detail::split_metric(report, s));
                }
            }
            detail::finish_stats(report);
            run.reports.push_back(std::move(report));
        } catch (const Error& e) {
            run.failures.push_back(SystemFailure{name, e.what()});
        }
    }
    return run;
}

enum class SubgroupKey { pos_class, gender, polarity_sign };

inline const char* to_string(SubgroupKey k) {
    switch (k) {
        case SubgroupKey::pos_class: return "pos_class";
        case SubgroupKey::gender: return "gender";
        case SubgroupKey::polarity_sign: return "polarity_sign";
    }
    return "?";
}

inline std::optional<SubgroupKey> subgroup_key_from_string(std::string_view s) {
    if (s == "pos_class" || s == "pos") return SubgroupKey::pos_class;
    if (s == "gender") return SubgroupKey::gender;
    if (s == "polarity_sign" || s == "sign") return SubgroupKey::polarity_sign;
    return std::nullopt;
}

namespace detail {

inline EvalReport regroup(const EvalReport& parent, const std::string& label,
                          const std::set<std::size_t>& member_ids, std::size_t min_size) {
    EvalReport out;
    out.system = parent.system + "/" + label;
    out.task = parent.task;
    out.group_size = member_ids.size();
    out.unreliable = member_ids.size() < min_size;
    std::set<int> splits_seen;
    for (const auto& [key, outcome] : parent.per_instance) {
        if (member_ids.count(key.second) == 0) continue;
        out.per_instance[key] = outcome;
        splits_seen.insert(key.first);
    }
    for (int s : splits_seen) {
        out.per_split.push_back(split_metric(out, s));
    }
    finish_stats(out);
    return out;
}

/// Gender view: same predictions, errors re-measured against the requested
/// per-gender targets. Regression only.
inline EvalReport retarget(const EvalReport& parent, const std::vector<GoldInstance>& instances,
                           const std::string& label, bool male, std::size_t min_size) {
    if (parent.task != Task::regression) {
        throw ConfigError("gender evaluation requires real-valued targets");
    }
    EvalReport out;
    out.system = parent.system + "/" + label;
    out.task = parent.task;
    std::set<std::size_t> members;
    std::set<int> splits_seen;
    for (const auto& [key, outcome] : parent.per_instance) {
        const GoldInstance& inst = instances[key.second];
        const auto& target = male ? inst.subgroup.male_target : inst.subgroup.female_target;
        if (!target) continue;
        InstanceOutcome o = outcome;
        o.gold = *target;
        o.value = std::abs(o.prediction - *target);
        out.per_instance[key] = o;
        members.insert(key.second);
        splits_seen.insert(key.first);
    }
    if (out.per_instance.empty()) {
        throw ConfigError("gender evaluation: no instances carry per-gender targets");
    }
    for (int s : splits_seen) out.per_split.push_back(split_metric(out, s));
    finish_stats(out);
    out.group_size = members.size();
    out.unreliable = members.size() < min_size;
    return out;
}

} // namespace detail

/// Slice one system's evaluation by subgroup. pos_class and polarity_sign
/// partition the instances (their counts sum to the parent's); gender keeps
/// the predictions and swaps in the per-gender targets.
inline std::map<std::string, EvalReport> subgroup_eval(const EvalReport& parent,
                                                       const std::vector<GoldInstance>& instances,
                                                       SubgroupKey key,
                                                       std::size_t min_size = 60) {
    std::map<std::string, EvalReport> out;
    if (key == SubgroupKey::gender) {
        out.emplace("male", detail::retarget(parent, instances, "male", true, min_size));
        out.emplace("female", detail::retarget(parent, instances, "female", false, min_size));
        return out;
    }
    std::map<std::string, std::set<std::size_t>> groups;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::string label;
        if (key == SubgroupKey::pos_class) {
            label = std::string(1, to_char(instances[i].subgroup.pos_class));
        } else {
            const double g = detail::gold_value(instances[i], parent.task);
            label = g >= 0.0 ? "positive" : "negative";
        }
        groups[label].insert(i);
    }
    for (const auto& [label, members] : groups) {
        out.emplace(label, detail::regroup(parent, label, members, min_size));
    }
    return out;
}

/// Pull two systems' outcome values paired on identical (split, instance)
/// keys; the inputs must come from the same evaluation run.
inline std::pair<std::vector<double>, std::vector<double>> paired_values(const EvalReport& a,
                                                                         const EvalReport& b) {
    if (a.per_instance.size() != b.per_instance.size()) {
        throw ConfigError("significance: systems were evaluated on different instances");
    }
    std::vector<double> va, vb;
    va.reserve(a.per_instance.size());
    vb.reserve(b.per_instance.size());
    auto ib = b.per_instance.begin();
    for (const auto& [key, outcome] : a.per_instance) {
        if (ib == b.per_instance.end() || ib->first != key) {
            throw ConfigError("significance: systems were evaluated on different instances");
        }
        va.push_back(outcome.value);
        vb.push_back(ib->second.value);
        ++ib;
    }
    return {std::move(va), std::move(vb)};
}

/// Task-appropriate paired test: t-test on absolute errors for regression,
/// approximate randomization on correctness for classification.
inline SignificanceResult compare_systems(const EvalReport& a, const EvalReport& b,
                                          std::size_t iterations, std::uint64_t seed) {
    const auto [va, vb] = paired_values(a, b);
    if (a.task == Task::regression) {
        return t_test_paired(va, vb);
    }
    std::vector<char> ca(va.size()), cb(vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        ca[i] = va[i] != 0.0 ? 1 : 0;
        cb[i] = vb[i] != 0.0 ? 1 : 0;
    }
    auto rng = RandomStream::substream(seed, "significance/" + a.system + "/vs/" + b.system);
    return approx_randomization(ca, cb, iterations, rng);
}

} // namespace swnprior

#endif
