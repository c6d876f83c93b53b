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
#ifndef SWNPRIOR_CONFIG_HPP
#define SWNPRIOR_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swnprior/errors.hpp"
#include "swnprior/eval.hpp"
#include "swnprior/gold.hpp"
#include "swnprior/lexicon.hpp"

namespace swnprior {

struct LexiconRef {
    std::string path;
    SwnVersion version = SwnVersion::swn3;
};

struct GoldRef {
    std::string path;
    GoldKind kind = GoldKind::anew;
};

/// Declarative run description. A JSON file supplies the base values and
/// command-line flags override individual fields (flags win).
struct RunConfig {
    std::vector<LexiconRef> lexica;
    std::vector<GoldRef> golds;
    std::string lemma_map_path;
    SplitPlan plan;
    bool seed_set = false;
    std::vector<std::string> systems; ///< empty -> task defaults
    std::string out_dir = "out";
    std::vector<std::string> subgroups;
    int folds = 10;
    std::size_t approx_iterations = 10000;
    std::size_t min_subgroup_size = 60;
    SelectionConfig selection; ///< l1_penalty <= 0 -> chosen by CV per split
    std::vector<std::pair<std::string, std::string>> significance_pairs;
    MaxMarginGrid classification_grid; ///< empty c_values -> default
    MaxMarginGrid regression_grid;
    std::vector<KernelSpec> kernel_candidates; ///< empty -> default menu

    /// Paths must exist and the master seed must have been given explicitly
    /// somewhere (config or flag): runs never seed from the wall clock.
    void validate() const {
        namespace fs = std::filesystem;
        if (!seed_set) throw ConfigError("config: a master seed is required");
        plan.validate();
        if (folds < 2) throw ConfigError("config: folds must be >= 2");
        for (const auto& l : lexica) {
            if (!fs::exists(l.path)) throw ConfigError("config: missing lexicon file " + l.path);
        }
        for (const auto& g : golds) {
            if (!fs::exists(g.path)) throw ConfigError("config: missing gold file " + g.path);
        }
        if (!lemma_map_path.empty() && !fs::exists(lemma_map_path)) {
            throw ConfigError("config: missing lemma map " + lemma_map_path);
        }
    }
};

namespace detail {

inline MaxMarginGrid grid_from_json(const nlohmann::json& j, Task task) {
    MaxMarginGrid g;
    g.kind = KernelKind::rbf;
    if (j.contains("kernel")) {
        const auto kind = kernel_kind_from_string(j["kernel"].get<std::string>());
        if (!kind) throw ConfigError("config: unknown grid kernel kind");
        g.kind = *kind;
    }
    auto exps_to_values = [](const nlohmann::json& arr) {
        std::vector<double> out;
        for (const auto& e : arr) out.push_back(std::pow(2.0, e.get<double>()));
        return out;
    };
    if (j.contains("c_exponents")) {
        g.c_values = exps_to_values(j["c_exponents"]);
    }
    if (j.contains("gamma_exponents")) {
        g.gamma_values = exps_to_values(j["gamma_exponents"]);
    } else if (g.kind == KernelKind::linear) {
        g.gamma_values = {1.0};
    }
    if (j.contains("epsilons")) {
        g.epsilon_values = j["epsilons"].get<std::vector<double>>();
    } else if (task == Task::classification) {
        g.epsilon_values = {0.0};
    }
    // partially specified grids inherit the missing axes from the defaults
    const MaxMarginGrid def = default_max_margin_grid(task, g.kind);
    if (g.c_values.empty()) g.c_values = def.c_values;
    if (g.gamma_values.empty()) g.gamma_values = def.gamma_values;
    if (g.epsilon_values.empty()) g.epsilon_values = def.epsilon_values;
    return g;
}

inline std::vector<KernelSpec> kernel_candidates_from_json(const nlohmann::json& j) {
    std::vector<KernelSpec> out;
    std::vector<double> noises;
    if (j.contains("noise_exponents")) {
        for (const auto& e : j["noise_exponents"]) noises.push_back(std::pow(10.0, e.get<double>()));
    } else {
        for (int e = -6; e <= 0; ++e) noises.push_back(std::pow(10.0, e));
    }
    bool want_linear = true;
    std::vector<double> gammas;
    if (j.contains("gamma_exponents")) {
        for (const auto& e : j["gamma_exponents"]) gammas.push_back(std::pow(2.0, e.get<double>()));
    } else {
        for (int g = -15; g <= 3; g += 2) gammas.push_back(std::pow(2.0, g));
    }
    if (j.contains("linear")) want_linear = j["linear"].get<bool>();
    for (double nv : noises) {
        if (want_linear) out.push_back(KernelSpec{KernelKind::linear, 1.0, 1.0, nv});
    }
    for (double g : gammas) {
        for (double nv : noises) {
            out.push_back(KernelSpec{KernelKind::rbf, 1.0, g, nv});
        }
    }
    return out;
}

} // namespace detail

/// Parse "path:version" / "path:kind" flag values (the last ':' splits, so
/// Windows-style paths survive).
inline LexiconRef parse_lexicon_flag(const std::string& value) {
    const auto pos = value.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= value.size()) {
        throw ConfigError("expected path:version, got: " + value);
    }
    const auto version = swn_version_from_string(value.substr(pos + 1));
    if (!version) throw ConfigError("unknown lexicon version in: " + value);
    return LexiconRef{value.substr(0, pos), *version};
}

inline GoldRef parse_gold_flag(const std::string& value) {
    const auto pos = value.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= value.size()) {
        throw ConfigError("expected path:kind, got: " + value);
    }
    const auto kind = gold_kind_from_string(value.substr(pos + 1));
    if (!kind) throw ConfigError("unknown gold kind in: " + value);
    return GoldRef{value.substr(0, pos), *kind};
}

inline RunConfig load_config(std::istream& in) {
    if (!in) throw IoError("cannot read config stream");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid structure: ") + e.what());
    }
    try {
        RunConfig c;
        if (j.contains("lexica")) {
            for (const auto& jl : j["lexica"]) {
                const auto version = swn_version_from_string(jl.at("version").get<std::string>());
                if (!version) throw ConfigError("config: unknown lexicon version");
                c.lexica.push_back(LexiconRef{jl.at("path").get<std::string>(), *version});
            }
        }
        if (j.contains("golds")) {
            for (const auto& jg : j["golds"]) {
                const auto kind = gold_kind_from_string(jg.at("kind").get<std::string>());
                if (!kind) throw ConfigError("config: unknown gold kind");
                c.golds.push_back(GoldRef{jg.at("path").get<std::string>(), *kind});
            }
        }
        if (j.contains("lemma_map")) c.lemma_map_path = j["lemma_map"].get<std::string>();
        if (j.contains("seed")) {
            c.plan.master_seed = j["seed"].get<std::uint64_t>();
            c.seed_set = true;
        }
        if (j.contains("split")) {
            const auto& js = j["split"];
            if (js.contains("train_fraction")) {
                c.plan.train_fraction = js["train_fraction"].get<double>();
            }
            if (js.contains("repeats")) c.plan.repeats = js["repeats"].get<int>();
        }
        if (j.contains("systems")) c.systems = j["systems"].get<std::vector<std::string>>();
        if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
        if (j.contains("subgroups")) {
            c.subgroups = j["subgroups"].get<std::vector<std::string>>();
        }
        if (j.contains("folds")) c.folds = j["folds"].get<int>();
        if (j.contains("approx_iterations")) {
            c.approx_iterations = j["approx_iterations"].get<std::size_t>();
        }
        if (j.contains("min_subgroup_size")) {
            c.min_subgroup_size = j["min_subgroup_size"].get<std::size_t>();
        }
        if (j.contains("selection")) {
            const auto& js = j["selection"];
            if (js.contains("sample_fraction")) {
                c.selection.sample_fraction = js["sample_fraction"].get<double>();
            }
            if (js.contains("threshold")) c.selection.threshold = js["threshold"].get<double>();
            if (js.contains("resamples")) {
                c.selection.resamples = js["resamples"].get<std::size_t>();
            }
            if (js.contains("l1_penalty")) c.selection.l1_penalty = js["l1_penalty"].get<double>();
        }
        if (j.contains("significance_pairs")) {
            for (const auto& jp : j["significance_pairs"]) {
                if (!jp.is_array() || jp.size() != 2) {
                    throw ConfigError("config: significance_pairs entries must be [a, b]");
                }
                c.significance_pairs.emplace_back(jp.at(0).get<std::string>(),
                                                  jp.at(1).get<std::string>());
            }
        }
        if (j.contains("classification_grid")) {
            c.classification_grid =
                detail::grid_from_json(j["classification_grid"], Task::classification);
        }
        if (j.contains("regression_grid")) {
            c.regression_grid = detail::grid_from_json(j["regression_grid"], Task::regression);
        }
        if (j.contains("kernel_candidates")) {
            c.kernel_candidates = detail::kernel_candidates_from_json(j["kernel_candidates"]);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: missing or mistyped field: ") + e.what());
    }
}

/// The fully-resolved configuration, echoed into manifests so a run can be
/// reproduced without the original config file.
inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json lexica = nlohmann::ordered_json::array();
    for (const auto& l : c.lexica) {
        lexica.push_back({{"path", l.path}, {"version", to_string(l.version)}});
    }
    j["lexica"] = std::move(lexica);
    nlohmann::ordered_json golds = nlohmann::ordered_json::array();
    for (const auto& g : c.golds) {
        golds.push_back({{"path", g.path}, {"kind", to_string(g.kind)}});
    }
    j["golds"] = std::move(golds);
    if (!c.lemma_map_path.empty()) j["lemma_map"] = c.lemma_map_path;
    j["seed"] = c.plan.master_seed;
    j["split"] = {{"train_fraction", c.plan.train_fraction}, {"repeats", c.plan.repeats}};
    j["systems"] = c.systems;
    j["out"] = c.out_dir;
    j["subgroups"] = c.subgroups;
    j["folds"] = c.folds;
    j["approx_iterations"] = c.approx_iterations;
    j["min_subgroup_size"] = c.min_subgroup_size;
    j["selection"] = {{"sample_fraction", c.selection.sample_fraction},
                      {"threshold", c.selection.threshold},
                      {"resamples", c.selection.resamples},
                      {"l1_penalty", c.selection.l1_penalty}};
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& [a, b] : c.significance_pairs) pairs.push_back({a, b});
    j["significance_pairs"] = std::move(pairs);
    return j;
}

} // namespace swnprior

#endif
