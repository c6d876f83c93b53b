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
#ifndef SWNPRIOR_PIPELINE_HPP
#define SWNPRIOR_PIPELINE_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swnprior/config.hpp"
#include "swnprior/errors.hpp"
#include "swnprior/eval.hpp"
#include "swnprior/formulae.hpp"
#include "swnprior/gold.hpp"
#include "swnprior/lexicon.hpp"
#include "swnprior/manifest.hpp"
#include "swnprior/report.hpp"
#include "swnprior/version.hpp"

namespace swnprior {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEvalFailure = 3;
inline constexpr int kExitReportCorrupt = 4;

namespace pipeline {

struct Resources {
    std::optional<Lexicon> lex1;
    std::optional<Lexicon> lex3;
    std::map<std::string, std::string> lemma_map;
    std::map<GoldKind, AlignedGold> aligned;
    std::vector<std::string> input_paths;
};

namespace detail {

inline Lexicon load_lexicon(const LexiconRef& ref) {
    std::ifstream in(ref.path);
    if (!in) throw IoError("cannot open lexicon file: " + ref.path);
    return parse_swn(in, ref.version).lexicon;
}

/// Ingest everything the config references. Alignment needs one lexicon of
/// each version; gold files are parsed per their declared kind.
inline Resources load_resources(const RunConfig& config, std::ostream& log) {
    Resources res;
    for (const auto& ref : config.lexica) {
        (ref.version == SwnVersion::swn1 ? res.lex1 : res.lex3) = load_lexicon(ref);
        res.input_paths.push_back(ref.path);
    }
    if (!config.golds.empty()) {
        if (!res.lex1 || !res.lex3) {
            throw ConfigError(
                "alignment requires one lexicon of each version (got " +
                std::to_string(config.lexica.size()) + ")");
        }
        if (!config.lemma_map_path.empty()) {
            std::ifstream in(config.lemma_map_path);
            if (!in) throw IoError("cannot open lemma map: " + config.lemma_map_path);
            res.lemma_map = parse_lemma_map(in);
            res.input_paths.push_back(config.lemma_map_path);
        }
        for (const auto& gref : config.golds) {
            std::ifstream in(gref.path);
            if (!in) throw IoError("cannot open gold file: " + gref.path);
            res.input_paths.push_back(gref.path);
            GoldParseSummary summary;
            AlignedGold aligned;
            if (gref.kind == GoldKind::anew) {
                const auto records = parse_anew(in, &summary);
                aligned = align_anew(records, *res.lex1, *res.lex3, res.lemma_map);
            } else {
                const auto records = parse_gi(in, &summary);
                aligned = align_gi(records, *res.lex1, *res.lex3, res.lemma_map);
            }
            log << "parsed " << to_string(gref.kind) << ": " << summary.records
                << " records (" << summary.skipped_rows << " skipped, "
                << summary.inconsistent_rows << " inconsistent)\n";
            const auto& r = aligned.report;
            log << "aligned " << to_string(gref.kind) << ": " << r.kept_instances
                << " instances kept; words " << r.words_in << " = aligned " << r.aligned_words
                << " + unaligned " << r.unaligned_words << " + sense-suffixed "
                << r.sense_suffixed << "; all-zero filtered " << r.all_zero_filtered << "\n";
            res.aligned[gref.kind] = std::move(aligned);
        }
    }
    return res;
}

inline nlohmann::ordered_json report_to_json(const AlignmentReport& r) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(r.kind);
    j["words_in"] = r.words_in;
    j["aligned_words"] = r.aligned_words;
    j["unaligned_words"] = r.unaligned_words;
    j["sense_suffixed"] = r.sense_suffixed;
    j["lemma_map_hits"] = r.lemma_map_hits;
    j["expanded_instances"] = r.expanded_instances;
    j["kept_instances"] = r.kept_instances;
    j["all_zero_filtered"] = r.all_zero_filtered;
    return j;
}

inline nlohmann::ordered_json instance_to_json(const GoldInstance& inst) {
    nlohmann::ordered_json j;
    j["lemma"] = inst.lemma;
    j["pos"] = std::string(1, to_char(inst.pos));
    if (inst.target_real) j["target_real"] = *inst.target_real;
    if (inst.target_class) j["target_class"] = *inst.target_class;
    if (inst.subgroup.male_target) j["male_target"] = *inst.subgroup.male_target;
    if (inst.subgroup.female_target) j["female_target"] = *inst.subgroup.female_target;
    return j;
}

inline GoldInstance instance_from_json(const nlohmann::json& j) {
    GoldInstance inst;
    inst.lemma = j.at("lemma").get<std::string>();
    const std::string pos = j.at("pos").get<std::string>();
    const auto p = pos.size() == 1 ? pos_from_char(pos[0]) : std::nullopt;
    if (!p) throw FormatError("aligned file: bad PoS tag " + pos);
    inst.pos = *p;
    inst.subgroup.pos_class = *p;
    if (j.contains("target_real")) inst.target_real = j["target_real"].get<double>();
    if (j.contains("target_class")) inst.target_class = j["target_class"].get<int>();
    if (j.contains("male_target")) inst.subgroup.male_target = j["male_target"].get<double>();
    if (j.contains("female_target")) {
        inst.subgroup.female_target = j["female_target"].get<double>();
    }
    return inst;
}

inline void save_aligned(const AlignedGold& aligned, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["toolkit_version"] = kToolkitVersion;
    j["report"] = report_to_json(aligned.report);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& inst : aligned.instances) rows.push_back(instance_to_json(inst));
    j["instances"] = std::move(rows);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write aligned dataset");
}

inline std::string features_file_name(const std::string& dataset, SwnVersion version) {
    std::string name = "features_";
    if (!dataset.empty()) name += dataset + "_";
    name += to_string(version);
    return name + ".tsv";
}

inline void write_feature_rows(std::ostream& out,
                               const std::vector<std::pair<std::string, Pos>>& keys,
                               const Lexicon& lex) {
    out << "# schema: " << kFeatureSchemaVersion << '\n';
    out << "lemma\tpos";
    for (const auto& name : feature_schema()) out << '\t' << name;
    out << '\n';
    char buf[40];
    for (const auto& [lemma, pos] : keys) {
        LemmaPosEntry entry;
        if (const LemmaPosEntry* e = lex.lookup(lemma, pos)) {
            entry = *e;
        } else {
            entry.lemma = lemma;
            entry.pos = pos;
            entry.senses.push_back(SenseEntry{0.0, 0.0, 1});
        }
        out << lemma << '\t' << to_char(pos);
        for (double v : feature_vector(entry)) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << '\t' << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("cannot write feature matrix");
}

inline Task task_of(GoldKind kind) {
    return kind == GoldKind::anew ? Task::regression : Task::classification;
}

inline std::vector<SystemSpec> resolve_systems(const RunConfig& config, Task task) {
    if (config.systems.empty()) return default_systems(task);
    std::vector<SystemSpec> out;
    for (const auto& token : config.systems) {
        const auto spec = parse_system_token(token);
        if (!spec) throw ConfigError("unknown system token: " + token);
        out.push_back(*spec);
    }
    return out;
}

inline EvalOptions eval_options(const RunConfig& config) {
    EvalOptions opt;
    opt.plan = config.plan;
    opt.folds = config.folds;
    opt.selection = config.selection;
    opt.kernel_candidates = config.kernel_candidates;
    opt.classification_grid = config.classification_grid;
    opt.regression_grid = config.regression_grid;
    opt.min_subgroup_size = config.min_subgroup_size;
    return opt;
}

/// Best = lowest error (regression) or highest accuracy (classification).
inline const EvalReport* best_report(const EvalRun& run) {
    const EvalReport* best = nullptr;
    for (const auto& r : run.reports) {
        if (best == nullptr) {
            best = &r;
            continue;
        }
        const bool better = run.task == Task::regression ? r.mean < best->mean
                                                         : r.mean > best->mean;
        if (better) best = &r;
    }
    return best;
}

inline std::vector<SignificanceRow> significance_rows(const EvalRun& run,
                                                      const RunConfig& config,
                                                      std::ostream& log) {
    std::vector<SignificanceRow> rows;
    auto find = [&](const std::string& name) -> const EvalReport* {
        for (const auto& r : run.reports) {
            if (r.system == name) return &r;
        }
        return nullptr;
    };
    std::vector<std::pair<const EvalReport*, const EvalReport*>> pairs;
    if (!config.significance_pairs.empty()) {
        for (const auto& [a, b] : config.significance_pairs) {
            const EvalReport* ra = find(a);
            const EvalReport* rb = find(b);
            if (ra == nullptr || rb == nullptr) {
                log << "significance: skipping pair (" << a << ", " << b
                    << "): system not in this run\n";
                continue;
            }
            pairs.emplace_back(ra, rb);
        }
    } else {
        // default: the winning system against every other
        const EvalReport* best = best_report(run);
        if (best != nullptr) {
            for (const auto& r : run.reports) {
                if (&r != best) pairs.emplace_back(best, &r);
            }
        }
    }
    for (const auto& [ra, rb] : pairs) {
        SignificanceRow row;
        row.system_a = ra->system;
        row.system_b = rb->system;
        row.result =
            compare_systems(*ra, *rb, config.approx_iterations, config.plan.master_seed);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write output file: " + path.string());
    return out;
}

} // namespace detail

/// Parse + align everything, cache the aligned datasets and drop-count
/// reports under the output directory.
inline int cmd_ingest(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        config.validate();
        if (config.lexica.empty()) throw ConfigError("ingest: no lexica configured");
        if (config.golds.empty()) throw ConfigError("ingest: no gold corpora configured");
        std::filesystem::create_directories(config.out_dir);
        const auto res = detail::load_resources(config, log);
        std::vector<std::string> outputs;
        for (const auto& [kind, aligned] : res.aligned) {
            const std::string name = std::string("aligned_") + to_string(kind) + ".json";
            auto out = detail::open_out(std::filesystem::path(config.out_dir) / name);
            detail::save_aligned(aligned, out);
            outputs.push_back(name);
        }
        outputs.push_back("manifest.json");
        write_manifest((std::filesystem::path(config.out_dir) / "manifest.json").string(),
                       config_to_json(config), config.plan.master_seed, res.input_paths,
                       outputs);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Emit the deterministic feature matrix per (gold corpus, lexicon); with no
/// gold corpora configured, the whole lexicon is exported.
inline int cmd_features(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        config.validate();
        if (config.lexica.empty()) throw ConfigError("features: no lexica configured");
        std::filesystem::create_directories(config.out_dir);
        const auto res = detail::load_resources(config, log);
        std::vector<std::string> outputs;
        for (const auto& ref : config.lexica) {
            const Lexicon& lex = ref.version == SwnVersion::swn1 ? *res.lex1 : *res.lex3;
            if (res.aligned.empty()) {
                std::vector<std::pair<std::string, Pos>> keys;
                for (const auto& [key, entry] : lex.entries()) keys.push_back(key);
                const std::string name = detail::features_file_name("", ref.version);
                auto out = detail::open_out(std::filesystem::path(config.out_dir) / name);
                detail::write_feature_rows(out, keys, lex);
                outputs.push_back(name);
            } else {
                for (const auto& [kind, aligned] : res.aligned) {
                    std::vector<std::pair<std::string, Pos>> keys;
                    for (const auto& inst : aligned.instances) {
                        keys.emplace_back(inst.lemma, inst.pos);
                    }
                    const std::string name =
                        detail::features_file_name(to_string(kind), ref.version);
                    auto out = detail::open_out(std::filesystem::path(config.out_dir) / name);
                    detail::write_feature_rows(out, keys, lex);
                    outputs.push_back(name);
                }
            }
        }
        outputs.push_back("manifest.json");
        write_manifest((std::filesystem::path(config.out_dir) / "manifest.json").string(),
                       config_to_json(config), config.plan.master_seed, res.input_paths,
                       outputs);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Full protocol: evaluate every requested system on every split for each
/// (gold corpus, lexicon version) pair; write evaluation dumps, rendered
/// tables, default significance tests, and requested subgroup breakdowns.
inline int cmd_evaluate(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        config.validate();
        if (config.lexica.empty()) throw ConfigError("evaluate: no lexica configured");
        if (config.golds.empty()) throw ConfigError("evaluate: no gold corpora configured");
        std::filesystem::create_directories(config.out_dir);
        const auto res = detail::load_resources(config, log);
        const EvalOptions options = detail::eval_options(config);
        std::vector<std::string> outputs;
        std::size_t total_ok = 0;

        for (const auto& [kind, aligned] : res.aligned) {
            const Task task = detail::task_of(kind);
            const auto systems = detail::resolve_systems(config, task);
            for (const auto& ref : config.lexica) {
                const Lexicon& lex = ref.version == SwnVersion::swn1 ? *res.lex1 : *res.lex3;
                const std::string tag =
                    std::string(to_string(kind)) + "_" + to_string(ref.version);
                log << "evaluating " << systems.size() << " systems on " << tag << " ("
                    << aligned.instances.size() << " instances)\n";
                const EvalRun run =
                    evaluate_systems(aligned.instances, lex, task, systems, options);
                total_ok += run.reports.size();
                for (const auto& f : run.failures) {
                    log << "  system " << f.system << " failed: " << f.message << '\n';
                }

                {
                    auto out = detail::open_out(std::filesystem::path(config.out_dir) /
                                                ("evaluation_" + tag + ".json"));
                    save_eval_run(run, to_string(kind), to_string(ref.version), out);
                    outputs.push_back("evaluation_" + tag + ".json");
                }
                {
                    auto out = detail::open_out(std::filesystem::path(config.out_dir) /
                                                ("table_" + tag + ".tsv"));
                    render_table_tsv(run.reports, task, out);
                    outputs.push_back("table_" + tag + ".tsv");
                }
                {
                    auto out = detail::open_out(std::filesystem::path(config.out_dir) /
                                                ("table_" + tag + ".txt"));
                    render_table_text(run.reports, task, out, tag);
                    outputs.push_back("table_" + tag + ".txt");
                }
                if (!run.reports.empty()) {
                    const auto rows = detail::significance_rows(run, config, log);
                    auto out = detail::open_out(std::filesystem::path(config.out_dir) /
                                                ("significance_" + tag + ".tsv"));
                    render_significance_tsv(rows, out);
                    outputs.push_back("significance_" + tag + ".tsv");
                }
                for (const auto& key_name : config.subgroups) {
                    const auto key = subgroup_key_from_string(key_name);
                    if (!key) throw ConfigError("unknown subgroup key: " + key_name);
                    const EvalReport* best = detail::best_report(run);
                    if (best == nullptr) continue;
                    try {
                        const auto groups = subgroup_eval(*best, aligned.instances, *key,
                                                          config.min_subgroup_size);
                        std::vector<EvalReport> grouped;
                        for (const auto& [label, rep] : groups) grouped.push_back(rep);
                        const std::string name =
                            "subgroups_" + tag + "_" + std::string(to_string(*key)) + ".tsv";
                        auto out =
                            detail::open_out(std::filesystem::path(config.out_dir) / name);
                        render_table_tsv(grouped, task, out);
                        outputs.push_back(name);
                    } catch (const ConfigError& e) {
                        log << "  subgroup " << key_name << " skipped on " << tag << ": "
                            << e.what() << '\n';
                    }
                }
            }
        }
        outputs.push_back("manifest.json");
        write_manifest((std::filesystem::path(config.out_dir) / "manifest.json").string(),
                       config_to_json(config), config.plan.master_seed, res.input_paths,
                       outputs);
        if (total_ok == 0) {
            err << "error: every system failed in every evaluation\n";
            return kExitEvalFailure;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Re-run significance tests from cached evaluation dumps.
inline int cmd_significance(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        if (!config.seed_set) throw ConfigError("config: a master seed is required");
        namespace fs = std::filesystem;
        std::vector<fs::path> eval_files;
        if (fs::exists(config.out_dir)) {
            for (const auto& entry : fs::directory_iterator(config.out_dir)) {
                const std::string name = entry.path().filename().string();
                if (name.starts_with("evaluation_") && name.ends_with(".json")) {
                    eval_files.push_back(entry.path());
                }
            }
        }
        std::sort(eval_files.begin(), eval_files.end());
        if (eval_files.empty()) {
            throw IoError("significance: no evaluation files under " + config.out_dir);
        }
        for (const auto& path : eval_files) {
            std::ifstream in(path);
            if (!in) throw IoError("cannot open " + path.string());
            LoadedEvalRun loaded;
            try {
                loaded = load_eval_run(in);
            } catch (const FormatError& e) {
                err << "error: corrupt evaluation file " << path.string() << ": " << e.what()
                    << '\n';
                return kExitReportCorrupt;
            }
            const auto rows = detail::significance_rows(loaded.run, config, log);
            const std::string tag = loaded.dataset + "_" + loaded.lexicon;
            auto out = detail::open_out(fs::path(config.out_dir) /
                                        ("significance_" + tag + ".tsv"));
            render_significance_tsv(rows, out);
            log << "significance_" << tag << ".tsv: " << rows.size() << " pairs\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Re-render tables from cached evaluation dumps; byte-identical for
/// identical inputs.
inline int cmd_report(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        namespace fs = std::filesystem;
        std::vector<fs::path> eval_files;
        if (fs::exists(config.out_dir)) {
            for (const auto& entry : fs::directory_iterator(config.out_dir)) {
                const std::string name = entry.path().filename().string();
                if (name.starts_with("evaluation_") && name.ends_with(".json")) {
                    eval_files.push_back(entry.path());
                }
            }
        }
        std::sort(eval_files.begin(), eval_files.end());
        if (eval_files.empty()) {
            throw IoError("report: no evaluation files under " + config.out_dir);
        }
        for (const auto& path : eval_files) {
            std::ifstream in(path);
            if (!in) throw IoError("cannot open " + path.string());
            LoadedEvalRun loaded;
            try {
                loaded = load_eval_run(in);
            } catch (const FormatError& e) {
                err << "error: corrupt evaluation file " << path.string() << ": " << e.what()
                    << '\n';
                return kExitReportCorrupt;
            }
            const std::string tag = loaded.dataset + "_" + loaded.lexicon;
            {
                auto out = detail::open_out(fs::path(config.out_dir) / ("table_" + tag + ".tsv"));
                render_table_tsv(loaded.run.reports, loaded.run.task, out);
            }
            {
                auto out = detail::open_out(fs::path(config.out_dir) / ("table_" + tag + ".txt"));
                render_table_text(loaded.run.reports, loaded.run.task, out, tag);
            }
            log << "rendered table_" << tag << ".tsv and .txt ("
                << loaded.run.reports.size() << " systems)\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

} // namespace pipeline

} // namespace swnprior

#endif
