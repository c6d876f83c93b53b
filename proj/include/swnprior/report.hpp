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
#ifndef SWNPRIOR_REPORT_HPP
#define SWNPRIOR_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swnprior/errors.hpp"
#include "swnprior/eval.hpp"
#include "swnprior/version.hpp"

namespace swnprior {

namespace detail {

inline std::string fmt(double v, const char* spec = "%.4f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

/// Worst system first, mirroring the result tables: regression descends by
/// error, classification ascends by accuracy. Name breaks exact ties so the
/// rendering is total and byte-stable.
inline std::vector<const EvalReport*> sorted_rows(const std::vector<EvalReport>& reports,
                                                  Task task) {
    std::vector<const EvalReport*> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [task](const EvalReport* a, const EvalReport* b) {
        if (a->mean != b->mean) {
            return task == Task::regression ? a->mean > b->mean : a->mean < b->mean;
        }
        return a->system < b->system;
    });
    return rows;
}

} // namespace detail

/// Delimiter-separated table, one row per system, worst first.
inline void render_table_tsv(const std::vector<EvalReport>& reports, Task task,
                             std::ostream& out) {
    const char* metric = task == Task::regression ? "mae" : "accuracy";
    out << "system\t" << metric << "_mean\t" << metric << "_std\tsplits\tinstances\tflags\n";
    for (const EvalReport* r : detail::sorted_rows(reports, task)) {
        out << r->system << '\t' << detail::fmt(r->mean) << '\t' << detail::fmt(r->stddev)
            << '\t' << r->per_split.size() << '\t' << r->group_size << '\t'
            << (r->unreliable ? "unreliable" : "-") << '\n';
    }
    if (!out) throw IoError("cannot write table");
}

/// Fixed-width human-readable rendering of the same table.
inline void render_table_text(const std::vector<EvalReport>& reports, Task task,
                              std::ostream& out, const std::string& title = "") {
    const char* metric = task == Task::regression ? "MAE" : "accuracy";
    if (!title.empty()) out << title << '\n';
    char line[128];
    std::snprintf(line, sizeof(line), "%-16s %10s %10s %7s %10s  %s", "system", metric, "std",
                  "splits", "instances", "flags");
    out << line << '\n';
    out << std::string(64, '-') << '\n';
    for (const EvalReport* r : detail::sorted_rows(reports, task)) {
        std::snprintf(line, sizeof(line), "%-16s %10s %10s %7zu %10zu  %s", r->system.c_str(),
                      detail::fmt(r->mean).c_str(), detail::fmt(r->stddev).c_str(),
                      r->per_split.size(), r->group_size, r->unreliable ? "unreliable" : "-");
        out << line << '\n';
    }
    if (!out) throw IoError("cannot write table");
}

struct SignificanceRow {
    std::string system_a;
    std::string system_b;
    SignificanceResult result;
};

inline void render_significance_tsv(const std::vector<SignificanceRow>& rows, std::ostream& out) {
    out << "system_a\tsystem_b\ttest\tstatistic\tp_value\tn\tdegenerate\n";
    for (const auto& row : rows) {
        out << row.system_a << '\t' << row.system_b << '\t' << to_string(row.result.test)
            << '\t' << detail::fmt(row.result.statistic, "%.6f") << '\t'
            << detail::fmt(row.result.p_value, "%.6f") << '\t' << row.result.n << '\t'
            << (row.result.degenerate ? "yes" : "no") << '\n';
    }
    if (!out) throw IoError("cannot write significance table");
}

/// Full-fidelity dump of one evaluation run, per-instance outcomes included
/// so significance tests and re-rendering never need a re-run.
inline void save_eval_run(const EvalRun& run, const std::string& dataset,
                          const std::string& lexicon, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["toolkit_version"] = kToolkitVersion;
    j["task"] = to_string(run.task);
    j["dataset"] = dataset;
    j["lexicon"] = lexicon;
    j["instance_count"] = run.instance_count;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const EvalReport& r : run.reports) {
        nlohmann::ordered_json jr;
        jr["system"] = r.system;
        jr["per_split"] = r.per_split;
        jr["mean"] = r.mean;
        jr["std"] = r.stddev;
        jr["tie_count"] = r.tie_count;
        jr["group_size"] = r.group_size;
        jr["unreliable"] = r.unreliable;
        nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
        for (const auto& [key, o] : r.per_instance) {
            outcomes.push_back({key.first, key.second, o.prediction, o.gold, o.value});
        }
        jr["per_instance"] = std::move(outcomes);
        reports.push_back(std::move(jr));
    }
    j["reports"] = std::move(reports);
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const SystemFailure& f : run.failures) {
        failures.push_back({{"system", f.system}, {"message", f.message}});
    }
    j["failures"] = std::move(failures);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write evaluation file");
}

struct LoadedEvalRun {
    EvalRun run;
    std::string dataset;
    std::string lexicon;
};

inline LoadedEvalRun load_eval_run(std::istream& in) {
    if (!in) throw IoError("cannot read evaluation stream");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("evaluation file: invalid structure: ") + e.what());
    }
    try {
        if (!j.contains("schema_version") ||
            j["schema_version"].get<int>() != kReportSchemaVersion) {
            throw FormatError("evaluation file: unsupported schema version");
        }
        LoadedEvalRun loaded;
        loaded.dataset = j.at("dataset").get<std::string>();
        loaded.lexicon = j.at("lexicon").get<std::string>();
        const std::string task = j.at("task").get<std::string>();
        if (task == "regression") {
            loaded.run.task = Task::regression;
        } else if (task == "classification") {
            loaded.run.task = Task::classification;
        } else {
            throw FormatError("evaluation file: unknown task " + task);
        }
        loaded.run.instance_count = j.at("instance_count").get<std::size_t>();
        for (const auto& jr : j.at("reports")) {
            EvalReport r;
            r.system = jr.at("system").get<std::string>();
            r.task = loaded.run.task;
            r.per_split = jr.at("per_split").get<std::vector<double>>();
            r.mean = jr.at("mean").get<double>();
            r.stddev = jr.at("std").get<double>();
            r.tie_count = jr.at("tie_count").get<std::size_t>();
            r.group_size = jr.at("group_size").get<std::size_t>();
            r.unreliable = jr.at("unreliable").get<bool>();
            for (const auto& jo : jr.at("per_instance")) {
                if (!jo.is_array() || jo.size() != 5) {
                    throw FormatError("evaluation file: malformed outcome row");
                }
                InstanceOutcome o;
                o.prediction = jo.at(2).get<double>();
                o.gold = jo.at(3).get<double>();
                o.value = jo.at(4).get<double>();
                r.per_instance[{jo.at(0).get<int>(), jo.at(1).get<std::size_t>()}] = o;
            }
            loaded.run.reports.push_back(std::move(r));
        }
        for (const auto& jf : j.at("failures")) {
            loaded.run.failures.push_back(SystemFailure{jf.at("system").get<std::string>(),
                                                        jf.at("message").get<std::string>()});
        }
        return loaded;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("evaluation file: missing or mistyped field: ") + e.what());
    }
}

} // namespace swnprior

#endif
