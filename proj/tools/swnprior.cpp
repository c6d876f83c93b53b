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

/// swnprior — prior polarity toolkit.
///
/// Subcommands:
///   ingest        parse lexica + gold corpora, align, cache aligned datasets
///   features      export the deterministic feature matrix as TSV
///   evaluate      run the full split/train/test protocol and write reports
///   significance  re-run paired significance tests from cached evaluations
///   report        re-render ranking tables from cached evaluations
///
/// Exit codes: 0 success, 2 input/config error, 3 every system failed,
/// 4 corrupt cached report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swnprior/config.hpp"
#include "swnprior/pipeline.hpp"
#include "swnprior/text.hpp"

namespace {

struct FlagSet {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<std::string> lexica;
    std::vector<std::string> golds;
    std::string lemma_map;
    std::vector<std::string> systems;
    std::string out_dir;
    std::vector<std::string> subgroups;
};

/// Accept both repeated flags and comma-separated lists.
std::vector<std::string> split_list(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        for (const auto& piece : swnprior::text::split(item, ',')) {
            const std::string v{swnprior::text::trim(piece)};
            if (!v.empty()) out.push_back(v);
        }
    }
    return out;
}

void add_common_options(CLI::App* sub, FlagSet& flags) {
    sub->add_option("--config", flags.config_path,
                    "JSON run configuration (default: $SWNPRIOR_CONFIG)");
    sub->add_option("--seed", flags.seed, "master seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
    sub->add_option("--lexicon", flags.lexica,
                    "lexicon as path:version (version: swn1|swn3; repeatable)");
    sub->add_option("--gold", flags.golds, "gold corpus as path:kind (kind: anew|gi; repeatable)");
    sub->add_option("--lemma-map", flags.lemma_map, "two-column TSV mapping surface form -> lemma");
    sub->add_option("--systems", flags.systems,
                    "systems to evaluate (comma separated or repeated; default: all)");
    sub->add_option("--out", flags.out_dir, "output directory (default: out)");
    sub->add_option("--subgroups", flags.subgroups,
                    "subgroup breakdowns: pos_class, gender, polarity_sign");
}

swnprior::RunConfig build_config(const FlagSet& flags) {
    swnprior::RunConfig config;
    std::string path = flags.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SWNPRIOR_CONFIG")) path = env;
    }
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw swnprior::IoError("cannot open config file: " + path);
        config = swnprior::load_config(in);
    }
    if (flags.seed_given) {
        config.plan.master_seed = flags.seed;
        config.seed_set = true;
    }
    if (!flags.lexica.empty()) {
        config.lexica.clear();
        for (const auto& v : split_list(flags.lexica)) {
            config.lexica.push_back(swnprior::parse_lexicon_flag(v));
        }
    }
    if (!flags.golds.empty()) {
        config.golds.clear();
        for (const auto& v : split_list(flags.golds)) {
            config.golds.push_back(swnprior::parse_gold_flag(v));
        }
    }
    if (!flags.lemma_map.empty()) config.lemma_map_path = flags.lemma_map;
    if (!flags.systems.empty()) config.systems = split_list(flags.systems);
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (!flags.subgroups.empty()) config.subgroups = split_list(flags.subgroups);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"swnprior: prior polarities of SentiWordNet entries"};
    app.require_subcommand(1);
    FlagSet flags;

    CLI::App* ingest =
        app.add_subcommand("ingest", "parse and align lexica with gold corpora");
    CLI::App* features =
        app.add_subcommand("features", "export the deterministic feature matrix");
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "run the split/train/test evaluation protocol");
    CLI::App* significance =
        app.add_subcommand("significance", "paired significance tests from cached runs");
    CLI::App* report = app.add_subcommand("report", "re-render tables from cached runs");
    for (CLI::App* sub : {ingest, features, evaluate, significance, report}) {
        add_common_options(sub, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? swnprior::kExitOk : swnprior::kExitInputError;
    }

    swnprior::RunConfig config;
    try {
        config = build_config(flags);
    } catch (const swnprior::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return swnprior::kExitInputError;
    }

    if (ingest->parsed()) return swnprior::pipeline::cmd_ingest(config, std::cout, std::cerr);
    if (features->parsed()) return swnprior::pipeline::cmd_features(config, std::cout, std::cerr);
    if (evaluate->parsed()) return swnprior::pipeline::cmd_evaluate(config, std::cout, std::cerr);
    if (significance->parsed()) {
        return swnprior::pipeline::cmd_significance(config, std::cout, std::cerr);
    }
    if (report->parsed()) return swnprior::pipeline::cmd_report(config, std::cout, std::cerr);
    return swnprior::kExitInputError;
}
