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
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swnprior/pipeline.hpp"

using namespace swnprior;
namespace fs = std::filesystem;

namespace {

const char* kFixtureDir = SWNPRIOR_FIXTURE_DIR;

std::string fixture(const char* name) { return std::string(kFixtureDir) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("swnprior_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Fixture-backed config with small learner menus (fast but real).
RunConfig base_config(const fs::path& out_dir, std::uint64_t seed) {
    RunConfig c;
    c.lexica = {LexiconRef{fixture("swn_synth_1.tsv"), SwnVersion::swn1},
                LexiconRef{fixture("swn_synth_3.tsv"), SwnVersion::swn3}};
    c.golds = {GoldRef{fixture("anew_eval.csv"), GoldKind::anew},
               GoldRef{fixture("gi_eval.tsv"), GoldKind::gi}};
    c.lemma_map_path = fixture("lemma_map.tsv");
    c.plan = SplitPlan{0.7, 2, seed};
    c.seed_set = true;
    c.out_dir = out_dir.string();
    c.folds = 3;
    c.approx_iterations = 2000;
    c.kernel_candidates = {KernelSpec{KernelKind::linear, 1.0, 1.0, 1e-2},
                           KernelSpec{KernelKind::rbf, 1.0, 1.0, 1e-2}};
    MaxMarginGrid grid;
    grid.kind = KernelKind::rbf;
    grid.c_values = {1.0, 16.0};
    grid.gamma_values = {0.1, 1.0};
    grid.epsilon_values = {0.1};
    c.regression_grid = grid;
    grid.epsilon_values = {0.0};
    c.classification_grid = grid;
    return c;
}

} // namespace

TEST_CASE("ingest caches aligned datasets with manifests", "[pipeline]") {
    const fs::path dir = fresh_dir("ingest");
    RunConfig config = base_config(dir, 7);
    std::ostringstream log, err;
    const int code = pipeline::cmd_ingest(config, log, err);
    INFO(err.str());
    CHECK(code == kExitOk);
    CHECK(fs::exists(dir / "aligned_anew.json"));
    CHECK(fs::exists(dir / "aligned_gi.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(log.str().find("aligned anew") != std::string::npos);

    nlohmann::json aligned = nlohmann::json::parse(slurp(dir / "aligned_anew.json"));
    const auto& report = aligned.at("report");
    CHECK(report.at("words_in").get<std::size_t>() ==
          report.at("aligned_words").get<std::size_t>() +
              report.at("unaligned_words").get<std::size_t>() +
              report.at("sense_suffixed").get<std::size_t>());
    CHECK(report.at("expanded_instances").get<std::size_t>() ==
          report.at("kept_instances").get<std::size_t>() +
              report.at("all_zero_filtered").get<std::size_t>());
    CHECK(aligned.at("instances").size() == report.at("kept_instances").get<std::size_t>());
    // instances survive a JSON round trip
    const auto inst = pipeline::detail::instance_from_json(aligned.at("instances").at(0));
    CHECK_FALSE(inst.lemma.empty());
    REQUIRE(inst.target_real.has_value());

    nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("seed").get<std::uint64_t>() == 7);
    CHECK(manifest.at("inputs").size() == 5); // 2 lexica + lemma map + 2 golds

    SECTION("missing input files exit with the input-error code") {
        RunConfig bad = config;
        bad.golds[0].path = fixture("no_such_file.csv");
        std::ostringstream log2, err2;
        CHECK(pipeline::cmd_ingest(bad, log2, err2) == kExitInputError);
        CHECK(err2.str().find("error:") == 0);
    }
    SECTION("alignment without both lexicon versions is refused") {
        RunConfig bad = config;
        bad.lexica.resize(1);
        std::ostringstream log2, err2;
        CHECK(pipeline::cmd_ingest(bad, log2, err2) == kExitInputError);
        CHECK(err2.str().find("each version") != std::string::npos);
    }
    SECTION("a seed must be given explicitly") {
        RunConfig bad = config;
        bad.seed_set = false;
        std::ostringstream log2, err2;
        CHECK(pipeline::cmd_ingest(bad, log2, err2) == kExitInputError);
    }
    fs::remove_all(dir);
}

TEST_CASE("feature export writes the fixed schema", "[pipeline]") {
    const fs::path dir = fresh_dir("features");
    RunConfig config = base_config(dir, 7);
    std::ostringstream log, err;
    const int code = pipeline::cmd_features(config, log, err);
    INFO(err.str());
    CHECK(code == kExitOk);
    for (const char* name : {"features_anew_swn1.tsv", "features_anew_swn3.tsv",
                             "features_gi_swn1.tsv", "features_gi_swn3.tsv"}) {
        CHECK(fs::exists(dir / name));
    }
    const std::string text = slurp(dir / "features_anew_swn1.tsv");
    CHECK(text.find("# schema: ") == 0);
    CHECK(text.find("lemma\tpos\tfs_m\tfs_d\t") != std::string::npos);
    CHECK(text.find("\tuni\n") != std::string::npos);

    SECTION("without gold corpora the whole lexicon is exported") {
        const fs::path dir2 = fresh_dir("features_whole");
        RunConfig whole = base_config(dir2, 7);
        whole.golds.clear();
        whole.lemma_map_path.clear();
        whole.lexica.resize(1); // just the v1 lexicon
        std::ostringstream log2, err2;
        CHECK(pipeline::cmd_features(whole, log2, err2) == kExitOk);
        REQUIRE(fs::exists(dir2 / "features_swn1.tsv"));
        const std::string body = slurp(dir2 / "features_swn1.tsv");
        // one row per (lemma, pos) entry plus schema + header lines
        const std::size_t rows = static_cast<std::size_t>(
            std::count(body.begin(), body.end(), '\n'));
        std::ifstream lex_in(fixture("swn_synth_1.tsv"));
        const auto parsed = parse_swn(lex_in, SwnVersion::swn1);
        CHECK(rows == parsed.lexicon.entries().size() + 2);
        fs::remove_all(dir2);
    }
    fs::remove_all(dir);
}

TEST_CASE("evaluate writes reports, tables, significance, subgroups", "[pipeline][.slow]") {
    const fs::path dir = fresh_dir("evaluate");
    RunConfig config = base_config(dir, 2026);
    config.systems = {"mean_d", "uni", "rnd", "maxmargin"};
    config.subgroups = {"pos_class", "gender", "polarity_sign"};
    config.min_subgroup_size = 10;
    std::ostringstream log, err;
    const int code = pipeline::cmd_evaluate(config, log, err);
    INFO(err.str());
    INFO(log.str());
    REQUIRE(code == kExitOk);

    for (const char* tag : {"anew_swn1", "anew_swn3", "gi_swn1", "gi_swn3"}) {
        CHECK(fs::exists(dir / ("evaluation_" + std::string(tag) + ".json")));
        CHECK(fs::exists(dir / ("table_" + std::string(tag) + ".tsv")));
        CHECK(fs::exists(dir / ("table_" + std::string(tag) + ".txt")));
        CHECK(fs::exists(dir / ("significance_" + std::string(tag) + ".tsv")));
        CHECK(fs::exists(dir / ("subgroups_" + std::string(tag) + "_pos_class.tsv")));
        CHECK(fs::exists(
            dir / ("subgroups_" + std::string(tag) + "_polarity_sign.tsv")));
    }
    // gender subgroups exist for the valence corpus, are skipped for the
    // binary-polarity one (class labels carry no per-gender targets)
    CHECK(fs::exists(dir / "subgroups_anew_swn1_gender.tsv"));
    CHECK_FALSE(fs::exists(dir / "subgroups_gi_swn1_gender.tsv"));
    CHECK(log.str().find("subgroup gender skipped on gi_swn1") != std::string::npos);

    {
        const auto loaded = [&] {
            std::ifstream in(dir / "evaluation_anew_swn1.json");
            return load_eval_run(in);
        }();
        CHECK(loaded.run.task == Task::regression);
        CHECK(loaded.run.reports.size() == 4);
        CHECK(loaded.run.failures.empty());
    }
    {
        const std::string sig = slurp(dir / "significance_gi_swn1.tsv");
        CHECK(sig.find("approx_randomization") != std::string::npos);
        // default pairing: best system against the three others
        CHECK(std::count(sig.begin(), sig.end(), '\n') == 4);
    }

    SECTION("identical config and seed reproduce every byte") {
        const fs::path dir2 = fresh_dir("evaluate_again");
        RunConfig again = config;
        again.out_dir = dir2.string();
        std::ostringstream log2, err2;
        REQUIRE(pipeline::cmd_evaluate(again, log2, err2) == kExitOk);
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name == "manifest.json") continue; // embeds the out_dir path
            INFO("comparing " << name);
            CHECK(slurp(entry.path()) == slurp(dir2 / name));
        }
        fs::remove_all(dir2);
    }
    SECTION("a different seed changes the evaluation bytes") {
        const fs::path dir3 = fresh_dir("evaluate_seed");
        RunConfig moved = config;
        moved.out_dir = dir3.string();
        moved.plan.master_seed = 2027;
        std::ostringstream log3, err3;
        REQUIRE(pipeline::cmd_evaluate(moved, log3, err3) == kExitOk);
        CHECK(slurp(dir / "evaluation_anew_swn1.json") !=
              slurp(dir3 / "evaluation_anew_swn1.json"));
        fs::remove_all(dir3);
    }
    SECTION("report re-renders the cached tables byte-identically") {
        const std::string before_tsv = slurp(dir / "table_anew_swn1.tsv");
        const std::string before_txt = slurp(dir / "table_gi_swn3.txt");
        RunConfig render = config;
        std::ostringstream log4, err4;
        CHECK(pipeline::cmd_report(render, log4, err4) == kExitOk);
        CHECK(slurp(dir / "table_anew_swn1.tsv") == before_tsv);
        CHECK(slurp(dir / "table_gi_swn3.txt") == before_txt);
    }
    SECTION("significance recomputes from cached evaluations") {
        const std::string before = slurp(dir / "significance_anew_swn1.tsv");
        std::ostringstream log5, err5;
        CHECK(pipeline::cmd_significance(config, log5, err5) == kExitOk);
        CHECK(slurp(dir / "significance_anew_swn1.tsv") == before);

        RunConfig pair = config;
        pair.significance_pairs = {{"mean_d", "rnd"}, {"mean_d", "absent"}};
        std::ostringstream log6, err6;
        CHECK(pipeline::cmd_significance(pair, log6, err6) == kExitOk);
        const std::string chosen = slurp(dir / "significance_anew_swn1.tsv");
        CHECK(chosen.find("mean_d\trnd") != std::string::npos);
        CHECK(chosen.find("absent") == std::string::npos);
        CHECK(log6.str().find("skipping pair") != std::string::npos);
    }
    SECTION("corrupt cached evaluations exit with the corruption code") {
        {
            std::ofstream out(dir / "evaluation_anew_swn1.json", std::ios::trunc);
            out << "{\"schema_version\": 1, \"broken\": true";
        }
        std::ostringstream log7, err7;
        CHECK(pipeline::cmd_report(config, log7, err7) == kExitReportCorrupt);
        std::ostringstream log8, err8;
        CHECK(pipeline::cmd_significance(config, log8, err8) == kExitReportCorrupt);
    }
    fs::remove_all(dir);
}

TEST_CASE("evaluate propagates total failure and bad tokens", "[pipeline]") {
    const fs::path dir = fresh_dir("evaluate_fail");
    RunConfig config = base_config(dir, 5);
    config.golds = {GoldRef{fixture("gi_eval.tsv"), GoldKind::gi}};
    config.systems = {"kernelreg"}; // regression-only learner on class labels
    std::ostringstream log, err;
    CHECK(pipeline::cmd_evaluate(config, log, err) == kExitEvalFailure);
    CHECK(err.str().find("every system failed") != std::string::npos);

    SECTION("unknown system tokens are configuration errors") {
        RunConfig bad = config;
        bad.systems = {"meanish_d"};
        std::ostringstream log2, err2;
        CHECK(pipeline::cmd_evaluate(bad, log2, err2) == kExitInputError);
        CHECK(err2.str().find("unknown system token") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("report and significance need cached evaluations", "[pipeline]") {
    const fs::path dir = fresh_dir("report_empty");
    RunConfig config;
    config.out_dir = dir.string();
    config.plan.master_seed = 3;
    config.seed_set = true;
    std::ostringstream log, err;
    CHECK(pipeline::cmd_report(config, log, err) == kExitInputError);
    CHECK(err.str().find("no evaluation files") != std::string::npos);
    std::ostringstream log2, err2;
    CHECK(pipeline::cmd_significance(config, log2, err2) == kExitInputError);

    SECTION("significance without a seed is refused") {
        RunConfig no_seed = config;
        no_seed.seed_set = false;
        std::ostringstream log3, err3;
        CHECK(pipeline::cmd_significance(no_seed, log3, err3) == kExitInputError);
        CHECK(err3.str().find("seed") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("config files load and echo faithfully", "[config]") {
    std::stringstream in(R"({
        "lexica": [{"path": ")" + fixture("swn_synth_1.tsv") + R"(", "version": "swn1"}],
        "golds": [{"path": ")" + fixture("anew_eval.csv") + R"(", "kind": "anew"}],
        "lemma_map": ")" + fixture("lemma_map.tsv") + R"(",
        "seed": 99,
        "split": {"train_fraction": 0.8, "repeats": 3},
        "systems": ["mean_d", "uni"],
        "out": "results",
        "subgroups": ["pos_class"],
        "folds": 5,
        "approx_iterations": 1234,
        "min_subgroup_size": 30,
        "selection": {"sample_fraction": 0.5, "threshold": 0.6, "resamples": 10,
                      "l1_penalty": 0.2},
        "significance_pairs": [["mean_d", "uni"]],
        "regression_grid": {"kernel": "rbf", "c_exponents": [0, 2],
                            "gamma_exponents": [-1], "epsilons": [0.1]},
        "kernel_candidates": {"linear": true, "gamma_exponents": [0],
                              "noise_exponents": [-2]}
    })");
    const RunConfig c = load_config(in);
    CHECK(c.lexica.size() == 1);
    CHECK(c.lexica[0].version == SwnVersion::swn1);
    CHECK(c.golds[0].kind == GoldKind::anew);
    CHECK(c.seed_set);
    CHECK(c.plan.master_seed == 99);
    CHECK(c.plan.train_fraction == 0.8);
    CHECK(c.plan.repeats == 3);
    CHECK(c.systems == std::vector<std::string>{"mean_d", "uni"});
    CHECK(c.out_dir == "results");
    CHECK(c.folds == 5);
    CHECK(c.approx_iterations == 1234);
    CHECK(c.min_subgroup_size == 30);
    CHECK(c.selection.threshold == 0.6);
    CHECK(c.selection.l1_penalty == 0.2);
    REQUIRE(c.significance_pairs.size() == 1);
    CHECK(c.significance_pairs[0].first == "mean_d");
    CHECK(c.regression_grid.c_values == std::vector<double>{1.0, 4.0});
    CHECK(c.regression_grid.gamma_values == std::vector<double>{0.5});
    CHECK(c.regression_grid.epsilon_values == std::vector<double>{0.1});
    REQUIRE(c.kernel_candidates.size() == 2); // linear + one rbf, one noise each
    CHECK(c.kernel_candidates[0].kind == KernelKind::linear);
    CHECK(c.kernel_candidates[1].kind == KernelKind::rbf);
    CHECK(c.kernel_candidates[1].noise_variance == Catch::Approx(0.01));
    CHECK_NOTHROW(c.validate());

    const nlohmann::ordered_json echoed = config_to_json(c);
    CHECK(echoed.at("seed") == 99);
    CHECK(echoed.at("systems").size() == 2);
    CHECK(echoed.at("selection").at("l1_penalty") == 0.2);

    SECTION("flag-style references parse strictly") {
        const LexiconRef ref = parse_lexicon_flag("/data/file.tsv:swn3");
        CHECK(ref.path == "/data/file.tsv");
        CHECK(ref.version == SwnVersion::swn3);
        CHECK_THROWS_AS(parse_lexicon_flag("noversion"), ConfigError);
        CHECK_THROWS_AS(parse_lexicon_flag("file.tsv:swn9"), ConfigError);
        const GoldRef gold = parse_gold_flag("eval.csv:anew");
        CHECK(gold.kind == GoldKind::anew);
        CHECK_THROWS_AS(parse_gold_flag("eval.csv:junk"), ConfigError);
    }
    SECTION("invalid config documents are rejected") {
        std::stringstream bad("not json");
        CHECK_THROWS_AS(load_config(bad), ConfigError);
        std::stringstream mistyped(R"({"seed": "nope"})");
        CHECK_THROWS_AS(load_config(mistyped), ConfigError);
        RunConfig missing;
        missing.seed_set = true;
        missing.lexica = {LexiconRef{"/definitely/not/here.tsv", SwnVersion::swn1}};
        CHECK_THROWS_AS(missing.validate(), ConfigError);
    }
}
