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
#ifndef SWNPRIOR_MANIFEST_HPP
#define SWNPRIOR_MANIFEST_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "swnprior/errors.hpp"
#include "swnprior/rng.hpp"
#include "swnprior/version.hpp"

namespace swnprior {

inline std::string hex_digest(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// 64-bit FNV-1a over the file bytes; cheap, stable, good enough to notice
/// a swapped input file.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read input for digest: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return hex_digest(h);
}

/// Reproducibility record: the resolved configuration, its hash, the master
/// seed, and a digest per input file. Identical manifests imply
/// byte-identical outputs.
inline void write_manifest(const std::string& path, const nlohmann::ordered_json& resolved_config,
                           std::uint64_t seed, const std::vector<std::string>& input_paths,
                           const std::vector<std::string>& output_files) {
    nlohmann::ordered_json j;
    j["toolkit_version"] = kToolkitVersion;
    j["seed"] = seed;
    j["config"] = resolved_config;
    j["config_digest"] = hex_digest(fnv1a64(resolved_config.dump()));
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    for (const auto& p : input_paths) inputs[p] = file_digest(p);
    j["inputs"] = std::move(inputs);
    j["outputs"] = output_files;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

} // namespace swnprior

#endif
