/*
* Copyright (C) 2026 The rockb authors
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
#ifndef ROCKB_MANIFEST_HPP
#define ROCKB_MANIFEST_HPP

#include <string>
#include <vector>

#include "rockb/rdf.hpp"

namespace rockb {

inline constexpr const char* kToolVersion = "1.0.0";

/// Reproducibility record written next to an output file when --manifest
/// is passed: inputs with checksums, the mapping used, triple counts.
struct RunManifest {
    std::string command;
    std::string created_utc;  // ISO-8601, filled by write_manifest when empty
    struct Input {
        std::string path;
        std::string sha256;
    };
    std::vector<Input> inputs;
    std::string mapping;  // "preset:oxcgrt", a file path, or empty
    std::size_t asserted = 0;
    std::size_t inferred = 0;
    std::string output_path;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

std::string manifest_json(const RunManifest& m);

/// Serializes the manifest to `<output_path>.manifest.json` (or an explicit
/// path). Checksums are computed here so they match the inputs at write
/// time. Returns the path written.
std::string write_manifest(RunManifest m, const std::string& explicit_path = {});

}  // namespace rockb

#endif  // ROCKB_MANIFEST_HPP
