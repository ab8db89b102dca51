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
#include "rockb/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rockb {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

namespace {

std::string now_utc_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = "rockb";
    j["version"] = kToolVersion;
    j["command"] = m.command;
    j["created"] = m.created_utc;
    auto& inputs = j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
    if (!m.mapping.empty()) j["mapping"] = m.mapping;
    j["triples"]["asserted"] = m.asserted;
    j["triples"]["inferred"] = m.inferred;
    j["output"] = m.output_path;
    return j.dump(2) + "\n";
}

std::string write_manifest(RunManifest m, const std::string& explicit_path) {
    if (m.created_utc.empty()) m.created_utc = now_utc_iso8601();
    for (auto& in : m.inputs)
        if (in.sha256.empty()) in.sha256 = sha256_file(in.path);
    std::string path = explicit_path.empty() ? m.output_path + ".manifest.json" : explicit_path;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << manifest_json(m);
    return path;
}

}  // namespace rockb
