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
#ifndef ROCKB_ENDPOINT_HPP
#define ROCKB_ENDPOINT_HPP

#include <chrono>
#include <memory>
#include <string>

#include "rockb/sparql.hpp"
#include "rockb/store.hpp"

namespace rockb {

struct EndpointConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0: pick an ephemeral port
    std::size_t max_query_bytes = 1 << 20;
    ResultFormat default_result_format = ResultFormat::SparqlJson;
    std::chrono::milliseconds request_timeout{10000};
};

/// Minimal SPARQL-protocol service over a frozen store. No TLS, no
/// authentication; bind to loopback unless you mean it.
///
/// Routes:
///   GET  /sparql?query=...    evaluate (Accept: text/csv switches format)
///   POST /sparql              body application/sparql-query, or
///                             application/x-www-form-urlencoded query=...
///   GET  /graph               deterministic N-Triples dump
///   GET  /health              "ok"
///
/// Statuses: 200 ok, 400 parse/unsupported (body carries the diagnostic),
/// 413 oversize query, 415 bad POST content type, 503 evaluation timeout.
class SparqlEndpoint {
public:
    /// The store must outlive the endpoint and be frozen before start().
    SparqlEndpoint(const Store& store, EndpointConfig config);
    ~SparqlEndpoint();

    SparqlEndpoint(const SparqlEndpoint&) = delete;
    SparqlEndpoint& operator=(const SparqlEndpoint&) = delete;

    /// Binds and serves on a background thread. False when the bind fails.
    bool start();

    /// Port actually bound (differs from config when port was 0).
    int port() const;

    void stop();

    /// Blocks until stop() is called from elsewhere (CLI serve loop).
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rockb

#endif  // ROCKB_ENDPOINT_HPP
