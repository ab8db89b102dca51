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
#include "rockb/endpoint.hpp"

#include <atomic>
#include <thread>

#include "httplib.h"

namespace rockb {

struct SparqlEndpoint::Impl {
    const Store& store;
    EndpointConfig config;
    httplib::Server server;
    std::thread worker;
    std::atomic<int> bound_port{0};
    std::string graph_dump;  // computed once; the store is frozen

    Impl(const Store& s, EndpointConfig c) : store(s), config(std::move(c)) {}

    void answer_query(const std::string& query, const httplib::Request& req,
                      httplib::Response& res) {
        if (query.size() > config.max_query_bytes) {
            res.status = 413;
            res.set_content("query exceeds " + std::to_string(config.max_query_bytes) + " bytes\n",
                            "text/plain");
            return;
        }
        ResultFormat format = config.default_result_format;
        if (req.get_header_value("Accept").find("text/csv") != std::string::npos)
            format = ResultFormat::Csv;
        try {
            QueryAst ast = parse_query(query);
            auto deadline = std::chrono::steady_clock::now() + config.request_timeout;
            SolutionTable table = evaluate(ast, store, deadline);
            res.status = 200;
            res.set_content(serialize_results(table, format),
                            format == ResultFormat::Csv ? "text/csv"
                                                        : "application/sparql-results+json");
        } catch (const EvalTimeout&) {
            res.status = 503;
            res.set_header("Retry-After", "1");
            res.set_content("query evaluation timed out; retry with a simpler query\n",
                            "text/plain");
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
        }
    }

    void install_routes() {
        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/plain");
        });

        server.Get("/graph", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(graph_dump, "application/n-triples");
        });

        server.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_param("query")) {
                res.status = 400;
                res.set_content("missing 'query' parameter\n", "text/plain");
                return;
            }
            answer_query(req.get_param_value("query"), req, res);
        });

        server.Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string content_type = req.get_header_value("Content-Type");
            if (content_type.rfind("application/sparql-query", 0) == 0) {
                answer_query(req.body, req, res);
            } else if (content_type.rfind("application/x-www-form-urlencoded", 0) == 0) {
                if (!req.has_param("query")) {
                    res.status = 400;
                    res.set_content("missing 'query' form field\n", "text/plain");
                    return;
                }
                answer_query(req.get_param_value("query"), req, res);
            } else {
                res.status = 415;
                res.set_content("use application/sparql-query or "
                                "application/x-www-form-urlencoded\n",
                                "text/plain");
            }
        });
    }
};

SparqlEndpoint::SparqlEndpoint(const Store& store, EndpointConfig config)
    : impl_(std::make_unique<Impl>(store, std::move(config))) {}

SparqlEndpoint::~SparqlEndpoint() { stop(); }

bool SparqlEndpoint::start() {
    Impl& im = *impl_;
    im.graph_dump = im.store.dump_ntriples();
    im.install_routes();

    unsigned pool = std::max(8u, std::thread::hardware_concurrency());
    im.server.new_task_queue = [pool] { return new httplib::ThreadPool(pool); };

    int port = im.config.port;
    if (port == 0) {
        port = im.server.bind_to_any_port(im.config.host);
        if (port < 0) return false;
    } else if (!im.server.bind_to_port(im.config.host, port)) {
        return false;
    }
    im.bound_port = port;
    im.worker = std::thread([&im] { im.server.listen_after_bind(); });
    im.server.wait_until_ready();
    return true;
}

int SparqlEndpoint::port() const { return impl_->bound_port; }

void SparqlEndpoint::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

void SparqlEndpoint::wait() {
    if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace rockb
