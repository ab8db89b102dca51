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
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rockb/cq.hpp"
#include "rockb/endpoint.hpp"
#include "rockb/ingest.hpp"
#include "rockb/manifest.hpp"
#include "rockb/ontology.hpp"
#include "rockb/sparql.hpp"
#include "rockb/store.hpp"
#include "rockb/turtle.hpp"

namespace {

using namespace rockb;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed for " + path);
}

struct Options {
    bool quiet = false;
};

void progress(const Options& opt, const std::string& line) {
    if (!opt.quiet) std::cerr << line << "\n";
}

/// --schema flag beats ROC_SCHEMA env beats the builtin schema.
OntologySchema effective_schema(const std::string& schema_path) {
    std::string path = schema_path;
    if (path.empty()) {
        if (const char* env = std::getenv("ROC_SCHEMA")) path = env;
    }
    if (path.empty()) return builtin_roc_schema();
    return load_schema(parse_rdf(slurp(path), syntax_for_path(path)));
}

void load_kb(Store& store, const std::string& path) {
    store.load(slurp(path), syntax_for_path(path));
}

int run_ingest(const Options& opt, const std::string& source, const std::string& csv_path,
               const std::string& mapping_path, const std::string& out_path, char delimiter,
               bool manifest) {
    MappingSpec spec;
    std::string mapping_id;
    if (source == "custom") {
        if (mapping_path.empty()) {
            std::cerr << "error: --source custom requires --mapping\n";
            return 2;
        }
        spec = compile_mapping(slurp(mapping_path));
        mapping_id = mapping_path;
    } else {
        SourcePreset preset = source == "oxcgrt" ? SourcePreset::Oxcgrt
                              : source == "ecdc" ? SourcePreset::Ecdc
                                                 : SourcePreset::Ilo;
        spec = preset_mapping(preset);
        mapping_id = "preset:" + source;
    }

    Table table = parse_csv(slurp(csv_path), delimiter);
    table.source_id = csv_path;
    IngestResult result = apply_mapping(table, spec);

    spill(out_path, serialize_rdf(result.graph, RdfSyntax::NTriples));
    for (const auto& [row, message] : result.report.errors)
        std::cerr << csv_path << ":" << row << ": " << message << "\n";
    progress(opt, "rows " + std::to_string(result.report.rows_read) + ", instances " +
                      std::to_string(result.report.instances_created) + ", triples " +
                      std::to_string(result.report.triples_emitted) + ", null cells " +
                      std::to_string(result.report.skipped_cells));

    if (manifest) {
        RunManifest m;
        m.command = "ingest";
        m.inputs.push_back({csv_path, {}});
        if (!mapping_path.empty()) m.inputs.push_back({mapping_path, {}});
        m.mapping = mapping_id;
        m.asserted = result.report.triples_emitted;
        m.output_path = out_path;
        write_manifest(std::move(m));
    }
    if (result.report.rows_read == 0 ||
        (result.report.instances_created == 0 && result.report.rows_read > 0)) {
        std::cerr << "error: no instances could be created from " << csv_path << "\n";
        return 1;
    }
    return 0;
}

int run_materialize(const Options& opt, const std::string& kb_path,
                    const std::string& schema_path, const std::string& out_path, bool manifest) {
    OntologySchema schema = effective_schema(schema_path);
    Store store;
    load_kb(store, kb_path);
    std::size_t inferred = store.materialize(schema);
    spill(out_path, store.dump_ntriples());
    Store::Stats st = store.stats();
    progress(opt, "asserted " + std::to_string(st.asserted) + ", inferred " +
                      std::to_string(inferred));
    if (manifest) {
        RunManifest m;
        m.command = "materialize";
        m.inputs.push_back({kb_path, {}});
        if (!schema_path.empty()) m.inputs.push_back({schema_path, {}});
        m.asserted = st.asserted;
        m.inferred = st.inferred;
        m.output_path = out_path;
        write_manifest(std::move(m));
    }
    return 0;
}

int run_validate(const std::string& kb_path, const std::string& schema_path,
                 const std::string& format) {
    OntologySchema schema = effective_schema(schema_path);
    Graph graph = parse_rdf(slurp(kb_path), syntax_for_path(kb_path));
    ValidationReport report = validate_graph(graph, schema);
    for (const auto& v : report.violations) {
        if (format == "csv") {
            std::cout << v.rule_id << "," << term_to_ntriples(v.triple.subject) << ",\""
                      << v.message << "\"\r\n";
        } else {
            std::cout << v.rule_id << "  " << term_to_ntriples(v.triple.subject) << "  "
                      << v.message << "\n";
        }
    }
    if (report.conforming()) {
        if (format != "csv") std::cout << "ok: no violations\n";
        return 0;
    }
    return 1;
}

int run_query(const std::string& kb_path, const std::string& query_path,
              const std::string& format) {
    Store store;
    load_kb(store, kb_path);
    store.freeze();
    QueryAst ast = parse_query(slurp(query_path));
    SolutionTable table = evaluate(ast, store);
    std::cout << serialize_results(
        table, format == "csv" ? ResultFormat::Csv : ResultFormat::SparqlJson);
    return 0;
}

int run_serve(const Options& opt, const std::string& kb_path, const std::string& bind,
              int timeout_ms, std::size_t max_query_bytes) {
    auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: --bind expects host:port\n";
        return 2;
    }
    EndpointConfig config;
    config.host = bind.substr(0, colon);
    config.port = std::atoi(bind.c_str() + colon + 1);
    config.request_timeout = std::chrono::milliseconds(timeout_ms);
    config.max_query_bytes = max_query_bytes;

    Store store;
    load_kb(store, kb_path);
    store.freeze();

    SparqlEndpoint endpoint(store, config);
    if (!endpoint.start()) {
        std::cerr << "error: cannot bind " << bind << "\n";
        return 1;
    }
    progress(opt, "serving " + kb_path + " on http://" + config.host + ":" +
                      std::to_string(endpoint.port()) + "/sparql");
    endpoint.wait();
    return 0;
}

std::string resolve_outcome_property(const std::string& outcome) {
    if (outcome.empty() || outcome == "new_cases") return roc::new_cases;
    if (outcome == "new_deaths") return roc::new_deaths;
    if (is_valid_iri(outcome)) return outcome;
    return roc::ns + outcome;
}

int run_cq(const Options&, int question, const std::string& kb_path,
           const std::string& indicator, const std::string& country, double min_level,
           double level, const std::string& outcome, int max_lag, const std::string& mode,
           const std::string& format, bool show_query) {
    OntologySchema schema = builtin_roc_schema();
    Store store;
    load_kb(store, kb_path);
    store.materialize(schema);
    store.freeze();
    bool csv = format == "csv";

    if (question == 1) {
        const IndicatorDefinition& ind = resolve_indicator(schema, indicator);
        if (show_query) std::cerr << cq1_query(ind.property_iri, min_level);
        auto countries = cq1_countries_with_response(store, indicator, min_level, schema);
        if (csv) std::cout << "country\r\n";
        for (const auto& c : countries) std::cout << c << (csv ? "\r\n" : "\n");
        return 0;
    }

    if (country.empty()) {
        std::cerr << "error: cq " << question << " requires --country\n";
        return 2;
    }
    std::string country_iri =
        is_valid_iri(country) ? country : country_iri_from_code(country);
    const IndicatorDefinition& ind = resolve_indicator(schema, indicator);

    if (question == 2) {
        TimeSeries response = extract_series(store, country_iri, ind.property_iri);
        TimeSeries cases = extract_series(store, country_iri, resolve_outcome_property(outcome));
        auto adoption = cq2_incidence_at_adoption(response, cases, level);
        if (!adoption) {
            std::cout << "level " << level << " never reached\n";
            return 0;
        }
        auto peak = peak_from(cases, adoption->first);
        if (csv) {
            std::cout << "date,incidence,post_adoption_peak\r\n"
                      << adoption->first.iso() << "," << adoption->second << ","
                      << (peak ? std::to_string(*peak) : "") << "\r\n";
        } else {
            std::cout << "adopted " << ind.code << " >= " << level << " on "
                      << adoption->first.iso() << " at incidence " << adoption->second << "\n";
            if (peak) std::cout << "post-adoption incidence peak: " << *peak << "\n";
        }
        return 0;
    }

    if (question == 3) {
        TimeSeries series = extract_series(store, country_iri, ind.property_iri);
        auto episodes = cq3_run_lengths(series, level);
        if (csv) std::cout << "start,end,days,level\r\n";
        for (const auto& e : episodes) {
            long days = e.end.day_number() - e.start.day_number() + 1;
            if (csv)
                std::cout << e.start.iso() << "," << e.end.iso() << "," << days << "," << e.level
                          << "\r\n";
            else
                std::cout << e.start.iso() << " .. " << e.end.iso() << "  (" << days << " days at >= "
                          << e.level << ")\n";
        }
        if (episodes.empty() && !csv) std::cout << "no episodes at level >= " << level << "\n";
        return 0;
    }

    if (question == 5) {
        TimeSeries response = extract_series(store, country_iri, ind.property_iri);
        TimeSeries raw_outcome =
            extract_series(store, country_iri, resolve_outcome_property(outcome));
        TimeSeries outcome_series = mode == "raw" ? raw_outcome : growth_rate(raw_outcome);
        Cq5Result result = cq5_lagged_correlation(response, outcome_series, max_lag);
        if (csv) std::cout << "lag,r\r\n";
        for (const auto& lc : result.lags) {
            if (csv)
                std::cout << lc.lag << "," << (lc.r ? std::to_string(*lc.r) : "") << "\r\n";
            else if (lc.r)
                std::cout << "lag " << lc.lag << ": r = " << *lc.r << "\n";
            else
                std::cout << "lag " << lc.lag << ": undefined\n";
        }
        if (!csv)
            std::cout << "estimated effect delay: lag " << result.best_lag << " ("
                      << (mode == "raw" ? "raw values" : "growth rate") << ")\n";
        return 0;
    }

    std::cerr << "error: supported questions are 1, 2, 3 and 5\n";
    return 2;
}

int run_stats(const std::string& kb_path, const std::string& schema_path) {
    OntologySchema schema = effective_schema(schema_path);
    Store store;
    load_kb(store, kb_path);
    Store::Stats st = store.stats();

    // Instances: subjects typed (directly or via a subclass) as
    // codo:CountryWiseStatistics.
    std::set<std::string> stat_classes{codo::country_wise_statistics};
    for (const auto& c : schema.classes)
        if (schema.super_classes(c).count(codo::country_wise_statistics)) stat_classes.insert(c);
    std::set<Term> instances;
    for (const auto& cls : stat_classes) {
        TriplePattern p{std::nullopt, Term{Iri{rdf::type}}, Term{Iri{cls}}};
        for (const auto& t : store.match(p)) instances.insert(t.subject);
    }

    std::cout << "asserted triples:    " << st.asserted << "\n"
              << "inferred triples:    " << st.inferred << "\n"
              << "distinct subjects:   " << st.distinct_subjects << "\n"
              << "distinct predicates: " << st.distinct_predicates << "\n"
              << "instances:           " << instances.size() << "\n";
    return 0;
}

int run_schema_export(const std::string& out_path) {
    spill(out_path, serialize_rdf(serialize_schema(builtin_roc_schema()), RdfSyntax::Turtle));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rockb: RDF knowledge-base toolkit for country-response data"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--quiet", opt.quiet, "suppress progress lines");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "transform a CSV source into an N-Triples KB");
    std::string source, csv_path, mapping_path, out_path;
    char delimiter = ',';
    bool manifest = false;
    ingest->add_option("--source", source, "oxcgrt | ecdc | ilo | custom")
        ->required()
        ->check(CLI::IsMember({"oxcgrt", "ecdc", "ilo", "custom"}));
    ingest->add_option("--csv", csv_path, "input CSV file")->required();
    ingest->add_option("--mapping", mapping_path, "mapping spec JSON (with --source custom)");
    ingest->add_option("--out", out_path, "output KB (N-Triples)")->required();
    ingest->add_option("--delimiter", delimiter, "CSV delimiter (default ',')");
    ingest->add_flag("--manifest", manifest, "write <out>.manifest.json");

    // materialize
    auto* materialize = app.add_subcommand("materialize", "add the schema's entailed triples");
    std::string kb_path, schema_path;
    materialize->add_option("--kb", kb_path, "input KB file")->required();
    materialize->add_option("--schema", schema_path, "schema Turtle (default: bundled)");
    materialize->add_option("--out", out_path, "output KB (N-Triples)")->required();
    materialize->add_flag("--manifest", manifest, "write <out>.manifest.json");

    // validate
    auto* validate = app.add_subcommand("validate", "check a KB against the schema");
    std::string format = "text";
    validate->add_option("--kb", kb_path, "KB file")->required();
    validate->add_option("--schema", schema_path, "schema Turtle (default: bundled)");
    validate->add_option("--format", format, "text | csv")
        ->check(CLI::IsMember({"text", "csv"}));

    // query
    auto* query = app.add_subcommand("query", "run a SPARQL query against a KB");
    std::string query_path, out_format = "json";
    query->add_option("--kb", kb_path, "KB file")->required();
    query->add_option("--query", query_path, "query file")->required();
    query->add_option("--format", out_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // serve
    auto* serve = app.add_subcommand("serve", "expose a KB through the SPARQL endpoint");
    std::string bind = "127.0.0.1:8080";
    int timeout_ms = 10000;
    std::size_t max_query_bytes = 1 << 20;
    serve->add_option("--kb", kb_path, "KB file")->required();
    serve->add_option("--bind", bind, "host:port (default 127.0.0.1:8080)");
    serve->add_option("--timeout-ms", timeout_ms, "per-query evaluation budget");
    serve->add_option("--max-query-bytes", max_query_bytes, "maximum query size");

    // cq
    auto* cq = app.add_subcommand("cq", "answer a competency question (1, 2, 3 or 5)");
    int question = 0;
    std::string indicator, country, outcome = "new_cases", mode = "growth";
    double min_level = 1, level = 1;
    int max_lag = 14;
    bool show_query = false;
    cq->add_option("question", question, "1 | 2 | 3 | 5")->required();
    cq->add_option("--kb", kb_path, "KB file")->required();
    cq->add_option("--indicator", indicator, "indicator code (e.g. h6) or property IRI")
        ->required();
    cq->add_option("--country", country, "ISO alpha-3 code or country IRI (cq 2/3/5)");
    cq->add_option("--min-level", min_level, "threshold for cq 1 (default 1)");
    cq->add_option("--level", level, "response level for cq 2/3 (default 1)");
    cq->add_option("--outcome", outcome, "outcome property (default new_cases)");
    cq->add_option("--max-lag", max_lag, "maximum lag in days for cq 5 (default 14)");
    cq->add_option("--mode", mode, "cq 5 outcome mode: growth | raw")
        ->check(CLI::IsMember({"growth", "raw"}));
    cq->add_option("--format", format, "text | csv")->check(CLI::IsMember({"text", "csv"}));
    cq->add_flag("--show-query", show_query, "print the generated SPARQL to stderr");

    // stats
    auto* stats = app.add_subcommand("stats", "triple and instance counts for a KB");
    stats->add_option("--kb", kb_path, "KB file")->required();
    stats->add_option("--schema", schema_path, "schema Turtle (default: bundled)");

    // schema
    auto* schema_cmd = app.add_subcommand("schema", "write the bundled schema as Turtle");
    schema_cmd->add_option("--out", out_path, "output Turtle file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (*ingest)
            return run_ingest(opt, source, csv_path, mapping_path, out_path, delimiter, manifest);
        if (*materialize) return run_materialize(opt, kb_path, schema_path, out_path, manifest);
        if (*validate) return run_validate(kb_path, schema_path, format);
        if (*query) return run_query(kb_path, query_path, out_format);
        if (*serve) return run_serve(opt, kb_path, bind, timeout_ms, max_query_bytes);
        if (*cq)
            return run_cq(opt, question, kb_path, indicator, country, min_level, level, outcome,
                          max_lag, mode, format, show_query);
        if (*stats) return run_stats(kb_path, schema_path);
        if (*schema_cmd) return run_schema_export(out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
