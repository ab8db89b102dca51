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
#include "doctest.h"
#include "testutil.hpp"

using namespace rockb;
using namespace testutil;

TEST_CASE("csv parsing basics") {
    Table t = parse_csv("a,b\n1,2\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "2"});

    t = parse_csv("a,b\n\"x,y\",2\n");
    CHECK(t.rows[0] == std::vector<std::string>{"x,y", "2"});

    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), RaggedRow);
    try {
        parse_csv("a,b\n1,2\n3\n");
    } catch (const RaggedRow& e) {
        CHECK(e.row == 3);
    }
    CHECK_THROWS_AS(parse_csv(""), EmptyInput);
    CHECK_THROWS_AS(parse_csv("  \n"), EmptyInput);
}

TEST_CASE("csv quoting corners") {
    Table t = parse_csv("a,b\r\n\"line\nbreak\",\"she said \"\"hi\"\"\"\r\n");
    CHECK(t.rows[0][0] == "line\nbreak");
    CHECK(t.rows[0][1] == "she said \"hi\"");

    t = parse_csv("\xEF\xBB\xBFh1,h2\nx,y");  // BOM, no trailing newline
    CHECK(t.header[0] == "h1");
    CHECK(t.rows.size() == 1);

    t = parse_csv("a;b\n1;2\n", ';');
    CHECK(t.rows[0][1] == "2");

    t = parse_csv("a,b\n,\n");  // empty cells survive
    CHECK(t.rows[0] == std::vector<std::string>{"", ""});

    t = parse_csv("a,b\n");  // header only
    CHECK(t.rows.empty());
}

TEST_CASE("mapping compilation validates its document") {
    CHECK_THROWS_AS(compile_mapping("not json"), MappingError);
    CHECK_THROWS_AS(compile_mapping("{}"), MappingError);
    CHECK_THROWS_AS(compile_mapping(R"({"subject_template": "urn:x:{Code"})"), BadTemplate);
    CHECK_THROWS_AS(compile_mapping(R"({"subject_template": "urn:x:}oops"})"), BadTemplate);
    CHECK_THROWS_AS(compile_mapping(R"({"subject_template": "urn:x:{}"})"), BadTemplate);

    std::string dup = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "H2_Testing policy", "property": "urn:p:1", "datatype": "http://www.w3.org/2001/XMLSchema#integer"},
        {"column": "H2_Testing policy", "property": "urn:p:2", "datatype": "http://www.w3.org/2001/XMLSchema#integer"}
      ]})";
    CHECK_THROWS_AS(compile_mapping(dup), DuplicateBinding);

    std::string bad_transform = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "C", "property": "urn:p:1", "datatype": "http://www.w3.org/2001/XMLSchema#string", "transform": "shout"}
      ]})";
    CHECK_THROWS_AS(compile_mapping(bad_transform), UnknownTransform);

    std::string bad_iri = R"({"subject_template": "urn:x:{C}", "types": ["no iri"]})";
    CHECK_THROWS_AS(compile_mapping(bad_iri), MappingError);
}

TEST_CASE("presets compile from their own documents") {
    for (SourcePreset p : {SourcePreset::Oxcgrt, SourcePreset::Ecdc, SourcePreset::Ilo}) {
        MappingSpec spec = preset_mapping(p);
        CHECK(compile_mapping(preset_mapping_json(p)) == spec);
        CHECK_FALSE(spec.links.empty());
        CHECK(spec.links[0].property_iri == codo::country_wise_statistics_prop);
    }

    MappingSpec ox = preset_mapping(SourcePreset::Oxcgrt);
    CHECK(ox.subject_template == rocdata::ns + "{CountryCode}-{Date}");
    const OntologySchema& schema = builtin_roc_schema();
    int indicator_bindings = 0;
    for (const auto& b : ox.bindings)
        if (schema.indicator_by_property(b.property_iri)) ++indicator_bindings;
    CHECK(indicator_bindings == 19);

    MappingSpec ecdc = preset_mapping(SourcePreset::Ecdc);
    std::set<std::string> cols;
    for (const auto& b : ecdc.bindings) cols.insert(b.column);
    CHECK(cols.count("cases") == 1);
    CHECK(cols.count("deaths") == 1);

    MappingSpec ilo = preset_mapping(SourcePreset::Ilo);
    bool has_unemployment = false;
    for (const auto& b : ilo.bindings)
        if (b.property_iri == roc::unemployment_rate) has_unemployment = true;
    CHECK(has_unemployment);
}

TEST_CASE("bundled mapping files equal the embedded presets") {
    CHECK(slurp_file(data_file("mappings/oxcgrt.json")) ==
          preset_mapping_json(SourcePreset::Oxcgrt));
    CHECK(slurp_file(data_file("mappings/ecdc.json")) == preset_mapping_json(SourcePreset::Ecdc));
    CHECK(slurp_file(data_file("mappings/ilo.json")) == preset_mapping_json(SourcePreset::Ilo));
}

TEST_CASE("a single oxcgrt row maps to the documented triples") {
    std::string csv =
        "CountryName,CountryCode,Date,H2_Testing policy,H6_Facial Coverings\n"
        "Sweden,SWE,20200401,1,0\n";
    // trimmed-down custom mapping equivalent to the oxcgrt preset core
    std::string mapping = R"({
      "subject_template": "http://qurator-csi.de/data/covid/{CountryCode}-{Date}",
      "types": ["http://qurator-csi.de/ontologies/covid/responses#ResponseStatistics"],
      "bindings": [
        {"column": "Date", "property": "http://qurator-csi.de/ontologies/covid/responses#date",
         "datatype": "http://www.w3.org/2001/XMLSchema#date", "transform": "date_yyyymmdd_to_iso"},
        {"column": "H2_Testing policy", "property": "http://qurator-csi.de/ontologies/covid/responses#h2_testing_policy",
         "datatype": "http://www.w3.org/2001/XMLSchema#integer"},
        {"column": "H6_Facial Coverings", "property": "http://qurator-csi.de/ontologies/covid/responses#h6_facial_coverings",
         "datatype": "http://www.w3.org/2001/XMLSchema#integer"}
      ],
      "links": [
        {"property": "http://www.isibang.ac.in/ns/codo#countryWiseStatistics",
         "subject_template": "http://qurator-csi.de/data/covid/country/{CountryCode}",
         "types": ["http://qurator-csi.de/ontologies/covid/responses#Country"],
         "label_column": "CountryName"}
      ]})";
    IngestResult r = apply_mapping(parse_csv(csv), compile_mapping(mapping));
    CHECK(r.report.errors.empty());
    CHECK(r.report.instances_created == 1);

    std::string expected_subject = rocdata::ns + "SWE-2020-04-01";
    Graph expected;
    expected.insert(Triple(Iri{expected_subject}, Iri{rdf::type}, Iri{roc::response_statistics}));
    expected.insert(Triple(Iri{expected_subject}, Iri{roc::date},
                           Term{make_literal("2020-04-01", xsd::date_dt)}));
    expected.insert(Triple(Iri{expected_subject}, Iri{roc::ns + "h2_testing_policy"},
                           Term{make_literal("1", xsd::integer_dt)}));
    expected.insert(Triple(Iri{expected_subject}, Iri{roc::ns + "h6_facial_coverings"},
                           Term{make_literal("0", xsd::integer_dt)}));
    expected.insert(Triple(Iri{rocdata::country_ns + "SWE"},
                           Iri{codo::country_wise_statistics_prop}, Iri{expected_subject}));
    expected.insert(
        Triple(Iri{rocdata::country_ns + "SWE"}, Iri{rdf::type}, Iri{roc::country_class}));
    expected.insert(Triple(Iri{rocdata::country_ns + "SWE"}, Iri{rdfs::label},
                           Term{make_literal("Sweden", xsd::string_dt)}));
    CHECK(r.graph.triples() == expected.triples());
}

TEST_CASE("empty tables and counting fixtures") {
    Table empty = parse_csv("CountryName,CountryCode,Date\n");
    MappingSpec spec = compile_mapping(R"({"subject_template": "urn:x:{CountryCode}"})");
    IngestResult r = apply_mapping(empty, spec);
    CHECK(r.report.rows_read == 0);
    CHECK(r.graph.empty());

    Table t = parse_csv(slurp_file(data_file("fixtures/oxcgrt_3x10.csv")));
    IngestResult fixture = apply_mapping(t, preset_mapping(SourcePreset::Oxcgrt));
    CHECK(fixture.report.rows_read == 30);
    CHECK(fixture.report.instances_created == 30);
}

TEST_CASE("null markers skip cells and are counted") {
    std::string csv = "C,V\nx,1\ny,\nz,NA\n";
    std::string mapping = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "V", "property": "urn:p:v", "datatype": "http://www.w3.org/2001/XMLSchema#integer"}
      ]})";
    IngestResult r = apply_mapping(parse_csv(csv), compile_mapping(mapping));
    CHECK(r.report.skipped_cells == 2);
    CHECK(r.report.triples_emitted == 1);
    CHECK(r.report.instances_created == 3);

    std::string custom_markers = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "V", "property": "urn:p:v", "datatype": "http://www.w3.org/2001/XMLSchema#integer",
         "null_markers": ["missing"]}
      ]})";
    IngestResult r2 = apply_mapping(parse_csv("C,V\nx,missing\ny,NA\n"),
                                    compile_mapping(custom_markers));
    CHECK(r2.report.skipped_cells == 1);
    CHECK(r2.report.errors.size() == 1);  // "NA" no longer null: fails the integer grammar
}

TEST_CASE("cell errors are per-row, template column errors fail the table") {
    std::string mapping = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "V", "property": "urn:p:v", "datatype": "http://www.w3.org/2001/XMLSchema#integer"},
        {"column": "D", "property": "urn:p:d", "datatype": "http://www.w3.org/2001/XMLSchema#date",
         "transform": "date_yyyymmdd_to_iso"}
      ]})";
    MappingSpec spec = compile_mapping(mapping);

    IngestResult r = apply_mapping(parse_csv("C,V,D\nx,notanumber,20200401\ny,2,baddate\n"), spec);
    CHECK(r.report.errors.size() == 2);
    CHECK(r.report.errors[0].first == 2);
    CHECK(r.report.errors[1].first == 3);
    CHECK(r.report.triples_emitted == 2);  // the good cells still land

    CHECK_THROWS_AS(apply_mapping(parse_csv("X,V,D\nx,1,20200401\n"), spec), UnknownColumn);

    // a bound column missing from the header degrades to a report entry
    IngestResult r2 = apply_mapping(parse_csv("C,V\nx,1\n"), spec);
    CHECK(r2.report.errors.size() == 1);
    CHECK(r2.report.triples_emitted == 1);
}

TEST_CASE("trim transform and iri-unsafe cells") {
    std::string mapping = R"({
      "subject_template": "urn:x:{C}",
      "bindings": [
        {"column": "V", "property": "urn:p:v", "datatype": "http://www.w3.org/2001/XMLSchema#string",
         "transform": "trim"}
      ]})";
    IngestResult r = apply_mapping(parse_csv("C,V\nwith space,  padded  \n"),
                                   compile_mapping(mapping));
    REQUIRE(r.report.errors.empty());
    bool found = false;
    for (const auto& t : r.graph)
        if (auto* l = std::get_if<Literal>(&t.object); l && l->lexical == "padded") {
            found = true;
            CHECK(std::get<Iri>(t.subject).value == "urn:x:with%20space");
        }
    CHECK(found);
}

TEST_CASE("ingestion is deterministic and idempotent through the store") {
    Table t = parse_csv(slurp_file(data_file("fixtures/oxcgrt_3x10.csv")));
    MappingSpec spec = preset_mapping(SourcePreset::Oxcgrt);
    IngestResult a = apply_mapping(t, spec);
    IngestResult b = apply_mapping(t, spec);
    CHECK(serialize_rdf(a.graph, RdfSyntax::NTriples) ==
          serialize_rdf(b.graph, RdfSyntax::NTriples));

    Store store;
    CHECK(store.insert_graph(a.graph) == a.graph.size());
    CHECK(store.insert_graph(b.graph) == 0);  // re-applying adds nothing
}

TEST_CASE("ecdc and ilo fixtures land on the expected nodes") {
    Table ecdc = parse_csv(slurp_file(data_file("fixtures/ecdc_3x30.csv")));
    IngestResult re = apply_mapping(ecdc, preset_mapping(SourcePreset::Ecdc));
    CHECK(re.report.errors.empty());
    CHECK(re.report.instances_created == 90);
    // same instance-IRI scheme as the oxcgrt preset: merging joins the sources
    CHECK(re.graph.contains(Triple(Iri{rocdata::ns + "SWE-2020-04-01"}, Iri{roc::new_cases},
                                   Term{make_literal("42", xsd::integer_dt)})));

    Table ilo = parse_csv(slurp_file(data_file("fixtures/ilo_quarterly.csv")));
    IngestResult ri = apply_mapping(ilo, preset_mapping(SourcePreset::Ilo));
    CHECK(ri.report.errors.empty());
    CHECK(ri.report.instances_created == 9);
    CHECK(ri.graph.contains(Triple(Iri{rocdata::ns + "ilo/DEU-2020Q2"}, Iri{roc::period},
                                   Term{make_literal("2020Q2", xsd::string_dt)})));
}
