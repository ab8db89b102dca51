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

TEST_CASE("builtin schema carries the terms the queries use verbatim") {
    const OntologySchema& s = builtin_roc_schema();
    for (const char* name : {"h2_testing_policy", "h3_contact_tracing",
                             "h4_emergency_investment_in_healthcare", "h5_investment_in_vaccines",
                             "h6_facial_coverings"})
        CHECK(s.data_properties.count(roc::ns + name) == 1);
    CHECK(s.object_properties.count(codo::country_wise_statistics_prop) == 1);
    CHECK(s.subclass_of.count({roc::response_statistics, codo::country_wise_statistics}) == 1);
    CHECK(s.classes.count(roc::country_class) == 1);
}

TEST_CASE("builtin schema indicator catalogue") {
    const OntologySchema& s = builtin_roc_schema();
    CHECK(s.indicators.size() == 19);

    const IndicatorDefinition* h6 = s.indicator_by_code("h6");
    REQUIRE(h6);
    CHECK(h6->property_iri == roc::ns + "h6_facial_coverings");
    CHECK(h6->kind == ValueKind::Ordinal);
    CHECK(h6->ordinal_max == 4);
    CHECK(h6->has_flag);
    CHECK(h6->category == 'H');

    const IndicatorDefinition* h2 = s.indicator_by_code("h2");
    REQUIRE(h2);
    CHECK(h2->ordinal_max == 3);
    CHECK_FALSE(h2->has_flag);

    // monetary indicators have no ordinal range and a decimal range
    for (const char* code : {"e3", "e4", "h4", "h5"}) {
        const IndicatorDefinition* d = s.indicator_by_code(code);
        REQUIRE(d);
        CHECK(d->kind == ValueKind::Monetary);
        CHECK_FALSE(d->ordinal_max.has_value());
        CHECK(s.ranges.at(d->property_iri) == xsd::decimal_dt);
    }

    // codes match ^[cehm][0-9]+$ and properties follow code_label naming
    for (const auto& d : s.indicators) {
        CHECK(std::string("cehm").find(std::tolower(d.category)) != std::string::npos);
        CHECK(d.property_iri == roc::ns + d.code + "_" + d.label);
        CHECK((d.kind == ValueKind::Ordinal) == d.ordinal_max.has_value());
        if (d.ordinal_max) CHECK(*d.ordinal_max >= 1);
        CHECK(d.has_flag == !d.flag_property_iri.empty());
    }
}

TEST_CASE("every indicator has exactly one category ancestor") {
    const OntologySchema& s = builtin_roc_schema();
    std::set<std::string> categories{roc::containment_and_closure, roc::economic_response,
                                     roc::health_systems, roc::miscellaneous};
    for (const auto& d : s.indicators) {
        auto supers = s.super_properties(d.property_iri);
        std::size_t hits = 0;
        for (const auto& c : categories) hits += supers.count(c);
        CHECK_MESSAGE(hits == 1, d.code);
    }
}

TEST_CASE("super_properties walks the hierarchy transitively") {
    const OntologySchema& s = builtin_roc_schema();
    CHECK(s.super_properties(roc::ns + "h3_contact_tracing") ==
          std::set<std::string>{roc::health_systems});
    CHECK(s.super_properties(roc::ns + "h2_testing_policy") ==
          std::set<std::string>{roc::health_systems});
    CHECK(s.super_properties(roc::health_systems).empty());
    CHECK_THROWS_AS(s.super_properties("urn:nope"), UnknownProperty);

    OntologySchema chain;
    chain.subproperty_of = {{"urn:a", "urn:b"}, {"urn:b", "urn:c"}};
    CHECK(super_properties(chain, "urn:a") == std::set<std::string>{"urn:b", "urn:c"});
}

TEST_CASE("schema serialization round-trips structurally") {
    const OntologySchema& s = builtin_roc_schema();
    Graph g = serialize_schema(s);
    OntologySchema loaded = load_schema(g);
    CHECK(loaded == s);

    // and survives the Turtle file form as well
    Graph reparsed = parse_rdf(serialize_rdf(g, RdfSyntax::Turtle), RdfSyntax::Turtle);
    CHECK(load_schema(reparsed) == s);
}

TEST_CASE("load_schema edge cases") {
    CHECK(load_schema(Graph{}) == OntologySchema{});

    Graph cyc;
    cyc.insert(Triple(Iri{"urn:p"}, Iri{rdfs::sub_property_of}, Iri{"urn:q"}));
    cyc.insert(Triple(Iri{"urn:q"}, Iri{rdfs::sub_property_of}, Iri{"urn:p"}));
    CHECK_THROWS_AS(load_schema(cyc), CyclicHierarchy);

    Graph ccyc;
    ccyc.insert(Triple(Iri{"urn:a"}, Iri{rdfs::sub_class_of}, Iri{"urn:b"}));
    ccyc.insert(Triple(Iri{"urn:b"}, Iri{rdfs::sub_class_of}, Iri{"urn:a"}));
    CHECK_THROWS_AS(load_schema(ccyc), CyclicHierarchy);
}

TEST_CASE("bundled roc-schema.ttl matches the builtin schema byte for byte") {
    std::string shipped = slurp_file(data_file("roc-schema.ttl"));
    std::string generated = serialize_rdf(serialize_schema(builtin_roc_schema()), RdfSyntax::Turtle);
    CHECK(shipped == generated);
}

TEST_CASE("validate_graph flags the four rule families") {
    const OntologySchema& s = builtin_roc_schema();
    const std::string h6 = roc::ns + "h6_facial_coverings";
    const std::string h4 = roc::ns + "h4_emergency_investment_in_healthcare";

    SUBCASE("ordinal out of range") {
        Graph g;
        g.insert(Triple(Iri{"urn:s"}, Iri{rdf::type}, Iri{roc::response_statistics}));
        g.insert(Triple(Iri{"urn:s"}, Iri{h6}, Term{make_literal("99", xsd::integer_dt)}));
        auto report = validate_graph(g, s);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule_id == "ordinal-range");
    }

    SUBCASE("non-numeric object on a numeric property") {
        Graph g;
        g.insert(Triple(Iri{"urn:s"}, Iri{rdf::type}, Iri{roc::response_statistics}));
        g.insert(Triple(Iri{"urn:s"}, Iri{h4}, Term{make_literal("high", xsd::string_dt)}));
        auto report = validate_graph(g, s);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule_id == "numeric-object");
    }

    SUBCASE("indicator subject without the statistics type") {
        Graph g;
        g.insert(Triple(Iri{"urn:s"}, Iri{h6}, Term{make_literal("1", xsd::integer_dt)}));
        auto report = validate_graph(g, s);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule_id == "missing-type");
    }

    SUBCASE("subclass closure satisfies the type rule") {
        OntologySchema extended = s;
        extended.classes.insert("urn:Sub");
        extended.subclass_of.insert({"urn:Sub", roc::response_statistics});
        Graph g;
        g.insert(Triple(Iri{"urn:s"}, Iri{rdf::type}, Iri{"urn:Sub"}));
        g.insert(Triple(Iri{"urn:s"}, Iri{h6}, Term{make_literal("1", xsd::integer_dt)}));
        CHECK(validate_graph(g, extended).conforming());
    }

    SUBCASE("dangling statistics link") {
        Graph g;
        g.insert(Triple(Iri{"urn:c"}, Iri{codo::country_wise_statistics_prop}, Iri{"urn:ghost"}));
        auto report = validate_graph(g, s);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule_id == "dangling-stats");

        g.insert(Triple(Iri{"urn:ghost"}, Iri{roc::date},
                        Term{make_literal("2020-04-01", xsd::date_dt)}));
        CHECK(validate_graph(g, s).conforming());
    }
}

TEST_CASE("the ingested fixture conforms") {
    Table t = parse_csv(slurp_file(data_file("fixtures/oxcgrt_3x30.csv")));
    IngestResult r = apply_mapping(t, preset_mapping(SourcePreset::Oxcgrt));
    CHECK(r.report.errors.empty());
    auto report = validate_graph(r.graph, builtin_roc_schema());
    for (const auto& v : report.violations) MESSAGE(v.rule_id, ": ", v.message);
    CHECK(report.conforming());
}
