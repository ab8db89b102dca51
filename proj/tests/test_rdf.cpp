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

TEST_CASE("make_iri accepts absolute IRIs") {
    CHECK(make_iri("http://qurator-csi.de/ontologies/covid/responses#h2_testing_policy").value ==
          "http://qurator-csi.de/ontologies/covid/responses#h2_testing_policy");
    CHECK(make_iri("urn:iso:3166:SWE").value == "urn:iso:3166:SWE");
    CHECK(make_iri("tag:x").value == "tag:x");
}

TEST_CASE("make_iri rejects malformed input") {
    CHECK_THROWS_AS(make_iri("not an iri"), MalformedIri);
    CHECK_THROWS_AS(make_iri(""), MalformedIri);
    CHECK_THROWS_AS(make_iri("no-scheme"), MalformedIri);
    CHECK_THROWS_AS(make_iri(":leading-colon"), MalformedIri);
    CHECK_THROWS_AS(make_iri("1http://x"), MalformedIri);
    CHECK_THROWS_AS(make_iri("urn:has space"), MalformedIri);
    CHECK_THROWS_AS(make_iri("urn:angle<bracket"), MalformedIri);
    CHECK_THROWS_AS(make_iri("urn:back\\slash"), MalformedIri);
    CHECK_THROWS_AS(make_iri("urn:tab\there"), MalformedIri);
}

TEST_CASE("make_literal validates datatype grammars") {
    CHECK(make_literal("2", xsd::integer_dt).lexical == "2");
    CHECK(make_literal("+07", xsd::integer_dt).lexical == "+07");
    CHECK(make_literal("2020-04-01", xsd::date_dt).datatype == xsd::date_dt);
    CHECK(make_literal("2.", xsd::decimal_dt).lexical == "2.");
    CHECK(make_literal(".5", xsd::decimal_dt).lexical == ".5");
    CHECK(make_literal("5", xsd::decimal_dt).lexical == "5");
    CHECK(make_literal("1e5", xsd::double_dt).lexical == "1e5");
    CHECK(make_literal("-INF", xsd::double_dt).lexical == "-INF");
    CHECK(make_literal("true", xsd::boolean_dt).lexical == "true");
    CHECK(make_literal("anything at all", xsd::string_dt).lexical == "anything at all");

    CHECK_THROWS_AS(make_literal("abc", xsd::integer_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("1.5", xsd::integer_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("", xsd::integer_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal(".", xsd::decimal_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("1e", xsd::double_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("2020-13-01", xsd::date_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("2020-04-31", xsd::date_dt), DatatypeMismatch);
    CHECK_THROWS_AS(make_literal("2021-02-29", xsd::date_dt), DatatypeMismatch);
    CHECK_NOTHROW(make_literal("2020-02-29", xsd::date_dt));  // leap year
    CHECK_THROWS_AS(make_literal("yes", xsd::boolean_dt), DatatypeMismatch);
}

TEST_CASE("language tags belong to rdf:langString only") {
    CHECK(make_literal("hello", rdf::lang_string_dt, "en").lang == "en");
    CHECK_THROWS_AS(make_literal("hello", xsd::string_dt, "en"), LangConflict);
    CHECK_THROWS_AS(make_literal("hello", rdf::lang_string_dt), LangConflict);
}

TEST_CASE("numeric_value parses the numeric datatypes") {
    CHECK(numeric_value(make_literal("3", xsd::integer_dt)) == 3.0);
    CHECK(numeric_value(make_literal("0.5", xsd::decimal_dt)) == 0.5);
    CHECK(numeric_value(make_literal("-2.5e2", xsd::double_dt)) == -250.0);
    CHECK(numeric_value(make_literal("INF", xsd::double_dt)) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(numeric_value(make_literal("x", xsd::string_dt)), NotNumeric);
    CHECK_THROWS_AS(numeric_value(make_literal("2020-04-01", xsd::date_dt)), NotNumeric);
}

TEST_CASE("literal equality is term equality, value equality is numeric") {
    Literal a = make_literal("01", xsd::integer_dt);
    Literal b = make_literal("1", xsd::integer_dt);
    CHECK(a != b);
    CHECK(numeric_value(a) == numeric_value(b));
}

TEST_CASE("compare_terms: kind precedence and reflexivity") {
    Term iri{Iri{"a:x"}};
    Term blank{BlankNode{"b0"}};
    Term lit{make_literal("1", xsd::integer_dt)};
    CHECK(compare_terms(iri, iri) == Ordering::Equal);
    CHECK(compare_terms(blank, iri) == Ordering::Less);
    CHECK(compare_terms(iri, lit) == Ordering::Less);
    CHECK(compare_terms(blank, lit) == Ordering::Less);
    CHECK(compare_terms(Term{make_literal("1", xsd::integer_dt)},
                        Term{make_literal("2", xsd::integer_dt)}) == Ordering::Less);
}

TEST_CASE("compare_terms is a total order (property)") {
    Rng rng(20260801);
    for (int round = 0; round < 500; ++round) {
        Term a = random_term(rng), b = random_term(rng), c = random_term(rng);
        Ordering ab = compare_terms(a, b), ba = compare_terms(b, a);
        // antisymmetry / trichotomy
        if (ab == Ordering::Less) CHECK(ba == Ordering::Greater);
        if (ab == Ordering::Equal) {
            CHECK(ba == Ordering::Equal);
            CHECK(a == b);
        }
        if (ab == Ordering::Greater) CHECK(ba == Ordering::Less);
        // transitivity
        if (ab != Ordering::Greater && compare_terms(b, c) != Ordering::Greater)
            CHECK(compare_terms(a, c) != Ordering::Greater);
        CHECK(compare_terms(a, a) == Ordering::Equal);
    }
}

TEST_CASE("literal ordering key is (datatype, lexical, lang)") {
    Term a{Literal{"z", xsd::decimal_dt, {}}};
    Term b{Literal{"a", xsd::integer_dt, {}}};
    // decimal datatype IRI sorts before the integer one
    CHECK(compare_terms(a, b) == Ordering::Less);
}

TEST_CASE("graph insertion is idempotent") {
    Graph g;
    Triple t(Iri{"urn:s"}, Iri{"urn:p"}, Iri{"urn:o"});
    CHECK(g.insert(t));
    CHECK(g.size() == 1);
    CHECK_FALSE(g.insert(t));
    CHECK(g.size() == 1);
}

TEST_CASE("triples reject literal subjects") {
    CHECK_THROWS_AS(Triple(Term{make_literal("1", xsd::integer_dt)}, Iri{"urn:p"}, Iri{"urn:o"}),
                    InvalidTriple);
}

TEST_CASE("graph merge renames colliding blank labels") {
    Graph a, b;
    a.insert(Triple(BlankNode{"n"}, Iri{"urn:p"}, Term{make_literal("left", xsd::string_dt)}));
    b.insert(Triple(BlankNode{"n"}, Iri{"urn:p"}, Term{make_literal("right", xsd::string_dt)}));
    a.merge(b);
    CHECK(a.size() == 2);
    CHECK(a.blank_labels().size() == 2);  // two distinct nodes after the merge

    // Non-colliding labels are kept as-is.
    Graph c;
    c.insert(Triple(BlankNode{"other"}, Iri{"urn:p"}, Iri{"urn:o"}));
    a.merge(c);
    CHECK(a.blank_labels().count("other") == 1);
}

TEST_CASE("isomorphic matches graphs up to blank relabeling") {
    Graph a, b;
    a.insert(Triple(BlankNode{"x"}, Iri{"urn:p"}, Iri{"urn:o"}));
    b.insert(Triple(BlankNode{"y"}, Iri{"urn:p"}, Iri{"urn:o"}));
    CHECK(isomorphic(a, b));

    Graph c;
    c.insert(Triple(BlankNode{"y"}, Iri{"urn:p"}, Iri{"urn:other"}));
    CHECK_FALSE(isomorphic(a, c));

    // Two blanks that must not collapse onto one.
    Graph d, e;
    d.insert(Triple(BlankNode{"x"}, Iri{"urn:p"}, Term{make_literal("1", xsd::integer_dt)}));
    d.insert(Triple(BlankNode{"y"}, Iri{"urn:p"}, Term{make_literal("2", xsd::integer_dt)}));
    e.insert(Triple(BlankNode{"y"}, Iri{"urn:p"}, Term{make_literal("1", xsd::integer_dt)}));
    e.insert(Triple(BlankNode{"x"}, Iri{"urn:p"}, Term{make_literal("2", xsd::integer_dt)}));
    CHECK(isomorphic(d, e));
}
