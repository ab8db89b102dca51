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

namespace {

std::vector<Triple> all_triples(const Graph& g) {
    return {g.begin(), g.end()};
}

}  // namespace

TEST_CASE("insert deduplicates") {
    Store s;
    Triple t(Iri{"urn:s"}, Iri{"urn:p"}, Iri{"urn:o"});
    CHECK(s.insert(t));
    CHECK_FALSE(s.insert(t));
    CHECK(s.size() == 1);
    CHECK(s.stats().asserted == 1);
}

TEST_CASE("match answers the spec examples") {
    Rng rng(42);
    Graph g = random_graph(rng, 30);
    Store s;
    s.insert_graph(g);
    auto all = s.match({});
    CHECK(all.size() == g.size());

    if (!g.empty()) {
        Term s0 = g.begin()->subject;
        TriplePattern p;
        p.s = s0;
        CHECK(s.match(p) == scan_filter(all_triples(g), p));
    }
}

TEST_CASE("match equals the full-scan oracle on random patterns") {
    Rng rng(20260802);
    for (int round = 0; round < 60; ++round) {
        Graph g = random_graph(rng, 50);
        Store s;
        s.insert_graph(g);
        std::vector<Triple> triples = all_triples(g);
        for (int q = 0; q < 8; ++q) {
            TriplePattern pat;
            auto pick_term = [&](int position) -> std::optional<Term> {
                if (chance(rng, 0.45)) return std::nullopt;
                if (!triples.empty() && chance(rng, 0.8)) {
                    const Triple& t = triples[static_cast<std::size_t>(
                        pick(rng, 0, static_cast<int>(triples.size()) - 1))];
                    return position == 0 ? t.subject
                           : position == 1 ? Term{t.predicate}
                                           : t.object;
                }
                return random_term(rng, position == 2, position != 1);
            };
            pat.s = pick_term(0);
            pat.p = pick_term(1);
            pat.o = pick_term(2);
            CHECK(s.match(pat) == scan_filter(triples, pat));
        }
    }
}

TEST_CASE("materialize implements the category inference") {
    const OntologySchema& schema = builtin_roc_schema();
    Store s;
    Iri x{"urn:x"};
    s.insert(Triple(x, Iri{roc::ns + "h2_testing_policy"},
                    Term{make_literal("2", xsd::integer_dt)}));
    s.insert(Triple(x, Iri{rdf::type}, Iri{roc::response_statistics}));

    std::size_t added = s.materialize(schema);
    CHECK(added > 0);
    CHECK_FALSE(s.match({Term{x}, Term{Iri{roc::health_systems}}, std::nullopt}).empty());
    CHECK_FALSE(
        s.match({Term{x}, Term{Iri{rdf::type}}, Term{Iri{codo::country_wise_statistics}}}).empty());

    CHECK(s.materialize(schema) == 0);  // idempotent
}

TEST_CASE("materialize on an empty store infers nothing") {
    Store s;
    CHECK(s.materialize(builtin_roc_schema()) == 0);
}

TEST_CASE("rule R1 follows chains in one call") {
    OntologySchema schema;
    schema.data_properties = {"urn:p", "urn:q", "urn:r"};
    schema.subproperty_of = {{"urn:p", "urn:q"}, {"urn:q", "urn:r"}};
    Store s;
    s.insert(Triple(Iri{"urn:s"}, Iri{"urn:p"}, Term{make_literal("1", xsd::integer_dt)}));
    s.materialize(schema);
    CHECK_FALSE(s.match({std::nullopt, Term{Iri{"urn:q"}}, std::nullopt}).empty());
    CHECK_FALSE(s.match({std::nullopt, Term{Iri{"urn:r"}}, std::nullopt}).empty());
}

TEST_CASE("inverse rule skips literal objects") {
    OntologySchema schema;
    schema.object_properties = {"urn:p", "urn:q"};
    schema.inverse_of = {{"urn:p", "urn:q"}};
    Store s;
    s.insert(Triple(Iri{"urn:a"}, Iri{"urn:p"}, Iri{"urn:b"}));
    s.insert(Triple(Iri{"urn:a"}, Iri{"urn:p"}, Term{make_literal("x", xsd::string_dt)}));
    s.materialize(schema);
    CHECK(s.match({Term{Iri{"urn:b"}}, Term{Iri{"urn:q"}}, Term{Iri{"urn:a"}}}).size() == 1);
    CHECK(s.match({std::nullopt, Term{Iri{"urn:q"}}, std::nullopt}).size() == 1);
}

TEST_CASE("materialization equals the naive fixpoint on random inputs") {
    Rng rng(20260803);
    for (int round = 0; round < 40; ++round) {
        OntologySchema schema = random_schema(rng);
        Graph instances = random_instances(rng, schema);

        Store s;
        s.insert_graph(instances);
        std::size_t before = s.size();
        std::size_t added = s.materialize(schema);

        std::set<Triple> expected = naive_fixpoint(instances.triples(), schema);
        std::set<Triple> got;
        for (const auto& t : s.match({})) got.insert(t);

        CHECK_MESSAGE(got == expected, "round ", round);
        CHECK(s.size() == before + added);           // monotone, counted correctly
        CHECK(s.materialize(schema) == 0);           // idempotent
        CHECK(s.stats().asserted == before);         // asserted triples untouched
        CHECK(s.stats().inferred == s.size() - before);
    }
}

TEST_CASE("stats counts asserted, inferred, subjects and predicates") {
    Store s;
    CHECK(s.stats() == Store::Stats{0, 0, 0, 0});
    s.insert(Triple(Iri{"urn:a"}, Iri{"urn:p"}, Iri{"urn:b"}));
    s.insert(Triple(Iri{"urn:a"}, Iri{"urn:q"}, Term{make_literal("1", xsd::integer_dt)}));
    s.insert(Triple(Iri{"urn:b"}, Iri{"urn:p"}, Iri{"urn:a"}));
    Store::Stats st = s.stats();
    CHECK(st.asserted == 3);
    CHECK(st.inferred == 0);
    CHECK(st.distinct_subjects == 2);
    CHECK(st.distinct_predicates == 2);
}

TEST_CASE("dump is deterministic and annotates inferred triples on request") {
    OntologySchema schema;
    schema.data_properties = {"urn:p", "urn:q"};
    schema.subproperty_of = {{"urn:p", "urn:q"}};
    Store s;
    s.insert(Triple(Iri{"urn:s"}, Iri{"urn:p"}, Term{make_literal("1", xsd::integer_dt)}));
    s.materialize(schema);

    std::string dump = s.dump_ntriples();
    CHECK(dump == s.dump_ntriples());
    CHECK(parse_rdf(dump, RdfSyntax::NTriples).size() == 2);

    std::string annotated = s.dump_ntriples(true);
    CHECK(annotated.find("<urn:q> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> . # inferred") !=
          std::string::npos);
}

TEST_CASE("load accepts both syntaxes and merges blank labels apart") {
    Store s;
    CHECK(s.load("<urn:s> <urn:p> <urn:o> .\n", RdfSyntax::NTriples) == 1);
    CHECK(s.load("@prefix ex: <http://example.org/> . ex:a ex:p _:n .", RdfSyntax::Turtle) == 1);
    // same blank label in a second document denotes a fresh node
    CHECK(s.load("_:n <urn:p> <urn:o2> .\n", RdfSyntax::NTriples) == 1);
    std::size_t blanks = 0;
    for (const auto& t : s.match({}))
        if (is_blank(t.subject) || is_blank(t.object)) ++blanks;
    CHECK(blanks == 2);

    // loading identical ground documents twice adds nothing
    Store s2;
    CHECK(s2.load("<urn:s> <urn:p> <urn:o> .\n", RdfSyntax::NTriples) == 1);
    CHECK(s2.load("<urn:s> <urn:p> <urn:o> .\n", RdfSyntax::NTriples) == 0);
}

TEST_CASE("frozen stores reject writes and keep serving reads") {
    Store s;
    s.insert(Triple(Iri{"urn:s"}, Iri{"urn:p"}, Iri{"urn:o"}));
    s.freeze();
    CHECK(s.is_frozen());
    CHECK_THROWS_AS(s.insert(Triple(Iri{"urn:s2"}, Iri{"urn:p"}, Iri{"urn:o"})), StoreFrozen);
    CHECK_THROWS_AS(s.materialize(builtin_roc_schema()), StoreFrozen);
    CHECK(s.match({}).size() == 1);
    s.freeze();  // idempotent
}

TEST_CASE("store pattern streams agree with graph semantics after re-load") {
    Rng rng(99);
    Graph g = random_graph(rng, 40);
    Store s;
    s.insert_graph(g);
    Graph back = parse_rdf(s.dump_ntriples(), RdfSyntax::NTriples);
    CHECK(isomorphic(back, g));
}
