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

// nullopt entries are missing days, not zero values
TimeSeries make_series(const char* start_iso, const std::vector<std::optional<double>>& values) {
    TimeSeries s;
    long base = Date::parse(start_iso).day_number();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i])
            s.points.emplace_back(Date::from_day_number(base + static_cast<long>(i)), *values[i]);
    return s;
}

Store fixture_store() {
    Store s;
    Table ox = parse_csv(slurp_file(data_file("fixtures/oxcgrt_3x30.csv")));
    s.insert_graph(apply_mapping(ox, preset_mapping(SourcePreset::Oxcgrt)).graph);
    Table ec = parse_csv(slurp_file(data_file("fixtures/ecdc_3x30.csv")));
    s.insert_graph(apply_mapping(ec, preset_mapping(SourcePreset::Ecdc)).graph);
    s.materialize(builtin_roc_schema());
    return s;
}

}  // namespace

TEST_CASE("date arithmetic") {
    CHECK(Date::parse("1970-01-01").day_number() == 0);
    CHECK(Date::parse("1970-01-02").day_number() == 1);
    CHECK(Date::parse("2020-03-01").day_number() - Date::parse("2020-02-28").day_number() == 2);
    CHECK(Date::parse("2020-04-01").iso() == "2020-04-01");
    CHECK(Date::parse("2020-04-01") < Date::parse("2020-04-02"));
    CHECK_THROWS_AS(Date::parse("20200401"), DatatypeMismatch);

    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        long n = pick(rng, -200000, 200000);
        Date d = Date::from_day_number(n);
        CHECK(d.day_number() == n);
    }
    CHECK(Date::from_day_number(Date::parse("2020-04-30").day_number() + 1).iso() == "2020-05-01");
}

TEST_CASE("cq1 answers which countries established a response") {
    Store s = fixture_store();

    auto active = cq1_countries_with_response(s, "h6", 1);
    CHECK(active == std::set<std::string>{country_iri_from_code("DEU"),
                                          country_iri_from_code("JOR")});

    auto everyone = cq1_countries_with_response(s, "h2", 0);
    CHECK(everyone.size() == 3);

    CHECK(cq1_countries_with_response(s, "h2", 99).empty());
    CHECK_THROWS_AS(cq1_countries_with_response(s, "zz9", 1), UnknownIndicator);

    // full property IRIs resolve as well
    CHECK(cq1_countries_with_response(s, roc::ns + "h6_facial_coverings", 1) == active);
}

TEST_CASE("cq1 generated query text parses and carries the filter") {
    std::string q = cq1_query(roc::ns + "h6_facial_coverings", 2);
    CHECK(q.find("FILTER(?value >= 2)") != std::string::npos);
    QueryAst ast = parse_query(q);
    CHECK(ast.distinct);
    CHECK(ast.where.size() == 2);
    CHECK(ast.filters.size() == 1);
}

TEST_CASE("extract_series pulls dated values per country") {
    Store s = fixture_store();
    TimeSeries swe = extract_series(s, country_iri_from_code("SWE"),
                                    roc::ns + "h6_facial_coverings");
    CHECK(swe.points.size() == 30);
    for (const auto& [d, v] : swe.points) CHECK(v == 0);
    CHECK(swe.points.front().first.iso() == "2020-04-01");
    CHECK(swe.points.back().first.iso() == "2020-04-30");
    for (std::size_t i = 1; i < swe.points.size(); ++i)
        CHECK(swe.points[i - 1].first < swe.points[i].first);

    CHECK_THROWS_AS(
        extract_series(s, country_iri_from_code("FIN"), roc::ns + "h6_facial_coverings"), NoData);

    // a duplicate-date record is an integrity error
    Store dup;
    auto add = [&](const char* stats, const char* date) {
        dup.insert(Triple(Iri{country_iri_from_code("XXX")},
                          Iri{codo::country_wise_statistics_prop}, Iri{stats}));
        dup.insert(
            Triple(Iri{stats}, Iri{roc::date}, Term{make_literal(date, xsd::date_dt)}));
        dup.insert(Triple(Iri{stats}, Iri{roc::new_cases},
                          Term{make_literal("1", xsd::integer_dt)}));
    };
    add("urn:stats:1", "2020-04-01");
    add("urn:stats:2", "2020-04-01");
    CHECK_THROWS_AS(extract_series(dup, country_iri_from_code("XXX"), roc::new_cases),
                    DuplicateDate);
}

TEST_CASE("cq2 finds the adoption date and the incidence then") {
    TimeSeries response = make_series("2020-04-01", {{0}, {0}, {2}, {2}});
    TimeSeries cases = make_series("2020-04-01", {{1}, {5}, {20}, {80}});

    auto hit = cq2_incidence_at_adoption(response, cases, 2);
    REQUIRE(hit);
    CHECK(hit->first.iso() == "2020-04-03");
    CHECK(hit->second == 20);

    CHECK_FALSE(cq2_incidence_at_adoption(response, cases, 3).has_value());

    auto first_point = cq2_incidence_at_adoption(make_series("2020-04-01", {{4}}),
                                                 make_series("2020-04-01", {{9}}), 2);
    REQUIRE(first_point);
    CHECK(first_point->second == 9);

    // nearest earlier case point fills a reporting gap
    TimeSeries sparse_cases = make_series("2020-04-01", {{7}, std::nullopt, std::nullopt, {80}});
    auto gap = cq2_incidence_at_adoption(response, sparse_cases, 2);
    REQUIRE(gap);
    CHECK(gap->second == 7);

    // no case data at or before adoption
    TimeSeries late_cases = make_series("2020-04-04", {{80}});
    CHECK_THROWS_AS(cq2_incidence_at_adoption(response, late_cases, 2), NoData);
}

TEST_CASE("cq3 runs: the worked example") {
    TimeSeries s = make_series("2020-04-01", {{0}, {2}, {2}, {0}, {3}});
    auto episodes = cq3_run_lengths(s, 2);
    REQUIRE(episodes.size() == 2);
    CHECK(episodes[0].start.iso() == "2020-04-02");
    CHECK(episodes[0].end.iso() == "2020-04-03");
    CHECK(episodes[1].start.iso() == "2020-04-05");
    CHECK(episodes[1].end.iso() == "2020-04-05");
}

TEST_CASE("cq3 corner cases") {
    CHECK(cq3_run_lengths(make_series("2020-04-01", {{0}, {0}, {0}}), 1).empty());

    std::vector<std::optional<double>> month(30, 2.0);
    auto episodes = cq3_run_lengths(make_series("2020-04-01", month), 1);
    REQUIRE(episodes.size() == 1);
    CHECK(episodes[0].start.iso() == "2020-04-01");
    CHECK(episodes[0].end.iso() == "2020-04-30");

    // a missing day breaks the run even when both sides qualify
    auto gapped = cq3_run_lengths(make_series("2020-04-01", {{2}, std::nullopt, {2}}), 1);
    REQUIRE(gapped.size() == 2);
    CHECK(gapped[0].end.iso() == "2020-04-01");
    CHECK(gapped[1].start.iso() == "2020-04-03");
}

TEST_CASE("cq3 episodes cover exactly the qualifying dates (property)") {
    Rng rng(20260807);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::optional<double>> values;
        int n = pick(rng, 0, 40);
        for (int i = 0; i < n; ++i) {
            if (chance(rng, 0.2)) values.push_back(std::nullopt);
            else values.push_back(static_cast<double>(pick(rng, 0, 4)));
        }
        TimeSeries s = make_series("2020-03-01", values);
        double level = pick(rng, 1, 4);
        auto episodes = cq3_run_lengths(s, level);

        std::set<long> covered;
        for (const auto& e : episodes) {
            CHECK(e.start <= e.end);
            for (long d = e.start.day_number(); d <= e.end.day_number(); ++d) {
                CHECK(covered.insert(d).second);  // disjoint
            }
        }
        std::set<long> qualifying;
        std::set<long> present;
        for (const auto& [d, v] : s.points) {
            present.insert(d.day_number());
            if (v >= level) qualifying.insert(d.day_number());
        }
        // every covered day is a present, qualifying day; and vice versa
        for (long d : covered) CHECK(qualifying.count(d) == 1);
        for (long d : qualifying) CHECK(covered.count(d) == 1);
        // episodes ordered and maximal (no two adjacent episodes touch)
        for (std::size_t i = 1; i < episodes.size(); ++i)
            CHECK(episodes[i].start.day_number() > episodes[i - 1].end.day_number() + 1);
    }
}

TEST_CASE("cq5 finds an exact lagged linear relationship") {
    Rng rng(20260808);
    std::vector<std::optional<double>> response_values;
    for (int i = 0; i < 20; ++i)
        response_values.push_back(static_cast<double>(pick(rng, 0, 9)));

    TimeSeries response = make_series("2020-04-01", response_values);
    TimeSeries outcome;
    for (const auto& [d, v] : response.points)
        outcome.points.emplace_back(Date::from_day_number(d.day_number() + 3), 2 * v);

    Cq5Result r = cq5_lagged_correlation(response, outcome, 7);
    CHECK(r.best_lag == 3);
    REQUIRE(r.lags[3].r.has_value());
    CHECK(*r.lags[3].r == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cq5 degenerate inputs") {
    TimeSeries constant = make_series("2020-04-01", {{2}, {2}, {2}, {2}, {2}});
    TimeSeries outcome = make_series("2020-04-01", {{1}, {3}, {2}, {5}, {4}});
    CHECK_THROWS_AS(cq5_lagged_correlation(constant, outcome, 2), InsufficientOverlap);

    TimeSeries anti = make_series("2020-04-01", {{-1}, {-3}, {-2}, {-5}, {-4}});
    Cq5Result r = cq5_lagged_correlation(outcome, anti, 0);
    REQUIRE(r.lags[0].r.has_value());
    CHECK(*r.lags[0].r == doctest::Approx(-1.0).epsilon(1e-9));

    TimeSeries disjoint = make_series("2021-01-01", {{1}, {2}, {3}});
    CHECK_THROWS_AS(cq5_lagged_correlation(outcome, disjoint, 2), InsufficientOverlap);
}

TEST_CASE("pearson r stays in [-1,1] and is affine-invariant (property)") {
    Rng rng(20260809);
    for (int round = 0; round < 40; ++round) {
        std::vector<std::optional<double>> rv, ov;
        int n = pick(rng, 5, 25);
        for (int i = 0; i < n; ++i) {
            rv.push_back(static_cast<double>(pick(rng, 0, 50)));
            ov.push_back(static_cast<double>(pick(rng, 0, 50)));
        }
        TimeSeries response = make_series("2020-04-01", rv);
        TimeSeries outcome = make_series("2020-04-01", ov);
        Cq5Result base;
        try {
            base = cq5_lagged_correlation(response, outcome, 5);
        } catch (const InsufficientOverlap&) {
            continue;
        }
        for (const auto& lc : base.lags)
            if (lc.r) CHECK(std::fabs(*lc.r) <= 1.0 + 1e-12);

        // positive affine transforms leave r unchanged
        TimeSeries scaled = outcome;
        for (auto& [d, v] : scaled.points) v = 3.5 * v + 11;
        TimeSeries scaled_resp = response;
        for (auto& [d, v] : scaled_resp.points) v = 0.25 * v - 2;
        Cq5Result transformed = cq5_lagged_correlation(scaled_resp, scaled, 5);
        for (std::size_t lag = 0; lag < base.lags.size(); ++lag) {
            CHECK(base.lags[lag].r.has_value() == transformed.lags[lag].r.has_value());
            if (base.lags[lag].r)
                CHECK(*transformed.lags[lag].r ==
                      doctest::Approx(*base.lags[lag].r).epsilon(1e-9));
        }
    }
}

TEST_CASE("growth rate uses consecutive days with nonzero base") {
    TimeSeries s = make_series("2020-04-01", {{10}, {15}, std::nullopt, {20}, {0}, {7}});
    TimeSeries g = growth_rate(s);
    // day2: (15-10)/10; day4 skipped (gap); day5: (0-20)/20; day6 skipped (base 0)
    REQUIRE(g.points.size() == 2);
    CHECK(g.points[0].first.iso() == "2020-04-02");
    CHECK(g.points[0].second == doctest::Approx(0.5));
    CHECK(g.points[1].first.iso() == "2020-04-05");
    CHECK(g.points[1].second == doctest::Approx(-1.0));
}

TEST_CASE("fixture cases correlate with facial coverings at lag 3 (raw mode)") {
    Store s = fixture_store();
    TimeSeries h6 = extract_series(s, country_iri_from_code("DEU"),
                                   roc::ns + "h6_facial_coverings");
    TimeSeries cases = extract_series(s, country_iri_from_code("DEU"), roc::new_cases);
    Cq5Result r = cq5_lagged_correlation(h6, cases, 7);
    CHECK(r.best_lag == 3);
    CHECK(*r.lags[3].r == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("peak_from scans at-or-after the date") {
    TimeSeries cases = make_series("2020-04-01", {{5}, {9}, {3}, {12}, {4}});
    CHECK(*peak_from(cases, Date::parse("2020-04-03")) == 12);
    CHECK(*peak_from(cases, Date::parse("2020-04-05")) == 4);
    CHECK_FALSE(peak_from(cases, Date::parse("2020-05-01")).has_value());
}
