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
#ifndef ROCKB_CQ_HPP
#define ROCKB_CQ_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rockb/ontology.hpp"
#include "rockb/store.hpp"

namespace rockb {

struct NoData : Error {
    using Error::Error;
};
struct DuplicateDate : Error {
    explicit DuplicateDate(const std::string& d) : Error("duplicate observations for date " + d) {}
};
struct InsufficientOverlap : Error {
    InsufficientOverlap() : Error("no lag has three or more overlapping points") {}
};
struct UnknownIndicator : Error {
    explicit UnknownIndicator(const std::string& i) : Error("unknown indicator: " + i) {}
};

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static Date parse(const std::string& iso);  // strict YYYY-MM-DD
    static Date from_day_number(long days);     // inverse of day_number
    long day_number() const;                    // days since 1970-01-01
    std::string iso() const;
    auto operator<=>(const Date&) const = default;
};

/// Per-country, date-indexed numeric series extracted from the KB. Dates
/// strictly increase; values are finite.
struct TimeSeries {
    std::string country_iri;
    std::string property_iri;
    std::vector<std::pair<Date, double>> points;
};

/// Maximal consecutive-date run with value >= level.
struct Episode {
    Date start;
    Date end;  // inclusive
    double level = 0;

    bool operator==(const Episode&) const = default;
};

/// Resolves an indicator given as a short code ("h6") or a property IRI.
/// Throws UnknownIndicator.
const IndicatorDefinition& resolve_indicator(const OntologySchema& schema,
                                             const std::string& code_or_iri);

inline std::string country_iri_from_code(const std::string& code) {
    return rocdata::country_ns + code;
}

/// The SPARQL text behind cq1 (printed by the CLI with --show-query).
std::string cq1_query(const std::string& indicator_property, double min_level);

/// Countries having at least one statistics record with the indicator at or
/// above min_level; evaluated through the generated SPARQL query.
std::set<std::string> cq1_countries_with_response(const Store& store,
                                                  const std::string& indicator_code_or_iri,
                                                  double min_level,
                                                  const OntologySchema& schema = builtin_roc_schema());

/// One point per dated statistics record of the country binding the
/// property, sorted by date. Non-numeric and non-finite values are skipped.
/// Throws NoData when nothing remains and DuplicateDate when two records
/// carry the same date.
TimeSeries extract_series(const Store& store, const std::string& country_iri,
                          const std::string& property_iri);

/// First date the response reaches `level`, with the case value on that
/// date (or the nearest earlier case point). nullopt when the level is
/// never reached; NoData when no case observation exists at or before the
/// adoption date.
std::optional<std::pair<Date, double>> cq2_incidence_at_adoption(const TimeSeries& response,
                                                                 const TimeSeries& cases,
                                                                 double level);

/// Maximal consecutive-date runs with value >= level; a missing day breaks
/// the run.
std::vector<Episode> cq3_run_lengths(const TimeSeries& series, double level);

struct LagCorrelation {
    int lag = 0;
    std::optional<double> r;  // unset: <3 overlaps or zero variance
};

struct Cq5Result {
    std::vector<LagCorrelation> lags;  // lag 0..max_lag
    int best_lag = 0;                  // maximal |r| among defined lags
};

/// Pearson correlation between response(t) and outcome(t+k) for each lag
/// k in 0..max_lag; the max-|r| lag estimates the effect delay. Throws
/// InsufficientOverlap when no lag qualifies.
Cq5Result cq5_lagged_correlation(const TimeSeries& response, const TimeSeries& outcome,
                                 int max_lag);

/// Day-over-day relative change, defined on consecutive-date pairs with a
/// nonzero previous value.
TimeSeries growth_rate(const TimeSeries& series);

/// Largest value at or after `from`; nullopt when no such point exists.
std::optional<double> peak_from(const TimeSeries& series, const Date& from);

}  // namespace rockb

#endif  // ROCKB_CQ_HPP
