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
#include "rockb/cq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "rockb/sparql.hpp"

namespace rockb {

Date Date::parse(const std::string& iso) {
    Literal l = make_literal(iso, xsd::date_dt);  // reuse the grammar check
    Date d;
    d.year = std::stoi(iso.substr(0, 4));
    d.month = std::stoi(iso.substr(5, 2));
    d.day = std::stoi(iso.substr(8, 2));
    return d;
}

long Date::day_number() const {
    // Days-from-civil (proleptic Gregorian), era-based formulation.
    int y = year - (month <= 2);
    long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = static_cast<unsigned>((153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1);
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date Date::from_day_number(long days) {
    long z = days + 719468;
    long era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    long y = static_cast<long>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

const IndicatorDefinition& resolve_indicator(const OntologySchema& schema,
                                             const std::string& code_or_iri) {
    if (const auto* d = schema.indicator_by_code(code_or_iri)) return *d;
    if (const auto* d = schema.indicator_by_property(code_or_iri)) return *d;
    throw UnknownIndicator(code_or_iri);
}

namespace {

std::string number_text(double v) {
    if (std::floor(v) == v && std::fabs(v) < 9e15)
        return std::to_string(static_cast<long long>(v));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string cq1_query(const std::string& indicator_property, double min_level) {
    return "SELECT DISTINCT ?country WHERE {\n"
           "  ?country <" + codo::country_wise_statistics_prop + "> ?stats .\n"
           "  ?stats <" + indicator_property + "> ?value .\n"
           "  FILTER(?value >= " + number_text(min_level) + ")\n"
           "}\n";
}

std::set<std::string> cq1_countries_with_response(const Store& store,
                                                  const std::string& indicator_code_or_iri,
                                                  double min_level,
                                                  const OntologySchema& schema) {
    const IndicatorDefinition& ind = resolve_indicator(schema, indicator_code_or_iri);
    SolutionTable table = evaluate(parse_query(cq1_query(ind.property_iri, min_level)), store);
    std::set<std::string> out;
    for (const auto& row : table.rows)
        if (row[0] && is_iri(*row[0])) out.insert(std::get<Iri>(*row[0]).value);
    return out;
}

TimeSeries extract_series(const Store& store, const std::string& country_iri,
                          const std::string& property_iri) {
    TimeSeries series;
    series.country_iri = country_iri;
    series.property_iri = property_iri;

    std::map<Date, double> by_date;
    TriplePattern link;
    link.s = Term{Iri{country_iri}};
    link.p = Term{Iri{codo::country_wise_statistics_prop}};
    for (const auto& t : store.match(link)) {
        // Each statistics node contributes its dated property values.
        TriplePattern date_pat{t.object, Term{Iri{roc::date}}, std::nullopt};
        TriplePattern value_pat{t.object, Term{Iri{property_iri}}, std::nullopt};
        auto dates = store.match(date_pat);
        auto values = store.match(value_pat);
        if (dates.empty() || values.empty()) continue;
        for (const auto& dt : dates) {
            auto* dlit = std::get_if<Literal>(&dt.object);
            if (!dlit || dlit->datatype != xsd::date_dt) continue;
            Date d = Date::parse(dlit->lexical);
            for (const auto& vt : values) {
                auto* vlit = std::get_if<Literal>(&vt.object);
                if (!vlit || !is_numeric_datatype(vlit->datatype)) continue;
                double v = numeric_value(*vlit);
                if (!std::isfinite(v)) continue;
                auto [it, fresh] = by_date.emplace(d, v);
                if (!fresh) throw DuplicateDate(d.iso());
            }
        }
    }
    if (by_date.empty())
        throw NoData("no dated values of <" + property_iri + "> for <" + country_iri + ">");
    series.points.assign(by_date.begin(), by_date.end());
    return series;
}

std::optional<std::pair<Date, double>> cq2_incidence_at_adoption(const TimeSeries& response,
                                                                 const TimeSeries& cases,
                                                                 double level) {
    const std::pair<Date, double>* adoption = nullptr;
    for (const auto& p : response.points) {
        if (p.second >= level) {
            adoption = &p;
            break;
        }
    }
    if (!adoption) return std::nullopt;

    // Case value on the adoption date, else the nearest earlier point.
    const std::pair<Date, double>* best = nullptr;
    for (const auto& p : cases.points) {
        if (p.first > adoption->first) break;
        best = &p;
    }
    if (!best)
        throw NoData("no case observation at or before " + adoption->first.iso());
    return std::make_pair(adoption->first, best->second);
}

std::vector<Episode> cq3_run_lengths(const TimeSeries& series, double level) {
    std::vector<Episode> episodes;
    std::optional<Episode> current;
    auto flush = [&] {
        if (current) episodes.push_back(*current);
        current.reset();
    };
    for (const auto& [date, value] : series.points) {
        if (value < level) {
            flush();
            continue;
        }
        if (current && date.day_number() == current->end.day_number() + 1) {
            current->end = date;
        } else {
            flush();
            current = Episode{date, date, level};
        }
    }
    flush();
    return episodes;
}

Cq5Result cq5_lagged_correlation(const TimeSeries& response, const TimeSeries& outcome,
                                 int max_lag) {
    std::map<long, double> resp, out;
    for (const auto& p : response.points) resp[p.first.day_number()] = p.second;
    for (const auto& p : outcome.points) out[p.first.day_number()] = p.second;

    Cq5Result result;
    std::optional<double> best_abs;
    for (int lag = 0; lag <= max_lag; ++lag) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [day, rv] : resp) {
            auto it = out.find(day + lag);
            if (it != out.end()) pairs.emplace_back(rv, it->second);
        }
        LagCorrelation lc;
        lc.lag = lag;
        if (pairs.size() >= 3) {
            double n = static_cast<double>(pairs.size());
            double sx = 0, sy = 0;
            for (const auto& [x, y] : pairs) {
                sx += x;
                sy += y;
            }
            double mx = sx / n, my = sy / n;
            double sxx = 0, syy = 0, sxy = 0;
            for (const auto& [x, y] : pairs) {
                sxx += (x - mx) * (x - mx);
                syy += (y - my) * (y - my);
                sxy += (x - mx) * (y - my);
            }
            if (sxx > 0 && syy > 0) lc.r = sxy / std::sqrt(sxx * syy);
        }
        if (lc.r) {
            double a = std::fabs(*lc.r);
            if (!best_abs || a > *best_abs) {
                best_abs = a;
                result.best_lag = lag;
            }
        }
        result.lags.push_back(lc);
    }
    if (!best_abs) throw InsufficientOverlap();
    return result;
}

TimeSeries growth_rate(const TimeSeries& series) {
    TimeSeries g;
    g.country_iri = series.country_iri;
    g.property_iri = series.property_iri;
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const auto& prev = series.points[i - 1];
        const auto& cur = series.points[i];
        if (cur.first.day_number() != prev.first.day_number() + 1) continue;
        if (prev.second == 0) continue;
        g.points.emplace_back(cur.first, (cur.second - prev.second) / prev.second);
    }
    return g;
}

std::optional<double> peak_from(const TimeSeries& series, const Date& from) {
    std::optional<double> best;
    for (const auto& p : series.points)
        if (!(p.first < from))
            if (!best || p.second > *best) best = p.second;
    return best;
}

}  // namespace rockb
