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
#include "rockb/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>

namespace rockb {

namespace {

using Edges = std::set<std::pair<std::string, std::string>>;

std::set<std::string> closure_above(const Edges& edges, const std::string& start) {
    std::set<std::string> out;
    std::deque<std::string> frontier{start};
    while (!frontier.empty()) {
        std::string cur = frontier.front();
        frontier.pop_front();
        for (const auto& [sub, super] : edges) {
            if (sub != cur) continue;
            if (out.insert(super).second) frontier.push_back(super);
        }
    }
    out.erase(start);
    return out;
}

void check_relation_acyclic(const Edges& edges, const char* what) {
    std::set<std::string> nodes;
    for (const auto& [a, b] : edges) {
        nodes.insert(a);
        nodes.insert(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<std::string, int> state;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        state[n] = 1;
        for (const auto& [a, b] : edges) {
            if (a != n) continue;
            int s = state[b];
            if (s == 1)
                throw CyclicHierarchy(std::string(what) + " hierarchy contains a cycle through " + b);
            if (s == 0) visit(b);
        }
        state[n] = 2;
    };
    for (const auto& n : nodes)
        if (state[n] == 0) visit(n);
}

std::string title_label(const std::string& snake) {
    std::string out;
    bool first = true;
    for (char c : snake) {
        if (c == '_') {
            out.push_back(' ');
            first = false;
        } else if (first) {
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            first = false;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

const std::string& category_property(char category) {
    switch (category) {
        case 'C': return roc::containment_and_closure;
        case 'E': return roc::economic_response;
        case 'H': return roc::health_systems;
        default: return roc::miscellaneous;
    }
}

struct IndicatorRow {
    const char* code;
    const char* label;
    int ordinal_max;  // -1: not ordinal
    ValueKind kind;
    bool flag;
};

// Ordinal ranges and flag availability frozen from the OxCGRT codebook
// (containment/economic/health/miscellaneous coding, version 3).
constexpr IndicatorRow kIndicators[] = {
    {"c1", "school_closing", 3, ValueKind::Ordinal, true},
    {"c2", "workplace_closing", 3, ValueKind::Ordinal, true},
    {"c3", "cancel_public_events", 2, ValueKind::Ordinal, true},
    {"c4", "restrictions_on_gatherings", 4, ValueKind::Ordinal, true},
    {"c5", "close_public_transport", 2, ValueKind::Ordinal, true},
    {"c6", "stay_at_home_requirements", 3, ValueKind::Ordinal, true},
    {"c7", "restrictions_on_internal_movement", 2, ValueKind::Ordinal, true},
    {"c8", "international_travel_controls", 4, ValueKind::Ordinal, false},
    {"e1", "income_support", 2, ValueKind::Ordinal, true},
    {"e2", "debt_contract_relief", 2, ValueKind::Ordinal, false},
    {"e3", "fiscal_measures", -1, ValueKind::Monetary, false},
    {"e4", "international_support", -1, ValueKind::Monetary, false},
    {"h1", "public_information_campaigns", 2, ValueKind::Ordinal, true},
    {"h2", "testing_policy", 3, ValueKind::Ordinal, false},
    {"h3", "contact_tracing", 2, ValueKind::Ordinal, false},
    {"h4", "emergency_investment_in_healthcare", -1, ValueKind::Monetary, false},
    {"h5", "investment_in_vaccines", -1, ValueKind::Monetary, false},
    {"h6", "facial_coverings", 4, ValueKind::Ordinal, true},
    {"m1", "wildcard", -1, ValueKind::Count, false},
};

OntologySchema build_roc_schema() {
    OntologySchema s;

    s.classes = {roc::country_class, roc::response_statistics, roc::case_statistics,
                 roc::labour_market_statistics, codo::country_wise_statistics};
    s.subclass_of = {{roc::response_statistics, codo::country_wise_statistics},
                     {roc::case_statistics, codo::country_wise_statistics},
                     {roc::labour_market_statistics, codo::country_wise_statistics}};
    s.labels[roc::country_class] = "Country";
    s.labels[roc::response_statistics] = "Response statistics";
    s.labels[roc::case_statistics] = "Case statistics";
    s.labels[roc::labour_market_statistics] = "Labour market statistics";
    s.labels[codo::country_wise_statistics] = "Country-wise statistics";

    s.object_properties = {codo::country_wise_statistics_prop, roc::of_country};
    s.inverse_of = {{codo::country_wise_statistics_prop, roc::of_country}};
    s.domains[codo::country_wise_statistics_prop] = roc::country_class;
    s.domains[roc::of_country] = codo::country_wise_statistics;
    s.labels[codo::country_wise_statistics_prop] = "Country-wise statistics";
    s.labels[roc::of_country] = "Of country";

    auto add_data_property = [&](const std::string& iri, const std::string& domain,
                                 const std::string& range, const std::string& label) {
        s.data_properties.insert(iri);
        s.domains[iri] = domain;
        s.ranges[iri] = range;
        s.labels[iri] = label;
    };

    for (const char* cat : {"C", "E", "H", "M"}) {
        const std::string& p = category_property(cat[0]);
        s.data_properties.insert(p);
        s.domains[p] = roc::response_statistics;
    }
    s.labels[roc::containment_and_closure] = "Containment and closure";
    s.labels[roc::economic_response] = "Economic response";
    s.labels[roc::health_systems] = "Health systems";
    s.labels[roc::miscellaneous] = "Miscellaneous";

    for (const auto& row : kIndicators) {
        IndicatorDefinition def;
        def.code = row.code;
        def.label = row.label;
        def.category = static_cast<char>(std::toupper(static_cast<unsigned char>(row.code[0])));
        def.property_iri = roc::ns + def.code + "_" + def.label;
        def.kind = row.kind;
        if (row.ordinal_max >= 0) def.ordinal_max = row.ordinal_max;
        def.has_flag = row.flag;

        const std::string range =
            row.kind == ValueKind::Monetary ? xsd::decimal_dt : xsd::integer_dt;
        add_data_property(def.property_iri, roc::response_statistics, range, title_label(def.label));
        s.subproperty_of.insert({def.property_iri, category_property(def.category)});

        if (def.has_flag) {
            def.flag_property_iri = roc::ns + def.code + "_flag";
            add_data_property(def.flag_property_iri, roc::response_statistics, xsd::integer_dt,
                              title_label(def.code + std::string("_flag")));
        }
        s.indicators.push_back(std::move(def));
    }

    for (const std::string& p : {roc::stringency_index, roc::government_response_index,
                                 roc::containment_health_index, roc::economic_support_index})
        add_data_property(p, roc::response_statistics, xsd::decimal_dt,
                          title_label(p.substr(roc::ns.size())));

    add_data_property(roc::new_cases, roc::case_statistics, xsd::integer_dt, "New cases");
    add_data_property(roc::new_deaths, roc::case_statistics, xsd::integer_dt, "New deaths");
    add_data_property(roc::unemployment_rate, roc::labour_market_statistics, xsd::decimal_dt,
                      "Unemployment rate");
    add_data_property(roc::working_hours_lost, roc::labour_market_statistics, xsd::decimal_dt,
                      "Working hours lost");
    add_data_property(roc::date, codo::country_wise_statistics, xsd::date_dt, "Date");
    add_data_property(roc::period, roc::labour_market_statistics, xsd::string_dt, "Period");

    s.check_acyclic();
    return s;
}

}  // namespace

const OntologySchema& builtin_roc_schema() {
    static const OntologySchema schema = build_roc_schema();
    return schema;
}

bool OntologySchema::is_property(const std::string& iri) const {
    if (object_properties.count(iri) || data_properties.count(iri)) return true;
    for (const auto& [sub, super] : subproperty_of)
        if (sub == iri || super == iri) return true;
    return false;
}

std::set<std::string> OntologySchema::super_properties(const std::string& property) const {
    if (!is_property(property)) throw UnknownProperty(property);
    return closure_above(subproperty_of, property);
}

std::set<std::string> OntologySchema::super_classes(const std::string& cls) const {
    return closure_above(subclass_of, cls);
}

const IndicatorDefinition* OntologySchema::indicator_by_code(const std::string& code) const {
    for (const auto& d : indicators)
        if (d.code == code) return &d;
    return nullptr;
}

const IndicatorDefinition* OntologySchema::indicator_by_property(const std::string& iri) const {
    for (const auto& d : indicators)
        if (d.property_iri == iri) return &d;
    return nullptr;
}

void OntologySchema::check_acyclic() const {
    check_relation_acyclic(subclass_of, "subclass");
    check_relation_acyclic(subproperty_of, "subproperty");
}

std::set<std::string> super_properties(const OntologySchema& schema, const std::string& property) {
    return schema.super_properties(property);
}

Graph serialize_schema(const OntologySchema& schema) {
    Graph g;
    g.add_prefix("roc", roc::ns);
    g.add_prefix("codo", codo::ns);
    g.add_prefix("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
    g.add_prefix("rdfs", "http://www.w3.org/2000/01/rdf-schema#");
    g.add_prefix("owl", "http://www.w3.org/2002/07/owl#");
    g.add_prefix("xsd", "http://www.w3.org/2001/XMLSchema#");

    auto iri = [](const std::string& v) { return Iri{v}; };
    auto add = [&](const std::string& s, const std::string& p, Term o) {
        g.insert(Triple(iri(s), iri(p), std::move(o)));
    };

    add(roc::ontology_iri, rdf::type, iri(owl::ontology));
    add(roc::ontology_iri, owl::version_info, string_literal("1.0"));
    add(roc::ontology_iri, rdfs::comment,
        string_literal("Enumerable core of the ROC country-response vocabulary "
                       "used by this toolkit."));

    for (const auto& c : schema.classes) add(c, rdf::type, iri(owl::class_));
    for (const auto& [sub, super] : schema.subclass_of) add(sub, rdfs::sub_class_of, iri(super));
    for (const auto& p : schema.object_properties) add(p, rdf::type, iri(owl::object_property));
    for (const auto& p : schema.data_properties) add(p, rdf::type, iri(owl::datatype_property));
    for (const auto& [sub, super] : schema.subproperty_of)
        add(sub, rdfs::sub_property_of, iri(super));
    for (const auto& [p, q] : schema.inverse_of) add(p, owl::inverse_of, iri(q));
    for (const auto& [p, c] : schema.domains) add(p, rdfs::domain, iri(c));
    for (const auto& [p, dt] : schema.ranges) add(p, rdfs::range, iri(dt));
    for (const auto& [term, label] : schema.labels) add(term, rdfs::label, string_literal(label));

    for (const auto& d : schema.indicators) {
        add(d.property_iri, roc::indicator_code, string_literal(d.code));
        add(d.property_iri, roc::indicator_label, string_literal(d.label));
        const char* kind = d.kind == ValueKind::Ordinal ? "ordinal"
                           : d.kind == ValueKind::Monetary ? "monetary"
                                                           : "count";
        add(d.property_iri, roc::value_kind, string_literal(kind));
        if (d.ordinal_max) add(d.property_iri, roc::ordinal_max, integer_literal(*d.ordinal_max));
        add(d.property_iri, roc::has_flag,
            Literal{d.has_flag ? "true" : "false", xsd::boolean_dt, {}});
        if (d.has_flag) add(d.property_iri, roc::flag_property, iri(d.flag_property_iri));
    }
    return g;
}

OntologySchema load_schema(const Graph& graph) {
    OntologySchema s;
    struct Meta {
        std::string code, label, kind;
        std::optional<int> max;
        bool flag = false;
        std::string flag_iri;
    };
    std::map<std::string, Meta> meta;
    std::map<std::string, std::string> pending_labels;

    for (const auto& t : graph.triples()) {
        auto* subj = std::get_if<Iri>(&t.subject);
        if (!subj) continue;
        const std::string& p = t.predicate.value;
        auto* obj_iri = std::get_if<Iri>(&t.object);
        auto* obj_lit = std::get_if<Literal>(&t.object);

        if (p == rdf::type && obj_iri) {
            if (obj_iri->value == owl::class_) s.classes.insert(subj->value);
            else if (obj_iri->value == owl::object_property) s.object_properties.insert(subj->value);
            else if (obj_iri->value == owl::datatype_property) s.data_properties.insert(subj->value);
        } else if (p == rdfs::sub_class_of && obj_iri) {
            s.subclass_of.insert({subj->value, obj_iri->value});
        } else if (p == rdfs::sub_property_of && obj_iri) {
            s.subproperty_of.insert({subj->value, obj_iri->value});
        } else if (p == owl::inverse_of && obj_iri) {
            s.inverse_of.insert({subj->value, obj_iri->value});
        } else if (p == rdfs::domain && obj_iri) {
            s.domains[subj->value] = obj_iri->value;
        } else if (p == rdfs::range && obj_iri) {
            s.ranges[subj->value] = obj_iri->value;
        } else if (p == rdfs::label && obj_lit) {
            pending_labels[subj->value] = obj_lit->lexical;
        } else if (p == roc::indicator_code && obj_lit) {
            meta[subj->value].code = obj_lit->lexical;
        } else if (p == roc::indicator_label && obj_lit) {
            meta[subj->value].label = obj_lit->lexical;
        } else if (p == roc::value_kind && obj_lit) {
            meta[subj->value].kind = obj_lit->lexical;
        } else if (p == roc::ordinal_max && obj_lit) {
            meta[subj->value].max = std::stoi(obj_lit->lexical);
        } else if (p == roc::has_flag && obj_lit) {
            meta[subj->value].flag = obj_lit->lexical == "true" || obj_lit->lexical == "1";
        } else if (p == roc::flag_property && obj_iri) {
            meta[subj->value].flag_iri = obj_iri->value;
        }
    }

    for (const auto& [term, label] : pending_labels)
        if (s.classes.count(term) || s.object_properties.count(term) ||
            s.data_properties.count(term))
            s.labels[term] = label;

    for (const auto& [prop, m] : meta) {
        if (m.code.empty()) continue;
        IndicatorDefinition d;
        d.code = m.code;
        d.property_iri = prop;
        d.category = static_cast<char>(std::toupper(static_cast<unsigned char>(m.code[0])));
        d.label = m.label;
        d.kind = m.kind == "monetary" ? ValueKind::Monetary
                 : m.kind == "count" ? ValueKind::Count
                                     : ValueKind::Ordinal;
        d.ordinal_max = m.max;
        d.has_flag = m.flag;
        d.flag_property_iri = m.flag_iri;
        s.indicators.push_back(std::move(d));
    }
    std::sort(s.indicators.begin(), s.indicators.end(),
              [](const IndicatorDefinition& a, const IndicatorDefinition& b) {
                  return a.code < b.code;
              });

    s.check_acyclic();
    return s;
}

ValidationReport validate_graph(const Graph& graph, const OntologySchema& schema) {
    ValidationReport report;

    // Asserted types per subject, for the missing-type rule.
    std::map<Term, std::set<std::string>> types;
    for (const auto& t : graph.triples()) {
        if (t.predicate.value != rdf::type) continue;
        if (auto* c = std::get_if<Iri>(&t.object)) {
            types[t.subject].insert(c->value);
            for (const auto& super : schema.super_classes(c->value))
                types[t.subject].insert(super);
        }
    }

    auto is_numeric_object = [](const Term& o) {
        auto* l = std::get_if<Literal>(&o);
        if (!l || !is_numeric_datatype(l->datatype)) return false;
        try {
            numeric_value(*l);
        } catch (const NotNumeric&) {
            return false;
        }
        return true;
    };

    std::set<Term> link_objects;
    std::set<Term> subjects;
    for (const auto& t : graph.triples()) subjects.insert(t.subject);

    for (const auto& t : graph.triples()) {
        const std::string& p = t.predicate.value;
        const IndicatorDefinition* ind = schema.indicator_by_property(p);

        auto range_it = schema.ranges.find(p);
        bool numeric_property =
            range_it != schema.ranges.end() && is_numeric_datatype(range_it->second);

        if (numeric_property && !is_numeric_object(t.object)) {
            report.violations.push_back(
                {t, "numeric-object",
                 "non-numeric object on numeric data property <" + p + ">"});
        } else if (ind && ind->kind == ValueKind::Ordinal && ind->ordinal_max) {
            double v = numeric_value(std::get<Literal>(t.object));
            if (v < 0 || v > *ind->ordinal_max)
                report.violations.push_back(
                    {t, "ordinal-range",
                     "ordinal value " + std::get<Literal>(t.object).lexical + " outside [0, " +
                         std::to_string(*ind->ordinal_max) + "] for " + ind->code});
        }

        if (ind) {
            auto it = types.find(t.subject);
            bool typed = it != types.end() && it->second.count(roc::response_statistics);
            if (!typed)
                report.violations.push_back(
                    {t, "missing-type",
                     "indicator subject lacks rdf:type <" + roc::response_statistics + ">"});
        }

        if (p == codo::country_wise_statistics_prop) {
            if (!is_literal(t.object) && !subjects.count(t.object))
                report.violations.push_back(
                    {t, "dangling-stats",
                     "countryWiseStatistics object has no description in the graph"});
        }
    }
    return report;
}

}  // namespace rockb
