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
#ifndef ROCKB_ONTOLOGY_HPP
#define ROCKB_ONTOLOGY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rockb/rdf.hpp"

namespace rockb {

/// ROC vocabulary namespace and the schema terms the toolkit relies on.
/// The published vocabulary is larger; this is the enumerable core needed
/// for ingestion, inference, and querying.
namespace roc {
inline const std::string ns = "http://qurator-csi.de/ontologies/covid/responses#";
inline const std::string ontology_iri = "http://qurator-csi.de/ontologies/roc";
inline const std::string response_statistics = ns + "ResponseStatistics";
inline const std::string case_statistics = ns + "CaseStatistics";
inline const std::string labour_market_statistics = ns + "LabourMarketStatistics";
inline const std::string country_class = ns + "Country";
inline const std::string of_country = ns + "ofCountry";
inline const std::string date = ns + "date";
inline const std::string period = ns + "period";
// Category super data properties, one per OxCGRT coding branch.
inline const std::string containment_and_closure = ns + "containment_and_closure";
inline const std::string economic_response = ns + "economic_response";
inline const std::string health_systems = ns + "health_systems";
inline const std::string miscellaneous = ns + "miscellaneous";
// Composite index properties published alongside the per-indicator codes.
inline const std::string stringency_index = ns + "stringency_index";
inline const std::string government_response_index = ns + "government_response_index";
inline const std::string containment_health_index = ns + "containment_health_index";
inline const std::string economic_support_index = ns + "economic_support_index";
// Case counts (ECDC-shaped sources) and labour-market indicators (ILO-shaped).
inline const std::string new_cases = ns + "new_cases";
inline const std::string new_deaths = ns + "new_deaths";
inline const std::string unemployment_rate = ns + "unemployment_rate";
inline const std::string working_hours_lost = ns + "working_hours_lost";
// Serialization vocabulary for indicator metadata.
inline const std::string indicator_code = ns + "indicatorCode";
inline const std::string indicator_label = ns + "indicatorLabel";
inline const std::string value_kind = ns + "valueKind";
inline const std::string ordinal_max = ns + "ordinalMax";
inline const std::string has_flag = ns + "hasFlag";
inline const std::string flag_property = ns + "flagProperty";
}  // namespace roc

/// The two CODO terms reused by the ROC schema (the full CODO ontology is
/// not imported).
namespace codo {
inline const std::string ns = "http://www.isibang.ac.in/ns/codo#";
inline const std::string country_wise_statistics = ns + "CountryWiseStatistics";
inline const std::string country_wise_statistics_prop = ns + "countryWiseStatistics";
}  // namespace codo

/// Instance-data namespace.
namespace rocdata {
inline const std::string ns = "http://qurator-csi.de/data/covid/";
inline const std::string country_ns = ns + "country/";
}  // namespace rocdata

struct CyclicHierarchy : Error {
    using Error::Error;
};
struct UnknownProperty : Error {
    explicit UnknownProperty(const std::string& p) : Error("unknown property: " + p) {}
};

enum class ValueKind { Ordinal, Monetary, Count };

struct IndicatorDefinition {
    std::string code;           // e.g. "h2"
    std::string property_iri;   // roc: namespace, code + "_" + label
    char category = '?';        // 'C', 'E', 'H' or 'M'
    std::string label;          // snake-case, e.g. "testing_policy"
    ValueKind kind = ValueKind::Ordinal;
    std::optional<int> ordinal_max;  // present iff kind == Ordinal
    bool has_flag = false;
    std::string flag_property_iri;   // empty unless has_flag

    bool operator==(const IndicatorDefinition&) const = default;
};

/// The ROC schema: class and property hierarchies plus the indicator
/// catalogue. Immutable after construction; all members hold IRI strings.
struct OntologySchema {
    std::set<std::string> classes;
    std::set<std::pair<std::string, std::string>> subclass_of;     // (sub, super)
    std::set<std::string> object_properties;
    std::set<std::string> data_properties;
    std::set<std::pair<std::string, std::string>> subproperty_of;  // (sub, super)
    std::set<std::pair<std::string, std::string>> inverse_of;      // (p, q), one entry per pair
    std::map<std::string, std::string> domains;  // property -> class
    std::map<std::string, std::string> ranges;   // data property -> datatype
    std::vector<IndicatorDefinition> indicators;
    std::map<std::string, std::string> labels;   // annotation only, never enforced

    bool operator==(const OntologySchema&) const = default;

    bool is_property(const std::string& iri) const;

    /// Transitive closure above `property`, excluding the property itself.
    std::set<std::string> super_properties(const std::string& property) const;

    /// Transitive closure above `cls`, excluding the class itself. Unknown
    /// classes yield the empty set (instance data may mention classes the
    /// schema does not declare).
    std::set<std::string> super_classes(const std::string& cls) const;

    const IndicatorDefinition* indicator_by_code(const std::string& code) const;
    const IndicatorDefinition* indicator_by_property(const std::string& iri) const;

    /// Throws CyclicHierarchy when subclass_of or subproperty_of has a cycle.
    void check_acyclic() const;
};

struct Violation {
    Triple triple;
    std::string rule_id;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool conforming() const { return violations.empty(); }
};

/// The bundled ROC schema (also shipped serialized as data/roc-schema.ttl).
const OntologySchema& builtin_roc_schema();

/// Reads a schema from its RDFS/OWL graph form.
OntologySchema load_schema(const Graph& graph);

/// Writes the schema as an RDFS/OWL graph; load_schema(serialize_schema(s))
/// is structurally equal to s.
Graph serialize_schema(const OntologySchema& schema);

/// Spec'd free-function form of OntologySchema::super_properties.
std::set<std::string> super_properties(const OntologySchema& schema, const std::string& property);

/// Checks instance data against the schema:
///   ordinal-range   ordinal indicator value outside [0, ordinal_max]
///   numeric-object  non-numeric object on a numeric data property
///   missing-type    indicator subject not typed (up to subclass closure)
///                   as roc:ResponseStatistics
///   dangling-stats  codo:countryWiseStatistics object with no outgoing
///                   triples
/// Type checking closes asserted rdf:type triples under subclass_of, so the
/// report is the same before and after materialization.
ValidationReport validate_graph(const Graph& graph, const OntologySchema& schema);

}  // namespace rockb

#endif  // ROCKB_ONTOLOGY_HPP
