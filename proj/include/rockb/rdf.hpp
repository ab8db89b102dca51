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
#ifndef ROCKB_RDF_HPP
#define ROCKB_RDF_HPP

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace rockb {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedIri : Error {
    explicit MalformedIri(const std::string& text) : Error("malformed IRI: " + text) {}
};
struct DatatypeMismatch : Error {
    using Error::Error;
};
struct LangConflict : Error {
    using Error::Error;
};
struct NotNumeric : Error {
    using Error::Error;
};
struct InvalidTriple : Error {
    using Error::Error;
};

/// Well-known vocabulary IRIs. Only the datatypes listed here are
/// value-validated; anything else is carried opaquely.
namespace xsd {
inline const std::string string_dt = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string boolean_dt = "http://www.w3.org/2001/XMLSchema#boolean";
inline const std::string integer_dt = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string decimal_dt = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string double_dt = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string date_dt = "http://www.w3.org/2001/XMLSchema#date";
}  // namespace xsd

namespace rdf {
inline const std::string lang_string_dt = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline const std::string type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
}  // namespace rdf

namespace rdfs {
inline const std::string sub_class_of = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline const std::string sub_property_of = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
inline const std::string domain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline const std::string range = "http://www.w3.org/2000/01/rdf-schema#range";
inline const std::string label = "http://www.w3.org/2000/01/rdf-schema#label";
inline const std::string comment = "http://www.w3.org/2000/01/rdf-schema#comment";
}  // namespace rdfs

namespace owl {
inline const std::string class_ = "http://www.w3.org/2002/07/owl#Class";
inline const std::string object_property = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline const std::string datatype_property = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline const std::string inverse_of = "http://www.w3.org/2002/07/owl#inverseOf";
inline const std::string ontology = "http://www.w3.org/2002/07/owl#Ontology";
inline const std::string version_info = "http://www.w3.org/2002/07/owl#versionInfo";
}  // namespace owl

struct BlankNode {
    std::string label;
    auto operator<=>(const BlankNode&) const = default;
};

struct Iri {
    std::string value;
    auto operator<=>(const Iri&) const = default;
};

/// A literal is equal to another literal iff (lexical, datatype, lang) are
/// all equal. "01"^^xsd:integer and "1"^^xsd:integer are distinct terms;
/// numeric_value() treats them as the same number.
struct Literal {
    std::string lexical;
    std::string datatype;
    std::string lang;  // empty unless datatype is rdf:langString

    bool operator==(const Literal&) const = default;
    // Ordered by (datatype, lexical, lang); the deterministic N-Triples
    // dump depends on this key order.
    std::strong_ordering operator<=>(const Literal& o) const {
        if (auto c = datatype <=> o.datatype; c != 0) return c;
        if (auto c = lexical <=> o.lexical; c != 0) return c;
        return lang <=> o.lang;
    }
};

/// Alternative order defines the term-kind order: BlankNode < IRI < Literal.
using Term = std::variant<BlankNode, Iri, Literal>;

enum class Ordering { Less, Equal, Greater };

/// Total order over terms: kind first, then the per-kind key.
Ordering compare_terms(const Term& a, const Term& b);

inline bool is_blank(const Term& t) { return std::holds_alternative<BlankNode>(t); }
inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<Literal>(t); }

/// Validates and wraps an absolute IRI. Throws MalformedIri when the scheme
/// is missing or the text contains whitespace, angle brackets, or other
/// characters that cannot appear in an IRIREF.
Iri make_iri(const std::string& text);

/// True iff make_iri(text) would succeed.
bool is_valid_iri(const std::string& text);

/// Builds a literal, validating the lexical form against the datatype
/// grammar for boolean/integer/decimal/double/date. Throws DatatypeMismatch
/// on grammar failure and LangConflict when the language tag and datatype
/// disagree.
Literal make_literal(const std::string& lexical, const std::string& datatype_iri,
                     const std::string& lang = {});

inline Literal string_literal(const std::string& s) { return Literal{s, xsd::string_dt, {}}; }
inline Literal integer_literal(long long v) { return Literal{std::to_string(v), xsd::integer_dt, {}}; }

/// True when the datatype is one of xsd:integer/decimal/double.
bool is_numeric_datatype(const std::string& datatype_iri);

/// The number denoted by a numeric literal. Throws NotNumeric for
/// non-numeric datatypes or a lexical that does not parse.
double numeric_value(const Literal& l);

struct Triple {
    Term subject;   // IRI or blank node
    Iri predicate;
    Term object;

    Triple(Term s, Iri p, Term o);
    auto operator<=>(const Triple&) const = default;
};

/// A set of triples plus the prefix table captured from / used by the
/// concrete syntaxes. Insertion is idempotent.
class Graph {
public:
    using TripleSet = std::set<Triple>;

    bool insert(const Triple& t) { return triples_.insert(t).second; }
    bool contains(const Triple& t) const { return triples_.count(t) > 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    const TripleSet& triples() const { return triples_; }
    TripleSet::const_iterator begin() const { return triples_.begin(); }
    TripleSet::const_iterator end() const { return triples_.end(); }

    void add_prefix(const std::string& shortname, const std::string& iri);
    const std::map<std::string, std::string>& prefixes() const { return prefixes_; }

    /// All blank node labels occurring in the graph.
    std::set<std::string> blank_labels() const;

    /// RDF merge: triples from `other` are added, renaming any of its blank
    /// node labels that are already in use here.
    void merge(const Graph& other);

private:
    TripleSet triples_;
    std::map<std::string, std::string> prefixes_;
};

/// Structural graph equality up to blank node relabeling. Exact for graphs
/// without blank nodes; uses signature-pruned backtracking otherwise.
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace rockb

#endif  // ROCKB_RDF_HPP
