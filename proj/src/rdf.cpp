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
#include "rockb/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

namespace rockb {

namespace {

bool is_scheme_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_scheme_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '.' || c == '-';
}

// Characters that cannot occur raw inside an IRIREF.
bool is_forbidden_iri_char(unsigned char c) {
    if (c <= 0x20) return true;  // controls and space
    switch (c) {
        case '<': case '>': case '"': case '\\':
        case '{': case '}': case '|': case '^': case '`':
            return true;
        default:
            return false;
    }
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

std::string_view strip_sign(std::string_view s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
    return s;
}

bool valid_integer(std::string_view s) { return all_digits(strip_sign(s)); }

// XSD decimal: optional sign, digits with at most one dot, at least one digit.
bool valid_decimal(std::string_view s) {
    s = strip_sign(s);
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return all_digits(s);
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return false;
    return (ip.empty() || all_digits(ip)) && (fp.empty() || all_digits(fp));
}

bool valid_double(std::string_view s) {
    if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
    auto e = s.find_first_of("eE");
    if (e == std::string_view::npos) return valid_decimal(s);
    return valid_decimal(s.substr(0, e)) && valid_integer(s.substr(e + 1));
}

bool valid_boolean(std::string_view s) {
    return s == "true" || s == "false" || s == "1" || s == "0";
}

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

// XSD date without timezone: [-]YYYY-MM-DD with calendar validity.
bool valid_date(std::string_view s) {
    if (!s.empty() && s[0] == '-') s.remove_prefix(1);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
        !all_digits(s.substr(8, 2)))
        return false;
    int y = std::atoi(std::string(s.substr(0, 4)).c_str());
    int m = std::atoi(std::string(s.substr(5, 2)).c_str());
    int d = std::atoi(std::string(s.substr(8, 2)).c_str());
    if (m < 1 || m > 12 || d < 1) return false;
    static const int md[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int maxd = md[m - 1];
    if (m == 2 && leap_year(y)) maxd = 29;
    return d <= maxd;
}

}  // namespace

Ordering compare_terms(const Term& a, const Term& b) {
    if (a < b) return Ordering::Less;
    if (b < a) return Ordering::Greater;
    return Ordering::Equal;
}

bool is_valid_iri(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0) return false;
    if (!is_scheme_start(text[0])) return false;
    for (std::size_t i = 1; i < colon; ++i)
        if (!is_scheme_char(text[i])) return false;
    for (unsigned char c : text)
        if (is_forbidden_iri_char(c)) return false;
    return true;
}

Iri make_iri(const std::string& text) {
    if (!is_valid_iri(text)) throw MalformedIri(text);
    return Iri{text};
}

bool is_numeric_datatype(const std::string& datatype_iri) {
    return datatype_iri == xsd::integer_dt || datatype_iri == xsd::decimal_dt ||
           datatype_iri == xsd::double_dt;
}

Literal make_literal(const std::string& lexical, const std::string& datatype_iri,
                     const std::string& lang) {
    if (!lang.empty() && datatype_iri != rdf::lang_string_dt)
        throw LangConflict("language tag given with non-language datatype " + datatype_iri);
    if (lang.empty() && datatype_iri == rdf::lang_string_dt)
        throw LangConflict("rdf:langString literal requires a language tag");

    bool ok = true;
    if (datatype_iri == xsd::integer_dt) ok = valid_integer(lexical);
    else if (datatype_iri == xsd::decimal_dt) ok = valid_decimal(lexical);
    else if (datatype_iri == xsd::double_dt) ok = valid_double(lexical);
    else if (datatype_iri == xsd::boolean_dt) ok = valid_boolean(lexical);
    else if (datatype_iri == xsd::date_dt) ok = valid_date(lexical);
    if (!ok)
        throw DatatypeMismatch("\"" + lexical + "\" is not a valid " + datatype_iri + " lexical");
    return Literal{lexical, datatype_iri, lang};
}

double numeric_value(const Literal& l) {
    if (!is_numeric_datatype(l.datatype))
        throw NotNumeric("not a numeric literal: \"" + l.lexical + "\"^^" + l.datatype);
    const char* begin = l.lexical.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        // strtod does not accept XSD's capitalized INF spellings.
        if (l.lexical == "INF" || l.lexical == "+INF") return HUGE_VAL;
        if (l.lexical == "-INF") return -HUGE_VAL;
        throw NotNumeric("unparsable numeric lexical: " + l.lexical);
    }
    return v;
}

Triple::Triple(Term s, Iri p, Term o)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    if (is_literal(subject)) throw InvalidTriple("literal in subject position");
}

void Graph::add_prefix(const std::string& shortname, const std::string& iri) {
    prefixes_[shortname] = make_iri(iri).value;
}

std::set<std::string> Graph::blank_labels() const {
    std::set<std::string> out;
    for (const auto& t : triples_) {
        if (auto* b = std::get_if<BlankNode>(&t.subject)) out.insert(b->label);
        if (auto* b = std::get_if<BlankNode>(&t.object)) out.insert(b->label);
    }
    return out;
}

void Graph::merge(const Graph& other) {
    std::set<std::string> mine = blank_labels();
    std::set<std::string> theirs = other.blank_labels();

    std::map<std::string, std::string> rename;
    std::size_t counter = 0;
    for (const auto& label : theirs) {
        if (!mine.count(label)) continue;
        std::string fresh;
        do {
            fresh = "m" + std::to_string(counter++);
        } while (mine.count(fresh) || theirs.count(fresh));
        rename[label] = fresh;
        mine.insert(fresh);
    }

    auto remap = [&](const Term& t) -> Term {
        if (auto* b = std::get_if<BlankNode>(&t)) {
            auto it = rename.find(b->label);
            if (it != rename.end()) return BlankNode{it->second};
        }
        return t;
    };
    for (const auto& t : other.triples_)
        triples_.insert(Triple(remap(t.subject), t.predicate, remap(t.object)));
    for (const auto& [k, v] : other.prefixes_)
        prefixes_.emplace(k, v);  // existing binding wins
}

namespace {

// Blank-node signature: the triple with blanks replaced by a placeholder.
// Nodes with different signatures can never map to each other.
std::string blank_signature(const Graph& g, const std::string& label) {
    std::string sig;
    auto part = [&](const Term& t) -> std::string {
        if (auto* b = std::get_if<BlankNode>(&t))
            return b->label == label ? "@self" : "@blank";
        if (auto* i = std::get_if<Iri>(&t)) return i->value;
        const auto& l = std::get<Literal>(t);
        return l.lexical + "^" + l.datatype + "@" + l.lang;
    };
    std::vector<std::string> lines;
    for (const auto& t : g.triples()) {
        bool touches = (is_blank(t.subject) && std::get<BlankNode>(t.subject).label == label) ||
                       (is_blank(t.object) && std::get<BlankNode>(t.object).label == label);
        if (touches)
            lines.push_back(part(t.subject) + "|" + t.predicate.value + "|" + part(t.object));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) sig += l + "\n";
    return sig;
}

Graph apply_mapping_to_blanks(const Graph& g, const std::map<std::string, std::string>& m) {
    Graph out;
    auto remap = [&](const Term& t) -> Term {
        if (auto* b = std::get_if<BlankNode>(&t)) return BlankNode{m.at(b->label)};
        return t;
    };
    for (const auto& t : g.triples())
        out.insert(Triple(remap(t.subject), t.predicate, remap(t.object)));
    return out;
}

bool search_bijection(const std::vector<std::string>& a_labels,
                      const std::map<std::string, std::vector<std::string>>& candidates,
                      std::size_t idx, std::map<std::string, std::string>& current,
                      std::set<std::string>& used, const Graph& a, const Graph& b) {
    if (idx == a_labels.size()) {
        return apply_mapping_to_blanks(a, current).triples() == b.triples();
    }
    const auto& label = a_labels[idx];
    for (const auto& cand : candidates.at(label)) {
        if (used.count(cand)) continue;
        current[label] = cand;
        used.insert(cand);
        if (search_bijection(a_labels, candidates, idx + 1, current, used, a, b)) return true;
        used.erase(cand);
        current.erase(label);
    }
    return false;
}

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
    if (a.size() != b.size()) return false;
    auto la = a.blank_labels(), lb = b.blank_labels();
    if (la.size() != lb.size()) return false;
    if (la.empty()) return a.triples() == b.triples();
    if (la == lb && a.triples() == b.triples()) return true;

    // An isomorphism preserves blank signatures, so only same-signature
    // nodes are candidate images. Backtrack over the remaining bijections.
    std::map<std::string, std::vector<std::string>> candidates;
    std::map<std::string, std::string> sig_b;
    for (const auto& l : lb) sig_b[l] = blank_signature(b, l);
    for (const auto& l : la) {
        std::string sa = blank_signature(a, l);
        auto& c = candidates[l];
        for (const auto& m : lb)
            if (sig_b.at(m) == sa) c.push_back(m);
        if (c.empty()) return false;
    }
    std::vector<std::string> order(la.begin(), la.end());
    std::map<std::string, std::string> current;
    std::set<std::string> used;
    return search_bijection(order, candidates, 0, current, used, a, b);
}

}  // namespace rockb
