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
#include "rockb/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"
#include "rockb/ontology.hpp"

namespace rockb {

namespace {

using nlohmann::ordered_json;

// ------------------------------------------------------------------ csv --

bool only_whitespace(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

int Table::column_index(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table parse_csv(const std::string& text, char delimiter, char quote) {
    std::string_view in = text;
    if (in.size() >= 3 && in.substr(0, 3) == "\xEF\xBB\xBF") in.remove_prefix(3);
    if (in.empty() || only_whitespace(std::string(in))) throw EmptyInput();

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_char_in_record = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_char_in_record = false;
    };

    for (std::size_t i = 0; i < in.size(); ++i) {
        char c = in[i];
        if (in_quotes) {
            if (c == quote) {
                if (i + 1 < in.size() && in[i + 1] == quote) {
                    field.push_back(quote);
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == quote && field.empty()) {
            in_quotes = true;
            any_char_in_record = true;
        } else if (c == delimiter) {
            end_field();
            any_char_in_record = true;
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
            end_record();
        } else {
            field.push_back(c);
            any_char_in_record = true;
        }
    }
    if (any_char_in_record || !field.empty() || !record.empty()) end_record();

    // A trailing newline produces one phantom empty record; drop it.
    while (!records.empty() && records.back().size() == 1 && records.back()[0].empty())
        records.pop_back();
    if (records.empty()) throw EmptyInput();

    Table t;
    t.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size()) throw RaggedRow(static_cast<int>(r + 1));
        t.rows.push_back(std::move(records[r]));
    }
    return t;
}

// -------------------------------------------------------------- mapping --

namespace {

// Template segments: literal text and column references.
struct TemplatePart {
    bool is_column = false;
    std::string text;
};

std::vector<TemplatePart> split_template(const std::string& tpl) {
    std::vector<TemplatePart> parts;
    std::string current;
    for (std::size_t i = 0; i < tpl.size(); ++i) {
        char c = tpl[i];
        if (c == '{') {
            auto close = tpl.find('}', i + 1);
            if (close == std::string::npos) throw BadTemplate(tpl);
            if (!current.empty()) parts.push_back({false, current});
            current.clear();
            std::string column = tpl.substr(i + 1, close - i - 1);
            if (column.empty() || column.find('{') != std::string::npos) throw BadTemplate(tpl);
            parts.push_back({true, column});
            i = close;
        } else if (c == '}') {
            throw BadTemplate(tpl);
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) parts.push_back({false, current});
    return parts;
}

CellTransform transform_from_name(const std::string& name) {
    if (name.empty() || name == "none") return CellTransform::None;
    if (name == "date_yyyymmdd_to_iso") return CellTransform::DateYyyymmddToIso;
    if (name == "trim") return CellTransform::Trim;
    throw UnknownTransform(name);
}

std::string checked_iri(const ordered_json& j, const char* what) {
    if (!j.is_string()) throw MappingError(std::string(what) + " must be an IRI string");
    std::string v = j.get<std::string>();
    if (!is_valid_iri(v)) throw MappingError(std::string(what) + " is not a valid IRI: " + v);
    return v;
}

std::string apply_transform(const std::string& cell, CellTransform t) {
    switch (t) {
        case CellTransform::None:
            return cell;
        case CellTransform::Trim: {
            std::size_t b = cell.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return "";
            std::size_t e = cell.find_last_not_of(" \t\r\n");
            return cell.substr(b, e - b + 1);
        }
        case CellTransform::DateYyyymmddToIso: {
            std::string s = cell;
            if (s.size() != 8 ||
                !std::all_of(s.begin(), s.end(),
                             [](unsigned char c) { return std::isdigit(c); }))
                throw Error("cell \"" + cell + "\" is not a YYYYMMDD date");
            return s.substr(0, 4) + "-" + s.substr(4, 2) + "-" + s.substr(6, 2);
        }
    }
    return cell;
}

// Bytes that may not appear raw in an IRI are percent-encoded when cells
// are substituted into IRI templates.
std::string iri_safe(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        bool bad = c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '\\' || c == '{' ||
                   c == '}' || c == '|' || c == '^' || c == '`' || c == 0x7F;
        if (bad) {
            out += '%';
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

MappingSpec compile_mapping(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MappingError(std::string("mapping document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw MappingError("mapping document must be a JSON object");

    MappingSpec spec;
    if (!doc.contains("subject_template") || !doc["subject_template"].is_string())
        throw MappingError("mapping needs a subject_template string");
    spec.subject_template = doc["subject_template"].get<std::string>();
    split_template(spec.subject_template);  // brace validation

    for (const auto& t : doc.value("types", ordered_json::array()))
        spec.type_assertions.push_back(checked_iri(t, "type"));

    std::set<std::string> seen_columns;
    for (const auto& b : doc.value("bindings", ordered_json::array())) {
        ColumnBinding cb;
        if (!b.contains("column") || !b["column"].is_string())
            throw MappingError("binding needs a column name");
        cb.column = b["column"].get<std::string>();
        if (!seen_columns.insert(cb.column).second) throw DuplicateBinding(cb.column);
        cb.property_iri = checked_iri(b.at("property"), "binding property");
        cb.datatype_iri = checked_iri(b.at("datatype"), "binding datatype");
        if (b.contains("null_markers")) {
            cb.null_markers.clear();
            for (const auto& m : b["null_markers"]) cb.null_markers.push_back(m.get<std::string>());
        }
        cb.transform = transform_from_name(b.value("transform", "none"));
        spec.bindings.push_back(std::move(cb));
    }

    for (const auto& l : doc.value("links", ordered_json::array())) {
        LinkSpec ls;
        ls.property_iri = checked_iri(l.at("property"), "link property");
        if (!l.contains("subject_template") || !l["subject_template"].is_string())
            throw MappingError("link needs a subject_template string");
        ls.subject_template = l["subject_template"].get<std::string>();
        split_template(ls.subject_template);
        for (const auto& t : l.value("types", ordered_json::array()))
            ls.types.push_back(checked_iri(t, "link type"));
        ls.label_column = l.value("label_column", "");
        spec.links.push_back(std::move(ls));
    }
    return spec;
}

namespace {

struct OxcgrtColumn {
    const char* code;
    const char* column;
};

// Column labels as they appear in the wide daily export (including the
// capitalized "Facial Coverings" quirk).
constexpr OxcgrtColumn kOxcgrtColumns[] = {
    {"c1", "C1_School closing"},
    {"c2", "C2_Workplace closing"},
    {"c3", "C3_Cancel public events"},
    {"c4", "C4_Restrictions on gatherings"},
    {"c5", "C5_Close public transport"},
    {"c6", "C6_Stay at home requirements"},
    {"c7", "C7_Restrictions on internal movement"},
    {"c8", "C8_International travel controls"},
    {"e1", "E1_Income support"},
    {"e2", "E2_Debt/contract relief"},
    {"e3", "E3_Fiscal measures"},
    {"e4", "E4_International support"},
    {"h1", "H1_Public information campaigns"},
    {"h2", "H2_Testing policy"},
    {"h3", "H3_Contact tracing"},
    {"h4", "H4_Emergency investment in healthcare"},
    {"h5", "H5_Investment in vaccines"},
    {"h6", "H6_Facial Coverings"},
    {"m1", "M1_Wildcard"},
};

ordered_json binding_json(const std::string& column, const std::string& property,
                          const std::string& datatype, const char* transform = nullptr) {
    ordered_json b;
    b["column"] = column;
    b["property"] = property;
    b["datatype"] = datatype;
    if (transform) b["transform"] = transform;
    return b;
}

ordered_json link_json(const std::string& country_template, const std::string& label_column) {
    ordered_json l;
    l["property"] = codo::country_wise_statistics_prop;
    l["subject_template"] = country_template;
    l["types"] = ordered_json::array({roc::country_class});
    l["label_column"] = label_column;
    return l;
}

ordered_json oxcgrt_document() {
    const OntologySchema& schema = builtin_roc_schema();
    ordered_json doc;
    doc["subject_template"] = rocdata::ns + "{CountryCode}-{Date}";
    doc["types"] = ordered_json::array({roc::response_statistics});
    auto& bindings = doc["bindings"] = ordered_json::array();
    bindings.push_back(
        binding_json("Date", roc::date, xsd::date_dt, "date_yyyymmdd_to_iso"));
    for (const auto& col : kOxcgrtColumns) {
        const IndicatorDefinition* d = schema.indicator_by_code(col.code);
        bindings.push_back(binding_json(col.column, d->property_iri, schema.ranges.at(d->property_iri)));
        if (d->has_flag) {
            std::string flag_col = col.code;
            for (auto& c : flag_col) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            bindings.push_back(
                binding_json(flag_col + "_Flag", d->flag_property_iri, xsd::integer_dt));
        }
    }
    bindings.push_back(binding_json("StringencyIndex", roc::stringency_index, xsd::decimal_dt));
    bindings.push_back(
        binding_json("GovernmentResponseIndex", roc::government_response_index, xsd::decimal_dt));
    bindings.push_back(
        binding_json("ContainmentHealthIndex", roc::containment_health_index, xsd::decimal_dt));
    bindings.push_back(
        binding_json("EconomicSupportIndex", roc::economic_support_index, xsd::decimal_dt));
    doc["links"] =
        ordered_json::array({link_json(rocdata::country_ns + "{CountryCode}", "CountryName")});
    return doc;
}

ordered_json ecdc_document() {
    ordered_json doc;
    doc["subject_template"] = rocdata::ns + "{countryterritoryCode}-{dateRep}";
    doc["types"] = ordered_json::array({roc::case_statistics});
    doc["bindings"] = ordered_json::array({
        binding_json("dateRep", roc::date, xsd::date_dt, "date_yyyymmdd_to_iso"),
        binding_json("cases", roc::new_cases, xsd::integer_dt),
        binding_json("deaths", roc::new_deaths, xsd::integer_dt),
    });
    doc["links"] = ordered_json::array({link_json(
        rocdata::country_ns + "{countryterritoryCode}", "countriesAndTerritories")});
    return doc;
}

ordered_json ilo_document() {
    ordered_json doc;
    doc["subject_template"] = rocdata::ns + "ilo/{ref_area}-{time}";
    doc["types"] = ordered_json::array({roc::labour_market_statistics});
    doc["bindings"] = ordered_json::array({
        binding_json("time", roc::period, xsd::string_dt, "trim"),
        binding_json("unemployment_rate", roc::unemployment_rate, xsd::decimal_dt),
        binding_json("working_hours_lost", roc::working_hours_lost, xsd::decimal_dt),
    });
    doc["links"] = ordered_json::array({link_json(rocdata::country_ns + "{ref_area}", "country_name")});
    return doc;
}

}  // namespace

std::string preset_mapping_json(SourcePreset source) {
    ordered_json doc = source == SourcePreset::Oxcgrt ? oxcgrt_document()
                       : source == SourcePreset::Ecdc ? ecdc_document()
                                                      : ilo_document();
    return doc.dump(2) + "\n";
}

MappingSpec preset_mapping(SourcePreset source) {
    return compile_mapping(preset_mapping_json(source));
}

IngestResult apply_mapping(const Table& table, const MappingSpec& spec) {
    IngestResult result;
    IngestReport& report = result.report;
    Graph& graph = result.graph;

    // Transforms applied to a column carry over into template substitution
    // (the OxCGRT date both keys the instance IRI and becomes roc:date).
    std::map<std::string, const ColumnBinding*> binding_by_column;
    for (const auto& b : spec.bindings) binding_by_column[b.column] = &b;

    struct ResolvedTemplate {
        std::vector<TemplatePart> parts;
        std::vector<int> columns;  // aligned with parts, -1 for literals
    };
    auto resolve_template = [&](const std::string& tpl) {
        ResolvedTemplate rt;
        rt.parts = split_template(tpl);
        for (const auto& p : rt.parts) {
            if (!p.is_column) {
                rt.columns.push_back(-1);
                continue;
            }
            int idx = table.column_index(p.text);
            if (idx < 0) throw UnknownColumn(p.text);
            rt.columns.push_back(idx);
        }
        return rt;
    };

    ResolvedTemplate subject_tpl = resolve_template(spec.subject_template);
    std::vector<ResolvedTemplate> link_tpls;
    for (const auto& l : spec.links) link_tpls.push_back(resolve_template(l.subject_template));

    struct ActiveBinding {
        const ColumnBinding* binding;
        int column;
    };
    std::vector<ActiveBinding> active;
    for (const auto& b : spec.bindings) {
        int idx = table.column_index(b.column);
        if (idx < 0) {
            report.errors.emplace_back(1, "bound column '" + b.column + "' not in table header");
            continue;
        }
        active.push_back({&b, idx});
    }
    std::vector<int> link_label_columns;
    for (const auto& l : spec.links) {
        int idx = l.label_column.empty() ? -1 : table.column_index(l.label_column);
        if (!l.label_column.empty() && idx < 0)
            report.errors.emplace_back(1, "label column '" + l.label_column + "' not in table header");
        link_label_columns.push_back(idx);
    }

    auto instantiate = [&](const ResolvedTemplate& rt, const std::vector<std::string>& row)
        -> std::string {
        std::string out;
        for (std::size_t i = 0; i < rt.parts.size(); ++i) {
            if (rt.columns[i] < 0) {
                out += rt.parts[i].text;
                continue;
            }
            std::string cell = row[static_cast<std::size_t>(rt.columns[i])];
            auto it = binding_by_column.find(rt.parts[i].text);
            if (it != binding_by_column.end()) cell = apply_transform(cell, it->second->transform);
            if (cell.empty()) throw Error("empty value for template column '" + rt.parts[i].text + "'");
            out += iri_safe(cell);
        }
        return out;
    };

    std::set<std::string> instances;
    const Iri type_iri{rdf::type};

    report.rows_read = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        int file_row = static_cast<int>(r + 2);

        Iri subject;
        try {
            subject = make_iri(instantiate(subject_tpl, row));
        } catch (const Error& e) {
            report.errors.emplace_back(file_row, std::string("cannot build instance IRI: ") + e.what());
            continue;
        }
        instances.insert(subject.value);

        for (const auto& cls : spec.type_assertions)
            graph.insert(Triple(subject, type_iri, Iri{cls}));

        for (const auto& ab : active) {
            const std::string& raw = row[static_cast<std::size_t>(ab.column)];
            const auto& markers = ab.binding->null_markers;
            if (std::find(markers.begin(), markers.end(), raw) != markers.end()) {
                ++report.skipped_cells;
                continue;
            }
            try {
                std::string value = apply_transform(raw, ab.binding->transform);
                Literal lit = make_literal(value, ab.binding->datatype_iri);
                graph.insert(Triple(subject, Iri{ab.binding->property_iri}, lit));
            } catch (const Error& e) {
                report.errors.emplace_back(
                    file_row, "column '" + ab.binding->column + "': " + e.what());
            }
        }

        for (std::size_t li = 0; li < spec.links.size(); ++li) {
            const LinkSpec& link = spec.links[li];
            Iri linked;
            try {
                linked = make_iri(instantiate(link_tpls[li], row));
            } catch (const Error& e) {
                report.errors.emplace_back(file_row,
                                           std::string("cannot build linked IRI: ") + e.what());
                continue;
            }
            graph.insert(Triple(linked, Iri{link.property_iri}, subject));
            for (const auto& cls : link.types)
                graph.insert(Triple(linked, type_iri, Iri{cls}));
            if (link_label_columns[li] >= 0) {
                const std::string& label = row[static_cast<std::size_t>(link_label_columns[li])];
                if (!label.empty())
                    graph.insert(Triple(linked, Iri{rdfs::label}, string_literal(label)));
            }
        }
    }

    report.instances_created = instances.size();
    report.triples_emitted = graph.size();
    return result;
}

}  // namespace rockb
