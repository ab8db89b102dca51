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
#ifndef ROCKB_INGEST_HPP
#define ROCKB_INGEST_HPP

#include <string>
#include <vector>

#include "rockb/rdf.hpp"

namespace rockb {

struct EmptyInput : Error {
    EmptyInput() : Error("empty CSV input") {}
};
struct RaggedRow : Error {
    int row;  // 1-based file row (header is row 1)
    explicit RaggedRow(int r)
        : Error("row " + std::to_string(r) + " has a different cell count than the header"),
          row(r) {}
};

struct MappingError : Error {
    using Error::Error;
};
struct UnknownColumn : MappingError {
    explicit UnknownColumn(const std::string& c) : MappingError("unknown column '" + c + "'") {}
};
struct DuplicateBinding : MappingError {
    explicit DuplicateBinding(const std::string& c)
        : MappingError("column '" + c + "' is bound more than once") {}
};
struct BadTemplate : MappingError {
    explicit BadTemplate(const std::string& t)
        : MappingError("unbalanced braces in template \"" + t + "\"") {}
};
struct UnknownTransform : MappingError {
    explicit UnknownTransform(const std::string& t)
        : MappingError("unknown transform '" + t + "'") {}
};

/// A parsed CSV file: header plus string cells, every row header-width.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string source_id;

    /// Index of a column or -1.
    int column_index(const std::string& name) const;
};

/// RFC-4180-style parser: quoted fields may contain the delimiter and
/// newlines, doubled quotes unescape, CRLF and LF both accepted, a UTF-8
/// BOM is ignored. Throws EmptyInput / RaggedRow.
Table parse_csv(const std::string& text, char delimiter = ',', char quote = '"');

enum class CellTransform { None, DateYyyymmddToIso, Trim };

struct ColumnBinding {
    std::string column;
    std::string property_iri;
    std::string datatype_iri;
    std::vector<std::string> null_markers{"", "NA"};
    CellTransform transform = CellTransform::None;

    bool operator==(const ColumnBinding&) const = default;
};

/// A linked node next to the row node: the link triple is
/// (linked-subject, property, row-subject). The linked node may get type
/// and label triples of its own.
struct LinkSpec {
    std::string property_iri;
    std::string subject_template;
    std::vector<std::string> types;
    std::string label_column;  // empty: no label triple

    bool operator==(const LinkSpec&) const = default;
};

struct MappingSpec {
    std::string subject_template;  // {column} placeholders
    std::vector<std::string> type_assertions;
    std::vector<ColumnBinding> bindings;
    std::vector<LinkSpec> links;

    bool operator==(const MappingSpec&) const = default;
};

/// Parses and validates a mapping-spec JSON document (objects
/// `subject_template`, `types`, `bindings[]`, `links[]`).
MappingSpec compile_mapping(const std::string& json_text);

enum class SourcePreset { Oxcgrt, Ecdc, Ilo };

/// The bundled mapping for a source family (also shipped under
/// data/mappings/).
MappingSpec preset_mapping(SourcePreset source);

/// The JSON document behind preset_mapping; compile_mapping of this text
/// yields exactly preset_mapping(source).
std::string preset_mapping_json(SourcePreset source);

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t triples_emitted = 0;
    std::size_t instances_created = 0;
    std::size_t skipped_cells = 0;
    std::vector<std::pair<int, std::string>> errors;  // (file row, message)
};

struct IngestResult {
    Graph graph;
    IngestReport report;
};

/// Transforms table rows into triples. Cell-level problems (bad dates,
/// non-numeric values on numeric properties) are collected per row; only a
/// template referencing a missing column fails the whole table
/// (UnknownColumn). Deterministic: equal inputs give equal graphs.
IngestResult apply_mapping(const Table& table, const MappingSpec& spec);

}  // namespace rockb

#endif  // ROCKB_INGEST_HPP
