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
#ifndef ROCKB_TURTLE_HPP
#define ROCKB_TURTLE_HPP

#include <functional>
#include <string>

#include "rockb/rdf.hpp"

namespace rockb {

enum class RdfSyntax { Turtle, NTriples };

struct ParseDiagnostic {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    std::string message;
};

struct SyntaxError : Error {
    ParseDiagnostic diagnostic;
    explicit SyntaxError(ParseDiagnostic d)
        : Error("line " + std::to_string(d.line) + ", col " + std::to_string(d.column) + ": " +
                d.message),
          diagnostic(std::move(d)) {}
};

/// Parses Turtle or N-Triples text into a graph. Prefix declarations are
/// captured into Graph::prefixes. Throws SyntaxError at the first
/// unrecoverable token error.
///
/// Supported Turtle: @prefix, the `a` keyword, `;` and `,` lists, typed
/// literals, language tags, integer/decimal/double/boolean shorthand,
/// `#` comments, and `_:label` blank nodes. Collections and anonymous
/// blank nodes are not part of the grammar.
Graph parse_rdf(const std::string& text, RdfSyntax syntax);

/// Streaming variant: triples are handed to `sink` as they are parsed and
/// prefix declarations to `prefix_sink`; nothing is accumulated. Used by the
/// store loader to avoid building an intermediate graph.
void parse_rdf(const std::string& text, RdfSyntax syntax,
               const std::function<void(Triple&&)>& sink,
               const std::function<void(const std::string&, const std::string&)>& prefix_sink);

/// Serializes a graph. N-Triples output is one triple per line, sorted by
/// term order, and byte-identical for equal graphs. Turtle output groups
/// triples by subject with `;` predicate lists and `,` object lists, using
/// the graph's prefixes where the local name is unambiguous. Output always
/// reparses to a graph equal to the input.
std::string serialize_rdf(const Graph& graph, RdfSyntax syntax);

/// One term in N-Triples syntax (also used in diagnostics and test output).
std::string term_to_ntriples(const Term& t);

/// Guesses syntax from a file name: ".nt" means N-Triples, everything else
/// Turtle (a strict superset for the subset we emit).
RdfSyntax syntax_for_path(const std::string& path);

}  // namespace rockb

#endif  // ROCKB_TURTLE_HPP
