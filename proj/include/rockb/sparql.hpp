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
#ifndef ROCKB_SPARQL_HPP
#define ROCKB_SPARQL_HPP

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rockb/store.hpp"

namespace rockb {

struct UnsupportedFeature : Error {
    std::string feature;
    explicit UnsupportedFeature(std::string f)
        : Error("unsupported SPARQL feature: " + f), feature(std::move(f)) {}
};

struct UnknownPrefix : Error {
    explicit UnknownPrefix(const std::string& p) : Error("unknown prefix '" + p + ":'") {}
};

struct EvalTimeout : Error {
    EvalTimeout() : Error("query evaluation exceeded its deadline") {}
};

struct Variable {
    std::string name;  // without the '?' sigil
    bool operator==(const Variable&) const = default;
};

/// One position of a triple pattern: a variable or a concrete term.
using PatternTerm = std::variant<Variable, Term>;

struct TriplePatternTemplate {
    PatternTerm s, p, o;
};

enum class AggFn { Avg, Sum, Count, Min, Max };

/// SELECT list entry: a plain variable (fn empty) or an aggregate over one.
struct Projection {
    std::optional<AggFn> fn;
    std::string var;
    std::string alias;  // output column name
};

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

/// Boolean filter expression. Total semantics: every node evaluates to a
/// plain boolean; comparisons on unbound variables or across value kinds
/// are false rather than errors.
struct FilterExpr {
    enum class Kind { Compare, And, Or, Not, Bound };
    struct Operand {
        std::optional<std::string> var;  // exactly one of var/term is set
        std::optional<Term> term;
    };

    Kind kind = Kind::Compare;
    CmpOp cmp = CmpOp::Eq;
    Operand lhs, rhs;                  // Compare
    std::vector<FilterExpr> children;  // And / Or / Not
    std::string bound_var;             // Bound
};

struct QueryAst {
    std::map<std::string, std::string> prefixes;
    bool distinct = false;
    bool select_all = false;  // SELECT * (expands to the pattern variables)
    std::vector<Projection> projection;
    std::vector<TriplePatternTemplate> where;  // `;` lists already flattened
    std::vector<FilterExpr> filters;           // conjoined
    std::vector<std::string> group_by;
    struct OrderKey {
        std::string column;  // projected variable or aggregate alias
        bool ascending = true;
    };
    std::vector<OrderKey> order_by;
    std::optional<std::size_t> limit, offset;

    bool has_aggregates() const;
    bool grouped() const { return !group_by.empty() || has_aggregates(); }
};

/// Bag of solutions; row cells align with `variables`. Unbound cells are
/// nullopt.
struct SolutionTable {
    std::vector<std::string> variables;
    std::vector<std::vector<std::optional<Term>>> rows;
};

/// Parses the SPARQL subset: SELECT with plain and aggregate projections
/// (bare `AVG(?x)` and `(AVG(?x) AS ?y)` forms), basic graph patterns with
/// `;`/`,` lists and `a`, FILTER with comparisons / && / || / ! / bound(),
/// GROUP BY, ORDER BY, LIMIT/OFFSET, DISTINCT.
///
/// Recognized-but-out-of-scope constructs (OPTIONAL, UNION, BIND, VALUES,
/// subqueries, ...) raise UnsupportedFeature; anything else malformed
/// raises SyntaxError with a position. Prefixed names are expanded while
/// parsing; missing declarations raise UnknownPrefix.
QueryAst parse_query(const std::string& text);

using Deadline = std::chrono::steady_clock::time_point;

/// Evaluates the query against the store. Pure read; safe to run
/// concurrently on a frozen store. Throws EvalTimeout if `deadline` passes
/// mid-evaluation.
SolutionTable evaluate(const QueryAst& ast, const Store& store,
                       std::optional<Deadline> deadline = std::nullopt);

enum class ResultFormat { SparqlJson, Csv };

/// W3C SPARQL-results JSON, or CSV with bare IRIs/literal lexicals.
/// Byte-deterministic for equal tables.
std::string serialize_results(const SolutionTable& table, ResultFormat format);

}  // namespace rockb

#endif  // ROCKB_SPARQL_HPP
