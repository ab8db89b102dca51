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
#include "rockb/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "rockb/turtle.hpp"

namespace rockb {

namespace {

// ---------------------------------------------------------------- lexer --

struct Token {
    enum Kind { Eof, Iri, PName, Var, Str, Num, Word, Punct } kind = Eof;
    std::string text;  // word / pname / punct / iri value / var name / lexical
    std::string str_lang;      // Str: language tag
    std::string str_datatype;  // Str: raw datatype token ("<...>" or "pn:local")
    std::string num_datatype;  // Num: datatype IRI
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            Token t = next();
            bool eof = t.kind == Token::Eof;
            out.push_back(std::move(t));
            if (eof) return out;
        }
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
        return c;
    }
    [[noreturn]] void fail(const std::string& m) const {
        throw SyntaxError(ParseDiagnostic{line_, col_, m});
    }
    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Token start_token(Token::Kind k) const {
        Token t;
        t.kind = k;
        t.line = line_;
        t.col = col_;
        return t;
    }

    Token next() {
        if (eof()) return start_token(Token::Eof);
        char c = peek();
        if (c == '<') return lex_iri();
        if (c == '?' || c == '$') return lex_var();
        if (c == '"') return lex_string();
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek(1)))) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
            return lex_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':')
            return lex_word_or_pname();
        return lex_punct();
    }

    Token lex_iri() {
        Token t = start_token(Token::Iri);
        advance();  // '<'
        while (!eof() && peek() != '>') {
            char ch = advance();
            if (static_cast<unsigned char>(ch) <= 0x20) fail("whitespace inside IRI");
            t.text.push_back(ch);
        }
        if (eof()) fail("unterminated IRI");
        advance();  // '>'
        if (!is_valid_iri(t.text)) fail("relative or malformed IRI <" + t.text + ">");
        return t;
    }

    Token lex_var() {
        Token t = start_token(Token::Var);
        advance();  // sigil
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            t.text.push_back(advance());
        if (t.text.empty()) fail("empty variable name");
        return t;
    }

    Token lex_string() {
        Token t = start_token(Token::Str);
        advance();  // '"'
        for (;;) {
            if (eof()) fail("unterminated string");
            char ch = advance();
            if (ch == '"') break;
            if (ch == '\\') {
                if (eof()) fail("dangling escape");
                char e = advance();
                switch (e) {
                    case 't': t.text.push_back('\t'); break;
                    case 'n': t.text.push_back('\n'); break;
                    case 'r': t.text.push_back('\r'); break;
                    case '"': t.text.push_back('"'); break;
                    case '\\': t.text.push_back('\\'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                t.text.push_back(ch);
            }
        }
        if (peek() == '@') {
            advance();
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                t.str_lang.push_back(advance());
            if (t.str_lang.empty()) fail("malformed language tag");
        } else if (peek() == '^' && peek(1) == '^') {
            advance();
            advance();
            if (peek() == '<') {
                Token dt = lex_iri();
                t.str_datatype = "<" + dt.text + ">";
            } else {
                Token dt = lex_word_or_pname();
                if (dt.kind != Token::PName) fail("expected datatype after '^^'");
                t.str_datatype = dt.text;
            }
        }
        return t;
    }

    Token lex_number() {
        Token t = start_token(Token::Num);
        bool dot = false, expo = false;
        if (peek() == '+' || peek() == '-') t.text.push_back(advance());
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
            t.text.push_back(advance());
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            dot = true;
            t.text.push_back(advance());
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
                t.text.push_back(advance());
        }
        if ((peek() == 'e' || peek() == 'E')) {
            char s1 = peek(1);
            if (std::isdigit(static_cast<unsigned char>(s1)) ||
                ((s1 == '+' || s1 == '-') && std::isdigit(static_cast<unsigned char>(peek(2))))) {
                expo = true;
                t.text.push_back(advance());
                if (peek() == '+' || peek() == '-') t.text.push_back(advance());
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
                    t.text.push_back(advance());
            }
        }
        t.num_datatype = expo ? xsd::double_dt : dot ? xsd::decimal_dt : xsd::integer_dt;
        return t;
    }

    Token lex_word_or_pname() {
        Token t = start_token(Token::Word);
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                t.text.push_back(advance());
            else
                break;
        }
        if (peek() == ':') {
            t.kind = Token::PName;
            t.text.push_back(advance());
            while (!eof()) {
                char c = peek();
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                    c == '%' || c == '.')
                    t.text.push_back(advance());
                else
                    break;
            }
            while (!t.text.empty() && t.text.back() == '.') {
                t.text.pop_back();
                --pos_;
                --col_;
            }
        } else if (t.text.empty()) {
            fail("unexpected character");
        }
        return t;
    }

    Token lex_punct() {
        Token t = start_token(Token::Punct);
        char c = advance();
        t.text.push_back(c);
        auto two = [&](char second) {
            if (peek() == second) t.text.push_back(advance());
        };
        switch (c) {
            case '!': two('='); break;
            case '<': two('='); break;
            case '>': two('='); break;
            case '&': two('&'); break;
            case '|': two('|'); break;
            case '{': case '}': case '(': case ')': case '.': case ';': case ',':
            case '*': case '=': case '+': case '/': case '[': case ']':
                break;
            default:
                fail(std::string("unexpected character '") + c + "'");
        }
        if (t.text == "&" || t.text == "|") fail("expected '" + t.text + t.text + "'");
        return t;
    }
};

// --------------------------------------------------------------- parser --

bool word_is(const Token& t, const char* kw) {
    if (t.kind != Token::Word) return false;
    if (t.text.size() != std::string_view(kw).size()) return false;
    for (std::size_t i = 0; i < t.text.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
    return true;
}

const char* kUnsupportedInPattern[] = {"OPTIONAL", "UNION",   "MINUS", "GRAPH",
                                       "SERVICE",  "BIND",    "VALUES", "SELECT",
                                       "EXISTS",   "NOT"};

class QueryParser {
public:
    explicit QueryParser(const std::string& text) : tokens_(Lexer(text).run()) {}

    QueryAst parse() {
        parse_prologue();
        parse_select();
        parse_where();
        parse_modifiers();
        if (!at_eof()) fail("unexpected trailing input");
        validate();
        return std::move(ast_);
    }

private:
    std::vector<Token> tokens_;
    std::size_t i_ = 0;
    QueryAst ast_;

    const Token& cur() const { return tokens_[i_]; }
    const Token& next_token() { return tokens_[i_++]; }
    bool at_eof() const { return cur().kind == Token::Eof; }
    bool punct(const char* p) const { return cur().kind == Token::Punct && cur().text == p; }
    void expect_punct(const char* p, const char* ctx) {
        if (!punct(p)) fail(std::string("expected '") + p + "' " + ctx);
        ++i_;
    }
    [[noreturn]] void fail(const std::string& m) const {
        throw SyntaxError(ParseDiagnostic{cur().line, cur().col, m});
    }

    Iri resolve_pname(const std::string& pname) const {
        auto colon = pname.find(':');
        std::string prefix = pname.substr(0, colon);
        std::string local = pname.substr(colon + 1);
        auto it = ast_.prefixes.find(prefix);
        if (it == ast_.prefixes.end()) throw UnknownPrefix(prefix);
        std::string full = it->second + local;
        if (!is_valid_iri(full)) fail("prefixed name expands to malformed IRI <" + full + ">");
        return Iri{full};
    }

    void parse_prologue() {
        while (word_is(cur(), "PREFIX") || word_is(cur(), "BASE")) {
            if (word_is(cur(), "BASE")) throw UnsupportedFeature("BASE");
            ++i_;
            if (cur().kind != Token::PName) fail("expected prefix name after PREFIX");
            std::string pname = next_token().text;
            auto colon = pname.find(':');
            if (colon + 1 != pname.size()) fail("prefix declaration must end with ':'");
            if (cur().kind != Token::Iri) fail("expected IRI after prefix name");
            ast_.prefixes[pname.substr(0, colon)] = next_token().text;
        }
    }

    std::optional<AggFn> agg_fn(const Token& t) const {
        if (word_is(t, "AVG")) return AggFn::Avg;
        if (word_is(t, "SUM")) return AggFn::Sum;
        if (word_is(t, "COUNT")) return AggFn::Count;
        if (word_is(t, "MIN")) return AggFn::Min;
        if (word_is(t, "MAX")) return AggFn::Max;
        return std::nullopt;
    }

    static std::string agg_prefix(AggFn fn) {
        switch (fn) {
            case AggFn::Avg: return "avg";
            case AggFn::Sum: return "sum";
            case AggFn::Count: return "count";
            case AggFn::Min: return "min";
            case AggFn::Max: return "max";
        }
        return "agg";
    }

    // AVG '(' ?x ')' with the leading keyword already recognized.
    Projection parse_aggregate() {
        AggFn fn = *agg_fn(next_token());
        expect_punct("(", "after aggregate name");
        if (punct("*")) throw UnsupportedFeature("COUNT(*)");
        if (word_is(cur(), "DISTINCT")) throw UnsupportedFeature("DISTINCT inside aggregates");
        if (cur().kind != Token::Var) fail("expected variable inside aggregate");
        std::string var = next_token().text;
        expect_punct(")", "after aggregate argument");
        return Projection{fn, var, agg_prefix(fn) + "_" + var};
    }

    void parse_select() {
        if (word_is(cur(), "ASK") || word_is(cur(), "CONSTRUCT") || word_is(cur(), "DESCRIBE"))
            throw UnsupportedFeature(cur().text);
        if (!word_is(cur(), "SELECT")) fail("expected SELECT");
        ++i_;
        if (word_is(cur(), "DISTINCT")) {
            ast_.distinct = true;
            ++i_;
        } else if (word_is(cur(), "REDUCED")) {
            throw UnsupportedFeature("REDUCED");
        }
        for (;;) {
            if (cur().kind == Token::Var) {
                std::string v = next_token().text;
                ast_.projection.push_back({std::nullopt, v, v});
            } else if (agg_fn(cur())) {
                ast_.projection.push_back(parse_aggregate());
            } else if (punct("(")) {
                ++i_;
                if (!agg_fn(cur())) throw UnsupportedFeature("expression projections");
                Projection p = parse_aggregate();
                if (!word_is(cur(), "AS")) fail("expected AS in aliased projection");
                ++i_;
                if (cur().kind != Token::Var) fail("expected variable after AS");
                p.alias = next_token().text;
                expect_punct(")", "after aliased projection");
                ast_.projection.push_back(std::move(p));
            } else if (punct("*")) {
                ++i_;
                ast_.select_all = true;
            } else {
                break;
            }
        }
        if (ast_.projection.empty() && !ast_.select_all) fail("empty SELECT list");
    }

    PatternTerm parse_pattern_term(bool subject_position) {
        const Token& t = cur();
        switch (t.kind) {
            case Token::Var:
                ++i_;
                return Variable{t.text};
            case Token::Iri:
                ++i_;
                return Term{Iri{t.text}};
            case Token::PName: {
                if (t.text.rfind("_:", 0) == 0)
                    throw UnsupportedFeature("blank nodes in patterns");
                Iri iri = resolve_pname(t.text);
                ++i_;
                return Term{iri};
            }
            case Token::Str: {
                if (subject_position) fail("literal cannot be a subject");
                Token s = next_token();
                return Term{make_str_literal(s)};
            }
            case Token::Num: {
                if (subject_position) fail("literal cannot be a subject");
                Token n = next_token();
                return Term{Literal{n.text, n.num_datatype, {}}};
            }
            case Token::Word:
                if (word_is(t, "TRUE") || word_is(t, "FALSE")) {
                    if (subject_position) fail("literal cannot be a subject");
                    bool v = word_is(t, "TRUE");
                    ++i_;
                    return Term{Literal{v ? "true" : "false", xsd::boolean_dt, {}}};
                }
                [[fallthrough]];
            default:
                fail("expected term or variable");
        }
    }

    Literal make_str_literal(const Token& s) const {
        if (!s.str_lang.empty()) return Literal{s.text, rdf::lang_string_dt, s.str_lang};
        if (s.str_datatype.empty()) return Literal{s.text, xsd::string_dt, {}};
        std::string dt = s.str_datatype.front() == '<'
                             ? s.str_datatype.substr(1, s.str_datatype.size() - 2)
                             : resolve_pname(s.str_datatype).value;
        return Literal{s.text, dt, {}};
    }

    void check_unsupported_keyword() const {
        for (const char* kw : kUnsupportedInPattern)
            if (word_is(cur(), kw)) throw UnsupportedFeature(kw);
        if (punct("{")) throw UnsupportedFeature("nested group patterns");
        if (punct("[")) throw UnsupportedFeature("anonymous blank nodes");
        if (cur().kind == Token::Word && !cur().text.empty() && cur().text[0] == '_')
            throw UnsupportedFeature("blank nodes in patterns");
    }

    void parse_where() {
        if (word_is(cur(), "WHERE")) ++i_;
        expect_punct("{", "to open the WHERE block");
        for (;;) {
            if (punct("}")) {
                ++i_;
                return;
            }
            if (at_eof()) fail("unterminated WHERE block");
            if (word_is(cur(), "FILTER")) {
                ++i_;
                ast_.filters.push_back(parse_filter_expr());
                if (punct(".")) ++i_;  // optional separator after FILTER
                continue;
            }
            check_unsupported_keyword();
            parse_triples_block();
        }
    }

    void parse_triples_block() {
        PatternTerm subject = parse_pattern_term(true);
        for (;;) {
            PatternTerm predicate = parse_predicate();
            for (;;) {
                PatternTerm object = parse_pattern_term(false);
                ast_.where.push_back({subject, predicate, object});
                if (punct(",")) {
                    ++i_;
                    continue;
                }
                break;
            }
            if (punct(";")) {
                ++i_;
                while (punct(";")) ++i_;
                if (punct(".")) {
                    ++i_;
                    return;
                }
                if (punct("}")) return;  // trailing ';' before block end
                continue;
            }
            if (punct(".")) {
                ++i_;
                return;
            }
            if (punct("}")) return;  // final dot is optional
            fail("expected ';', ',', '.' or '}' after object");
        }
    }

    PatternTerm parse_predicate() {
        if (cur().kind == Token::Word && word_is(cur(), "A")) {
            ++i_;
            return Term{Iri{rdf::type}};
        }
        check_unsupported_keyword();
        PatternTerm p = parse_pattern_term(false);
        if (std::holds_alternative<Term>(p) && is_literal(std::get<Term>(p)))
            fail("literal cannot be a predicate");
        if (punct("*") || punct("+") || punct("/"))
            throw UnsupportedFeature("property paths");
        return p;
    }

    // expr := and_expr ('||' and_expr)*
    FilterExpr parse_filter_expr() {
        FilterExpr left = parse_and_expr();
        if (!punct("||")) return left;
        FilterExpr node;
        node.kind = FilterExpr::Kind::Or;
        node.children.push_back(std::move(left));
        while (punct("||")) {
            ++i_;
            node.children.push_back(parse_and_expr());
        }
        return node;
    }

    FilterExpr parse_and_expr() {
        FilterExpr left = parse_unary_expr();
        if (!punct("&&")) return left;
        FilterExpr node;
        node.kind = FilterExpr::Kind::And;
        node.children.push_back(std::move(left));
        while (punct("&&")) {
            ++i_;
            node.children.push_back(parse_unary_expr());
        }
        return node;
    }

    FilterExpr parse_unary_expr() {
        if (punct("!")) {
            ++i_;
            FilterExpr node;
            node.kind = FilterExpr::Kind::Not;
            node.children.push_back(parse_unary_expr());
            return node;
        }
        return parse_primary_expr();
    }

    FilterExpr parse_primary_expr() {
        if (punct("(")) {
            ++i_;
            FilterExpr inner = parse_filter_expr();
            expect_punct(")", "to close filter expression");
            return inner;
        }
        if (word_is(cur(), "BOUND")) {
            ++i_;
            expect_punct("(", "after bound");
            if (cur().kind != Token::Var) fail("bound() takes a variable");
            FilterExpr node;
            node.kind = FilterExpr::Kind::Bound;
            node.bound_var = next_token().text;
            expect_punct(")", "after bound variable");
            return node;
        }
        if (word_is(cur(), "REGEX") || word_is(cur(), "STR") || word_is(cur(), "LANG") ||
            word_is(cur(), "DATATYPE") || word_is(cur(), "IN"))
            throw UnsupportedFeature(cur().text);

        FilterExpr node;
        node.kind = FilterExpr::Kind::Compare;
        node.lhs = parse_operand();
        if (cur().kind != Token::Punct) fail("expected comparison operator");
        const std::string& op = cur().text;
        if (op == "<") node.cmp = CmpOp::Lt;
        else if (op == "<=") node.cmp = CmpOp::Le;
        else if (op == "=") node.cmp = CmpOp::Eq;
        else if (op == "!=") node.cmp = CmpOp::Ne;
        else if (op == ">=") node.cmp = CmpOp::Ge;
        else if (op == ">") node.cmp = CmpOp::Gt;
        else fail("expected comparison operator, found '" + op + "'");
        ++i_;
        node.rhs = parse_operand();
        return node;
    }

    FilterExpr::Operand parse_operand() {
        FilterExpr::Operand op;
        const Token& t = cur();
        switch (t.kind) {
            case Token::Var:
                op.var = t.text;
                ++i_;
                return op;
            case Token::Num:
                op.term = Term{Literal{t.text, t.num_datatype, {}}};
                ++i_;
                return op;
            case Token::Str: {
                Token s = next_token();
                op.term = Term{make_str_literal(s)};
                return op;
            }
            case Token::Iri:
                op.term = Term{Iri{t.text}};
                ++i_;
                return op;
            case Token::PName:
                op.term = Term{resolve_pname(t.text)};
                ++i_;
                return op;
            case Token::Word:
                if (word_is(t, "TRUE") || word_is(t, "FALSE")) {
                    op.term = Term{Literal{word_is(t, "TRUE") ? "true" : "false",
                                           xsd::boolean_dt, {}}};
                    ++i_;
                    return op;
                }
                [[fallthrough]];
            default:
                fail("expected filter operand");
        }
    }

    void parse_modifiers() {
        if (word_is(cur(), "GROUP")) {
            ++i_;
            if (!word_is(cur(), "BY")) fail("expected BY after GROUP");
            ++i_;
            while (cur().kind == Token::Var) ast_.group_by.push_back(next_token().text);
            if (ast_.group_by.empty()) fail("GROUP BY needs at least one variable");
        }
        if (word_is(cur(), "HAVING")) throw UnsupportedFeature("HAVING");
        if (word_is(cur(), "ORDER")) {
            ++i_;
            if (!word_is(cur(), "BY")) fail("expected BY after ORDER");
            ++i_;
            for (;;) {
                QueryAst::OrderKey key;
                if (word_is(cur(), "ASC") || word_is(cur(), "DESC")) {
                    key.ascending = word_is(cur(), "ASC");
                    ++i_;
                    expect_punct("(", "after ASC/DESC");
                    if (cur().kind != Token::Var) fail("expected variable in order key");
                    key.column = next_token().text;
                    expect_punct(")", "after order key");
                } else if (cur().kind == Token::Var) {
                    key.column = next_token().text;
                } else {
                    break;
                }
                ast_.order_by.push_back(std::move(key));
            }
            if (ast_.order_by.empty()) fail("ORDER BY needs at least one key");
        }
        for (int k = 0; k < 2; ++k) {
            if (word_is(cur(), "LIMIT")) {
                ++i_;
                ast_.limit = parse_count("LIMIT");
            } else if (word_is(cur(), "OFFSET")) {
                ++i_;
                ast_.offset = parse_count("OFFSET");
            }
        }
    }

    std::size_t parse_count(const char* what) {
        if (cur().kind != Token::Num || cur().num_datatype != xsd::integer_dt ||
            cur().text.find('-') != std::string::npos)
            fail(std::string(what) + " needs a non-negative integer");
        return static_cast<std::size_t>(std::stoull(next_token().text));
    }

    void validate() {
        std::set<std::string> aliases;
        bool has_agg = ast_.has_aggregates();
        for (const auto& p : ast_.projection) {
            if (!aliases.insert(p.alias).second) fail("duplicate result column '" + p.alias + "'");
            if (!p.fn && has_agg) {
                bool grouped = std::find(ast_.group_by.begin(), ast_.group_by.end(), p.var) !=
                               ast_.group_by.end();
                if (!grouped)
                    fail("variable ?" + p.var + " must appear in GROUP BY to be projected");
            }
            if (!p.fn && !has_agg && !ast_.group_by.empty()) {
                if (std::find(ast_.group_by.begin(), ast_.group_by.end(), p.var) ==
                    ast_.group_by.end())
                    fail("variable ?" + p.var + " must appear in GROUP BY to be projected");
            }
        }
        if (ast_.select_all && (has_agg || !ast_.group_by.empty()))
            fail("SELECT * cannot be combined with aggregation");

        std::set<std::string> columns;
        if (ast_.select_all) {
            for (const auto& w : ast_.where)
                for (const PatternTerm* pt : {&w.s, &w.p, &w.o})
                    if (auto* v = std::get_if<Variable>(pt)) columns.insert(v->name);
        } else {
            for (const auto& p : ast_.projection) columns.insert(p.alias);
        }
        for (const auto& key : ast_.order_by)
            if (!columns.count(key.column))
                fail("ORDER BY key ?" + key.column + " is not a result column");
    }
};

// ------------------------------------------------------------ evaluator --

// Comparison categories for total filter semantics.
enum class ValueCat { Numeric, Date, String, Boolean, IriRef, Blank, Other };

ValueCat category_of(const Term& t) {
    if (is_iri(t)) return ValueCat::IriRef;
    if (is_blank(t)) return ValueCat::Blank;
    const auto& l = std::get<Literal>(t);
    if (is_numeric_datatype(l.datatype)) return ValueCat::Numeric;
    if (l.datatype == xsd::date_dt) return ValueCat::Date;
    if (l.datatype == xsd::string_dt || l.datatype == rdf::lang_string_dt)
        return ValueCat::String;
    if (l.datatype == xsd::boolean_dt) return ValueCat::Boolean;
    return ValueCat::Other;
}

// Comparison with numeric priority: numerics by value below everything
// else, then plain term order. Used by MIN/MAX and ORDER BY.
bool value_less(const Term& a, const Term& b) {
    bool na = category_of(a) == ValueCat::Numeric, nb = category_of(b) == ValueCat::Numeric;
    if (na && nb) {
        double va = numeric_value(std::get<Literal>(a)), vb = numeric_value(std::get<Literal>(b));
        bool nan_a = std::isnan(va), nan_b = std::isnan(vb);
        if (nan_a != nan_b) return nan_a;  // NaN sorts first, deterministically
        if (!nan_a) {
            if (va < vb) return true;
            if (vb < va) return false;
        }
        return a < b;
    }
    if (na != nb) return na;
    return a < b;
}

class Evaluator {
public:
    Evaluator(const QueryAst& ast, const Store& store, std::optional<Deadline> deadline)
        : ast_(ast), store_(store), deadline_(deadline) {}

    SolutionTable run() {
        assign_slots();
        join_patterns();
        apply_filters();
        if (ast_.grouped()) return aggregate();
        return project_plain();
    }

private:
    const QueryAst& ast_;
    const Store& store_;
    std::optional<Deadline> deadline_;
    std::size_t work_ = 0;

    std::map<std::string, int> slot_of_;
    std::vector<std::string> vars_in_order_;
    using Frame = std::vector<std::optional<Store::TermId>>;
    std::vector<Frame> frames_;

    void tick() {
        if (!deadline_ || (++work_ & 0x3FF) != 0) return;
        if (std::chrono::steady_clock::now() > *deadline_) throw EvalTimeout();
    }

    int slot(const std::string& name) {
        auto [it, fresh] = slot_of_.emplace(name, static_cast<int>(vars_in_order_.size()));
        if (fresh) vars_in_order_.push_back(name);
        return it->second;
    }

    void assign_slots() {
        for (const auto& w : ast_.where)
            for (const PatternTerm* pt : {&w.s, &w.p, &w.o})
                if (auto* v = std::get_if<Variable>(pt)) slot(v->name);
        // Filter/group/projection variables that never occur in a pattern
        // still need slots; they just stay unbound.
        auto touch_expr = [&](const FilterExpr& e, auto&& self) -> void {
            if (e.kind == FilterExpr::Kind::Bound) slot(e.bound_var);
            if (e.kind == FilterExpr::Kind::Compare) {
                if (e.lhs.var) slot(*e.lhs.var);
                if (e.rhs.var) slot(*e.rhs.var);
            }
            for (const auto& c : e.children) self(c, self);
        };
        for (const auto& f : ast_.filters) touch_expr(f, touch_expr);
        for (const auto& g : ast_.group_by) slot(g);
        for (const auto& p : ast_.projection) slot(p.var);
    }

    struct CompiledPattern {
        // Per position: either a constant id (resolved), or a var slot.
        struct Pos {
            std::optional<Store::TermId> constant;
            int var_slot = -1;
            bool unmatched_constant = false;  // constant not in dictionary
        };
        Pos s, p, o;
    };

    CompiledPattern compile(const TriplePatternTemplate& t) {
        CompiledPattern c;
        auto fill = [&](const PatternTerm& pt, CompiledPattern::Pos& pos) {
            if (auto* v = std::get_if<Variable>(&pt)) {
                pos.var_slot = slot_of_.at(v->name);
            } else {
                auto id = store_.find_id(std::get<Term>(pt));
                if (id) pos.constant = *id;
                else pos.unmatched_constant = true;
            }
        };
        fill(t.s, c.s);
        fill(t.p, c.p);
        fill(t.o, c.o);
        return c;
    }

    // Number of positions already fixed by constants or bound variables.
    static int boundness(const CompiledPattern& c, const std::vector<bool>& bound) {
        int n = 0;
        for (const auto* pos : {&c.s, &c.p, &c.o}) {
            if (pos->constant || pos->unmatched_constant) ++n;
            else if (pos->var_slot >= 0 && bound[pos->var_slot]) ++n;
        }
        return n;
    }

    void join_patterns() {
        frames_.assign(1, Frame(vars_in_order_.size()));
        std::vector<CompiledPattern> remaining;
        remaining.reserve(ast_.where.size());
        for (const auto& w : ast_.where) remaining.push_back(compile(w));

        std::vector<bool> bound(vars_in_order_.size(), false);
        while (!remaining.empty() && !frames_.empty()) {
            // Greedy: most-bound pattern first; ties keep query order.
            std::size_t best = 0;
            int best_score = -1;
            for (std::size_t k = 0; k < remaining.size(); ++k) {
                int s = boundness(remaining[k], bound);
                if (s > best_score) {
                    best_score = s;
                    best = k;
                }
            }
            CompiledPattern pat = remaining[best];
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
            extend_frames(pat);
            for (const auto* pos : {&pat.s, &pat.p, &pat.o})
                if (pos->var_slot >= 0) bound[pos->var_slot] = true;
        }
    }

    void extend_frames(const CompiledPattern& pat) {
        if (pat.s.unmatched_constant || pat.p.unmatched_constant || pat.o.unmatched_constant) {
            frames_.clear();
            return;
        }
        std::vector<Frame> out;
        for (const Frame& f : frames_) {
            Store::IdPattern idp;
            auto fixed = [&](const CompiledPattern::Pos& pos) -> std::optional<Store::TermId> {
                if (pos.constant) return pos.constant;
                if (pos.var_slot >= 0 && f[pos.var_slot]) return f[pos.var_slot];
                return std::nullopt;
            };
            idp.s = fixed(pat.s);
            idp.p = fixed(pat.p);
            idp.o = fixed(pat.o);
            for (const auto& t : store_.scan(idp)) {
                tick();
                if (idp.s && t.s != *idp.s) continue;
                if (idp.p && t.p != *idp.p) continue;
                if (idp.o && t.o != *idp.o) continue;
                Frame g = f;
                if (!bind(g, pat.s, t.s) || !bind(g, pat.p, t.p) || !bind(g, pat.o, t.o))
                    continue;
                out.push_back(std::move(g));
            }
        }
        frames_ = std::move(out);
    }

    static bool bind(Frame& f, const CompiledPattern::Pos& pos, Store::TermId value) {
        if (pos.var_slot < 0) return true;  // constant already matched by scan
        auto& cell = f[pos.var_slot];
        if (cell) return *cell == value;  // repeated variable must agree
        cell = value;
        return true;
    }

    // --- filters ---

    std::optional<Term> operand_value(const FilterExpr::Operand& op, const Frame& f) const {
        if (op.term) return *op.term;
        auto it = slot_of_.find(*op.var);
        if (it == slot_of_.end() || !f[it->second]) return std::nullopt;
        return store_.term(*f[it->second]);
    }

    static bool compare(CmpOp op, const Term& a, const Term& b) {
        ValueCat ca = category_of(a), cb = category_of(b);
        if (ca != cb) return false;  // cross-kind comparisons are false
        int sign;
        switch (ca) {
            case ValueCat::Numeric: {
                double va = numeric_value(std::get<Literal>(a));
                double vb = numeric_value(std::get<Literal>(b));
                if (std::isnan(va) || std::isnan(vb)) return false;
                sign = va < vb ? -1 : va > vb ? 1 : 0;
                break;
            }
            case ValueCat::Date: {
                // ISO lexicals compare chronologically.
                const auto& la = std::get<Literal>(a).lexical;
                const auto& lb = std::get<Literal>(b).lexical;
                sign = la < lb ? -1 : la > lb ? 1 : 0;
                break;
            }
            case ValueCat::String: {
                const auto& la = std::get<Literal>(a).lexical;
                const auto& lb = std::get<Literal>(b).lexical;
                sign = la < lb ? -1 : la > lb ? 1 : 0;
                break;
            }
            case ValueCat::Boolean: {
                int va = std::get<Literal>(a).lexical == "true" ||
                         std::get<Literal>(a).lexical == "1";
                int vb = std::get<Literal>(b).lexical == "true" ||
                         std::get<Literal>(b).lexical == "1";
                sign = va - vb;
                break;
            }
            default:
                // IRIs, blanks, unknown datatypes: only (in)equality.
                if (op == CmpOp::Eq) return a == b;
                if (op == CmpOp::Ne) return !(a == b);
                return false;
        }
        switch (op) {
            case CmpOp::Lt: return sign < 0;
            case CmpOp::Le: return sign <= 0;
            case CmpOp::Eq: return sign == 0;
            case CmpOp::Ne: return sign != 0;
            case CmpOp::Ge: return sign >= 0;
            case CmpOp::Gt: return sign > 0;
        }
        return false;
    }

    bool eval_filter(const FilterExpr& e, const Frame& f) const {
        switch (e.kind) {
            case FilterExpr::Kind::Compare: {
                auto a = operand_value(e.lhs, f);
                auto b = operand_value(e.rhs, f);
                if (!a || !b) return false;  // unbound operand
                return compare(e.cmp, *a, *b);
            }
            case FilterExpr::Kind::And:
                for (const auto& c : e.children)
                    if (!eval_filter(c, f)) return false;
                return true;
            case FilterExpr::Kind::Or:
                for (const auto& c : e.children)
                    if (eval_filter(c, f)) return true;
                return false;
            case FilterExpr::Kind::Not:
                return !eval_filter(e.children.front(), f);
            case FilterExpr::Kind::Bound: {
                auto it = slot_of_.find(e.bound_var);
                return it != slot_of_.end() && f[it->second].has_value();
            }
        }
        return false;
    }

    void apply_filters() {
        if (ast_.filters.empty()) return;
        std::vector<Frame> kept;
        kept.reserve(frames_.size());
        for (auto& f : frames_) {
            tick();
            bool ok = true;
            for (const auto& flt : ast_.filters)
                if (!eval_filter(flt, f)) {
                    ok = false;
                    break;
                }
            if (ok) kept.push_back(std::move(f));
        }
        frames_ = std::move(kept);
    }

    // --- output ---

    std::optional<Term> cell(const Frame& f, const std::string& var) const {
        auto it = slot_of_.find(var);
        if (it == slot_of_.end() || !f[it->second]) return std::nullopt;
        return store_.term(*f[it->second]);
    }

    SolutionTable finish(SolutionTable table) const {
        if (ast_.distinct) {
            std::set<std::vector<std::optional<Term>>> seen;
            std::vector<std::vector<std::optional<Term>>> unique;
            for (auto& r : table.rows)
                if (seen.insert(r).second) unique.push_back(std::move(r));
            table.rows = std::move(unique);
        }
        if (!ast_.order_by.empty()) {
            std::vector<int> key_cols;
            for (const auto& k : ast_.order_by) {
                auto it = std::find(table.variables.begin(), table.variables.end(), k.column);
                key_cols.push_back(static_cast<int>(it - table.variables.begin()));
            }
            std::stable_sort(table.rows.begin(), table.rows.end(),
                             [&](const auto& a, const auto& b) {
                                 for (std::size_t k = 0; k < key_cols.size(); ++k) {
                                     const auto& ca = a[key_cols[k]];
                                     const auto& cb = b[key_cols[k]];
                                     bool asc = ast_.order_by[k].ascending;
                                     if (!ca && !cb) continue;
                                     if (!ca || !cb) return asc ? !ca : !cb;
                                     if (value_less(*ca, *cb)) return asc;
                                     if (value_less(*cb, *ca)) return !asc;
                                 }
                                 return false;
                             });
        }
        std::size_t from = std::min(ast_.offset.value_or(0), table.rows.size());
        std::size_t count = ast_.limit.value_or(table.rows.size() - from);
        count = std::min(count, table.rows.size() - from);
        if (from != 0 || count != table.rows.size()) {
            std::vector<std::vector<std::optional<Term>>> window(
                std::make_move_iterator(table.rows.begin() + static_cast<std::ptrdiff_t>(from)),
                std::make_move_iterator(table.rows.begin() +
                                        static_cast<std::ptrdiff_t>(from + count)));
            table.rows = std::move(window);
        }
        return table;
    }

    SolutionTable project_plain() const {
        SolutionTable table;
        std::vector<std::string> cols;
        if (ast_.select_all) {
            for (const auto& w : ast_.where)
                for (const PatternTerm* pt : {&w.s, &w.p, &w.o})
                    if (auto* v = std::get_if<Variable>(pt))
                        if (std::find(cols.begin(), cols.end(), v->name) == cols.end())
                            cols.push_back(v->name);
        } else {
            for (const auto& p : ast_.projection) cols.push_back(p.alias);
        }
        table.variables = cols;
        table.rows.reserve(frames_.size());
        for (const auto& f : frames_) {
            std::vector<std::optional<Term>> row;
            row.reserve(cols.size());
            if (ast_.select_all) {
                for (const auto& c : cols) row.push_back(cell(f, c));
            } else {
                for (const auto& p : ast_.projection) row.push_back(cell(f, p.var));
            }
            table.rows.push_back(std::move(row));
        }
        return finish(std::move(table));
    }

    static std::string format_decimal(double v) {
        if (v == 0) return "0";
        if (std::floor(v) == v && std::fabs(v) < 9e15)
            return std::to_string(static_cast<long long>(v));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12f", v);
        std::string s = buf;
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        if (s == "-0") s = "0";
        return s;
    }

    std::optional<Term> compute_aggregate(const Projection& p,
                                          const std::vector<const Frame*>& group) const {
        double sum = 0;
        std::size_t numeric_count = 0, bound_count = 0;
        bool all_integer = true;
        std::optional<Term> min_term, max_term;
        for (const Frame* f : group) {
            auto value = cell(*f, p.var);
            if (!value) continue;
            ++bound_count;
            if (!min_term || value_less(*value, *min_term)) min_term = value;
            if (!max_term || value_less(*max_term, *value)) max_term = value;
            if (auto* l = std::get_if<Literal>(&*value); l && is_numeric_datatype(l->datatype)) {
                try {
                    sum += numeric_value(*l);
                    ++numeric_count;
                    if (l->datatype != xsd::integer_dt) all_integer = false;
                } catch (const NotNumeric&) {
                    // skip values whose lexical does not actually parse
                }
            }
        }
        switch (*p.fn) {
            case AggFn::Count:
                return Term{integer_literal(static_cast<long long>(bound_count))};
            case AggFn::Sum:
                if (numeric_count == 0) return Term{integer_literal(0)};
                if (all_integer)
                    return Term{integer_literal(static_cast<long long>(sum))};
                return Term{Literal{format_decimal(sum), xsd::decimal_dt, {}}};
            case AggFn::Avg:
                if (numeric_count == 0) return std::nullopt;
                return Term{Literal{format_decimal(sum / static_cast<double>(numeric_count)),
                                    xsd::decimal_dt, {}}};
            case AggFn::Min:
                return min_term;
            case AggFn::Max:
                return max_term;
        }
        return std::nullopt;
    }

    SolutionTable aggregate() const {
        SolutionTable table;
        for (const auto& p : ast_.projection) table.variables.push_back(p.alias);

        using Key = std::vector<std::optional<Term>>;
        std::map<Key, std::vector<const Frame*>> groups;  // key order = term order
        if (ast_.group_by.empty()) {
            auto& g = groups[{}];  // single implicit group, present even when empty
            for (const auto& f : frames_) g.push_back(&f);
        } else {
            for (const auto& f : frames_) {
                Key key;
                key.reserve(ast_.group_by.size());
                for (const auto& v : ast_.group_by) key.push_back(cell(f, v));
                groups[std::move(key)].push_back(&f);
            }
        }

        for (const auto& [key, members] : groups) {
            std::vector<std::optional<Term>> row;
            row.reserve(ast_.projection.size());
            for (const auto& p : ast_.projection) {
                if (p.fn) {
                    row.push_back(compute_aggregate(p, members));
                } else {
                    auto it = std::find(ast_.group_by.begin(), ast_.group_by.end(), p.var);
                    row.push_back(key[static_cast<std::size_t>(it - ast_.group_by.begin())]);
                }
            }
            table.rows.push_back(std::move(row));
        }
        return finish(std::move(table));
    }
};

// ----------------------------------------------------------- serializer --

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string cell_text(const Term& t) {
    if (auto* i = std::get_if<Iri>(&t)) return i->value;
    if (auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->label;
    return std::get<Literal>(t).lexical;
}

}  // namespace

bool QueryAst::has_aggregates() const {
    return std::any_of(projection.begin(), projection.end(),
                       [](const Projection& p) { return p.fn.has_value(); });
}

QueryAst parse_query(const std::string& text) { return QueryParser(text).parse(); }

SolutionTable evaluate(const QueryAst& ast, const Store& store,
                       std::optional<Deadline> deadline) {
    return Evaluator(ast, store, deadline).run();
}

std::string serialize_results(const SolutionTable& table, ResultFormat format) {
    if (format == ResultFormat::Csv) {
        std::string out;
        for (std::size_t i = 0; i < table.variables.size(); ++i) {
            if (i) out += ',';
            out += csv_field(table.variables[i]);
        }
        out += "\r\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                if (row[i]) out += csv_field(cell_text(*row[i]));
            }
            out += "\r\n";
        }
        return out;
    }

    nlohmann::ordered_json body;
    body["head"]["vars"] = table.variables;
    auto& bindings = body["results"]["bindings"];
    bindings = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!row[i]) continue;  // unbound cells are omitted
            const Term& t = *row[i];
            nlohmann::ordered_json cell;
            if (auto* iri = std::get_if<Iri>(&t)) {
                cell["type"] = "uri";
                cell["value"] = iri->value;
            } else if (auto* b = std::get_if<BlankNode>(&t)) {
                cell["type"] = "bnode";
                cell["value"] = b->label;
            } else {
                const auto& l = std::get<Literal>(t);
                cell["type"] = "literal";
                cell["value"] = l.lexical;
                if (!l.lang.empty()) cell["xml:lang"] = l.lang;
                else if (l.datatype != xsd::string_dt) cell["datatype"] = l.datatype;
            }
            obj[table.variables[i]] = std::move(cell);
        }
        bindings.push_back(std::move(obj));
    }
    return body.dump(2) + "\n";
}

}  // namespace rockb
