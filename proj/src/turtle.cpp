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
#include "rockb/turtle.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace rockb {

namespace {

void utf8_append(std::string& out, unsigned int cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool pn_local_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '%' ||
           c == '.' || c == ':';
}

class Parser {
public:
    Parser(const std::string& text, RdfSyntax syntax,
           const std::function<void(Triple&&)>& sink,
           const std::function<void(const std::string&, const std::string&)>& prefix_sink)
        : text_(text), syntax_(syntax), sink_(sink), prefix_sink_(prefix_sink) {}

    void run() {
        for (;;) {
            skip_ws();
            if (eof()) return;
            if (syntax_ == RdfSyntax::Turtle && peek() == '@') {
                parse_prefix_decl();
            } else {
                parse_statement();
            }
        }
    }

private:
    const std::string& text_;
    RdfSyntax syntax_;
    const std::function<void(Triple&&)>& sink_;
    const std::function<void(const std::string&, const std::string&)>& prefix_sink_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    std::map<std::string, std::string> prefixes_;

    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw SyntaxError(ParseDiagnostic{line_, col_, message});
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    void expect(char c, const char* what) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "' " + what);
        advance();
    }

    // @prefix name: <iri> .
    void parse_prefix_decl() {
        for (const char* kw = "@prefix"; *kw; ++kw)
            if (eof() || advance() != *kw) fail("expected @prefix directive");
        if (!std::isspace(static_cast<unsigned char>(peek()))) fail("expected whitespace after @prefix");
        skip_ws();
        std::string name;
        while (!eof() && peek() != ':') {
            char c = peek();
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
                fail("invalid character in prefix name");
            name.push_back(advance());
        }
        expect(':', "after prefix name");
        skip_ws();
        std::string iri = parse_iriref();
        skip_ws();
        expect('.', "after prefix declaration");
        prefixes_[name] = iri;
        if (prefix_sink_) prefix_sink_(name, iri);
    }

    std::string parse_iriref() {
        int l = line_, c = col_;
        expect('<', "to open IRI");
        std::string out;
        for (;;) {
            if (eof()) fail("unterminated IRI");
            char ch = advance();
            if (ch == '>') break;
            if (ch == '\\') {
                out += parse_uchar_escape();
            } else if (static_cast<unsigned char>(ch) <= 0x20) {
                fail("whitespace or control character inside IRI");
            } else {
                out.push_back(ch);
            }
        }
        if (!is_valid_iri(out))
            throw SyntaxError(ParseDiagnostic{l, c, "relative or malformed IRI <" + out + ">"});
        return out;
    }

    std::string parse_uchar_escape() {
        if (eof() || peek() != 'u') fail("only \\uXXXX escapes are allowed in IRIs");
        advance();
        return decode_u_hex();
    }

    std::string decode_u_hex() {
        unsigned int cp = 0;
        for (int i = 0; i < 4; ++i) {
            if (eof() || !std::isxdigit(static_cast<unsigned char>(peek())))
                fail("\\u escape needs four hex digits");
            char c = advance();
            cp = cp * 16 + static_cast<unsigned int>(
                               std::isdigit(static_cast<unsigned char>(c))
                                   ? c - '0'
                                   : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
        }
        std::string out;
        utf8_append(out, cp);
        return out;
    }

    // Reads a prefixed name after the tokenizer saw its first character.
    Iri parse_pname() {
        if (syntax_ == RdfSyntax::NTriples) fail("prefixed names are not allowed in N-Triples");
        std::string prefix;
        while (!eof() && peek() != ':') {
            char c = peek();
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) break;
            prefix.push_back(advance());
        }
        if (eof() || peek() != ':') fail("expected ':' in prefixed name");
        advance();
        std::string local;
        while (!eof() && pn_local_char(peek())) local.push_back(advance());
        // Trailing dots belong to the statement terminator, not the name.
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
            --col_;
        }
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail("unknown prefix '" + prefix + ":'");
        std::string full = it->second + local;
        if (!is_valid_iri(full)) fail("prefixed name expands to malformed IRI <" + full + ">");
        return Iri{full};
    }

    BlankNode parse_blank() {
        advance();  // '_'
        expect(':', "after '_' in blank node label");
        std::string label;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')
                label.push_back(advance());
            else
                break;
        }
        while (!label.empty() && label.back() == '.') {
            label.pop_back();
            --pos_;
            --col_;
        }
        if (label.empty()) fail("empty blank node label");
        return BlankNode{label};
    }

    Literal parse_quoted_literal() {
        expect('"', "to open literal");
        if (peek() == '"' && peek(1) == '"')
            fail("triple-quoted literals are not supported");
        std::string lex;
        for (;;) {
            if (eof()) fail("unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\n') fail("newline in string literal (use \\n)");
            if (c == '\\') {
                if (eof()) fail("dangling escape at end of input");
                char e = advance();
                switch (e) {
                    case 't': lex.push_back('\t'); break;
                    case 'n': lex.push_back('\n'); break;
                    case 'r': lex.push_back('\r'); break;
                    case '"': lex.push_back('"'); break;
                    case '\\': lex.push_back('\\'); break;
                    case 'u': lex += decode_u_hex(); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                lex.push_back(c);
            }
        }
        if (peek() == '@') {
            advance();
            std::string lang;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                lang.push_back(advance());
            if (lang.empty() || lang.front() == '-' || lang.back() == '-')
                fail("malformed language tag");
            return Literal{lex, rdf::lang_string_dt, lang};
        }
        if (peek() == '^' && peek(1) == '^') {
            advance();
            advance();
            Iri dt = peek() == '<' ? Iri{parse_iriref()} : parse_pname();
            try {
                return make_literal(lex, dt.value);
            } catch (const Error& e) {
                fail(e.what());
            }
        }
        return Literal{lex, xsd::string_dt, {}};
    }

    // Turtle numeric shorthand. The '.' is only part of the number when a
    // digit follows; otherwise it terminates the statement.
    Literal parse_numeric() {
        if (syntax_ == RdfSyntax::NTriples)
            fail("numeric shorthand is not allowed in N-Triples");
        std::string lex;
        if (peek() == '+' || peek() == '-') lex.push_back(advance());
        bool digits = false, dot = false, expo = false;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            lex.push_back(advance());
            digits = true;
        }
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            dot = true;
            lex.push_back(advance());
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                lex.push_back(advance());
                digits = true;
            }
        }
        if ((peek() == 'e' || peek() == 'E') && digits) {
            char sign = peek(1);
            if (std::isdigit(static_cast<unsigned char>(sign)) ||
                ((sign == '+' || sign == '-') &&
                 std::isdigit(static_cast<unsigned char>(peek(2))))) {
                expo = true;
                lex.push_back(advance());
                if (peek() == '+' || peek() == '-') lex.push_back(advance());
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
                    lex.push_back(advance());
            }
        }
        if (!digits) fail("malformed numeric literal");
        const std::string& dt = expo ? xsd::double_dt : dot ? xsd::decimal_dt : xsd::integer_dt;
        return Literal{lex, dt, {}};
    }

    bool at_keyword(const char* kw) const {
        std::size_t i = 0;
        for (; kw[i]; ++i)
            if (peek(i) != kw[i]) return false;
        char after = peek(i);
        return !(std::isalnum(static_cast<unsigned char>(after)) || after == '_' || after == ':');
    }

    Term parse_subject() {
        char c = peek();
        if (c == '<') return Iri{parse_iriref()};
        if (c == '_' && peek(1) == ':') return parse_blank();
        if (c == '"' || std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-')
            fail("literal cannot be a subject");
        return parse_pname();
    }

    Iri parse_predicate() {
        if (peek() == '<') return Iri{parse_iriref()};
        if (syntax_ == RdfSyntax::Turtle && at_keyword("a")) {
            advance();
            return Iri{rdf::type};
        }
        return parse_pname();
    }

    Term parse_object() {
        char c = peek();
        if (c == '<') return Iri{parse_iriref()};
        if (c == '_' && peek(1) == ':') return parse_blank();
        if (c == '"') return parse_quoted_literal();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
            return parse_numeric();
        if (syntax_ == RdfSyntax::Turtle) {
            if (at_keyword("true")) {
                for (int i = 0; i < 4; ++i) advance();
                return Literal{"true", xsd::boolean_dt, {}};
            }
            if (at_keyword("false")) {
                for (int i = 0; i < 5; ++i) advance();
                return Literal{"false", xsd::boolean_dt, {}};
            }
            if (c == '(') fail("collections are not supported");
            if (c == '[') fail("anonymous blank nodes are not supported");
        }
        if (eof()) fail("expected object, found end of input");
        return parse_pname();
    }

    void parse_statement() {
        Term subject = parse_subject();
        for (;;) {
            skip_ws();
            if (eof()) fail("expected predicate, found end of input");
            Iri predicate = parse_predicate();
            for (;;) {
                skip_ws();
                if (eof()) fail("expected object, found end of input");
                Term object = parse_object();
                sink_(Triple(subject, predicate, std::move(object)));
                skip_ws();
                if (syntax_ == RdfSyntax::Turtle && peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
            if (peek() == ';' && syntax_ == RdfSyntax::Turtle) {
                advance();
                skip_ws();
                while (peek() == ';') {  // stray extra separators are legal Turtle
                    advance();
                    skip_ws();
                }
                if (peek() == '.') {
                    advance();
                    return;
                }
                continue;
            }
            if (eof()) fail("expected '.' at end of statement");
            expect('.', "at end of statement");
            return;
        }
    }
};

bool bare_integer_form(const std::string& lex) {
    std::size_t i = (lex[0] == '+' || lex[0] == '-') ? 1 : 0;
    if (i >= lex.size()) return false;
    for (; i < lex.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(lex[i]))) return false;
    return true;
}

// Turtle DECIMAL requires a dot with at least one digit after it.
bool bare_decimal_form(const std::string& lex) {
    std::size_t i = (lex[0] == '+' || lex[0] == '-') ? 1 : 0;
    auto dot = lex.find('.', i);
    if (dot == std::string::npos || dot + 1 >= lex.size()) return false;
    for (std::size_t k = i; k < lex.size(); ++k) {
        if (k == dot) continue;
        if (!std::isdigit(static_cast<unsigned char>(lex[k]))) return false;
    }
    return true;
}

bool bare_double_form(const std::string& lex) {
    auto e = lex.find_first_of("eE");
    if (e == std::string::npos || e == 0 || e + 1 >= lex.size()) return false;
    std::string mantissa = lex.substr(0, e);
    if (!(bare_integer_form(mantissa) || bare_decimal_form(mantissa))) return false;
    std::string expo = lex.substr(e + 1);
    return bare_integer_form(expo);
}

bool pn_local_safe(const std::string& local) {
    if (local.empty()) return true;
    for (char c : local)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

std::string escape_literal(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    static const char* hex = "0123456789ABCDEF";
                    out += "\\u00";
                    out.push_back(hex[c >> 4]);
                    out.push_back(hex[c & 0xF]);
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

class TurtleWriter {
public:
    explicit TurtleWriter(const Graph& g) : graph_(g) {}

    std::string write() {
        std::ostringstream out;
        for (const auto& [name, iri] : graph_.prefixes())
            out << "@prefix " << name << ": <" << iri << "> .\n";
        if (!graph_.prefixes().empty() && !graph_.empty()) out << "\n";

        const Term* current_subject = nullptr;
        const Iri* current_predicate = nullptr;
        for (const auto& t : graph_.triples()) {
            bool same_subject = current_subject && *current_subject == t.subject;
            if (!same_subject) {
                if (current_subject) out << " .\n";
                out << render_term(t.subject) << " " << render_predicate(t.predicate) << " "
                    << render_term(t.object);
            } else if (*current_predicate == t.predicate) {
                out << ", " << render_term(t.object);
            } else {
                out << " ;\n    " << render_predicate(t.predicate) << " "
                    << render_term(t.object);
            }
            current_subject = &t.subject;
            current_predicate = &t.predicate;
        }
        if (current_subject) out << " .\n";
        return out.str();
    }

private:
    const Graph& graph_;

    std::string render_iri(const Iri& iri) const {
        // Longest declared namespace wins; fall back to the full form when
        // the local part would not survive tokenization.
        const std::string* best_name = nullptr;
        std::size_t best_len = 0;
        for (const auto& [name, ns] : graph_.prefixes()) {
            if (ns.size() > best_len && iri.value.compare(0, ns.size(), ns) == 0 &&
                pn_local_safe(iri.value.substr(ns.size()))) {
                best_name = &name;
                best_len = ns.size();
            }
        }
        if (best_name) return *best_name + ":" + iri.value.substr(best_len);
        return "<" + iri.value + ">";
    }

    std::string render_predicate(const Iri& p) const {
        if (p.value == rdf::type) return "a";
        return render_iri(p);
    }

    std::string render_term(const Term& t) const {
        if (auto* i = std::get_if<Iri>(&t)) return render_iri(*i);
        if (auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->label;
        const auto& l = std::get<Literal>(t);
        if (l.datatype == xsd::integer_dt && bare_integer_form(l.lexical)) return l.lexical;
        if (l.datatype == xsd::decimal_dt && bare_decimal_form(l.lexical)) return l.lexical;
        if (l.datatype == xsd::double_dt && bare_double_form(l.lexical)) return l.lexical;
        if (l.datatype == xsd::boolean_dt && (l.lexical == "true" || l.lexical == "false"))
            return l.lexical;
        std::string quoted = "\"" + escape_literal(l.lexical) + "\"";
        if (l.datatype == rdf::lang_string_dt) return quoted + "@" + l.lang;
        if (l.datatype == xsd::string_dt) return quoted;
        return quoted + "^^" + render_iri(Iri{l.datatype});
    }
};

}  // namespace

void parse_rdf(const std::string& text, RdfSyntax syntax,
               const std::function<void(Triple&&)>& sink,
               const std::function<void(const std::string&, const std::string&)>& prefix_sink) {
    Parser(text, syntax, sink, prefix_sink).run();
}

Graph parse_rdf(const std::string& text, RdfSyntax syntax) {
    Graph g;
    parse_rdf(
        text, syntax, [&](Triple&& t) { g.insert(t); },
        [&](const std::string& name, const std::string& iri) { g.add_prefix(name, iri); });
    return g;
}

std::string term_to_ntriples(const Term& t) {
    if (auto* i = std::get_if<Iri>(&t)) return "<" + i->value + ">";
    if (auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->label;
    const auto& l = std::get<Literal>(t);
    std::string out = "\"" + escape_literal(l.lexical) + "\"";
    if (l.datatype == rdf::lang_string_dt) return out + "@" + l.lang;
    if (l.datatype == xsd::string_dt) return out;
    return out + "^^<" + l.datatype + ">";
}

std::string serialize_rdf(const Graph& graph, RdfSyntax syntax) {
    if (syntax == RdfSyntax::NTriples) {
        std::string out;
        for (const auto& t : graph.triples()) {
            out += term_to_ntriples(t.subject);
            out += ' ';
            out += "<" + t.predicate.value + ">";
            out += ' ';
            out += term_to_ntriples(t.object);
            out += " .\n";
        }
        return out;
    }
    return TurtleWriter(graph).write();
}

RdfSyntax syntax_for_path(const std::string& path) {
    if (path.size() >= 3 && path.compare(path.size() - 3, 3, ".nt") == 0)
        return RdfSyntax::NTriples;
    return RdfSyntax::Turtle;
}

}  // namespace rockb
