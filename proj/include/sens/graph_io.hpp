#pragma once
// Line-based graph serialization.
//
//   :Subject :predicate :Object .
//   << :ProductA :needsProduct :Product1.1 >> :needsQuantity 3 .
//   :Order00001 :hasDeliveryTime "12"^^timestep .
//
// One triple per line, LF endings, lines sorted lexicographically. Integers
// and decimals are written bare; strings are quoted; booleans and timesteps
// carry a ^^tag. Blank lines and lines starting with '#' are ignored on input.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sens/graph.hpp"
#include "sens/term.hpp"

namespace sens {

class GraphParseError : public std::runtime_error {
public:
    GraphParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline std::string serialize(const Graph& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    g.for_each([&](const Triple& t) { lines.push_back(to_string(t) + " ."); });
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

inline std::optional<Datatype> datatype_from_tag(std::string_view tag) {
    if (tag.starts_with("xsd:")) tag.remove_prefix(4);
    if (tag == "integer" || tag == "int" || tag == "long") return Datatype::Integer;
    if (tag == "decimal" || tag == "double" || tag == "float") return Datatype::Decimal;
    if (tag == "string") return Datatype::String;
    if (tag == "boolean") return Datatype::Boolean;
    if (tag == "timestep" || tag == "dateTime") return Datatype::Timestep;
    return std::nullopt;
}

// Builds a literal from a lexical form and a datatype; throws
// std::invalid_argument when the lexical form does not fit the type.
inline Term make_literal(std::string_view lexical, Datatype type) {
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty())
            throw std::invalid_argument("invalid integer '" + std::string(lexical) + "'");
        return v;
    };
    switch (type) {
        case Datatype::Integer: return Term::integer(parse_int(lexical));
        case Datatype::Timestep: return Term::timestep(parse_int(lexical));
        case Datatype::Decimal: {
            std::string_view s = lexical;
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            double v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || s.empty())
                throw std::invalid_argument("invalid decimal '" + std::string(lexical) + "'");
            return Term::decimal(v);
        }
        case Datatype::Boolean:
            if (lexical == "true" || lexical == "True" || lexical == "1") return Term::boolean(true);
            if (lexical == "false" || lexical == "False" || lexical == "0") return Term::boolean(false);
            throw std::invalid_argument("invalid boolean '" + std::string(lexical) + "'");
        case Datatype::String: return Term::string(std::string(lexical));
    }
    throw std::invalid_argument("unknown datatype");
}

// Numeric token: decimal when it has a fraction or exponent, integer otherwise.
inline Term make_number(std::string_view text) {
    bool decimal = text.find_first_of(".eE") != std::string_view::npos;
    return make_literal(text, decimal ? Datatype::Decimal : Datatype::Integer);
}

class LineParser {
public:
    LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    Triple triple() {
        Term s = term();
        Term p = term();
        Term o = term();
        return Triple{std::move(s), std::move(p), std::move(o)};
    }

    Term term() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of line, expected a term");
        char c = s_[pos_];
        if (c == '<' && peek(1) == '<') {
            pos_ += 2;
            Triple inner = triple();
            skip();
            if (!(peek(0) == '>' && peek(1) == '>')) fail("expected '>>' to close quoted triple");
            pos_ += 2;
            return Term::quoted(std::move(inner));
        }
        if (c == ':') {
            ++pos_;
            std::string name = word();
            if (name.empty()) fail("empty IRI name");
            return Term::iri(std::move(name));
        }
        if (c == '"') return string_literal();
        if (c == '?' || c == '$') fail("variables are not allowed in a graph");
        std::string w = word();
        if (w == "a" || w == "rdf:type") return Term::iri("type");
        if (w == "true") return Term::boolean(true);
        if (w == "false") return Term::boolean(false);
        if (!w.empty() && (std::isdigit(static_cast<unsigned char>(w[0])) || w[0] == '-' || w[0] == '+')) {
            try {
                return make_number(w);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
        fail("unexpected token '" + w + "'");
    }

    void expect_end() {
        skip();
        if (peek(0) != '.') fail("expected '.' at end of statement");
        ++pos_;
        skip();
        if (pos_ < s_.size()) fail("trailing characters after '.'");
    }

    void skip() {
        while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
    }

    // A run of non-space characters, stopping before a closing '>>'.
    std::string word() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && !is_space(s_[pos_]) && !(s_[pos_] == '>' && peek(1) == '>'))
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Term string_literal() {
        ++pos_;  // opening quote
        std::string value;
        for (;;) {
            if (pos_ >= s_.size()) fail("unterminated string literal");
            char c = s_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= s_.size()) fail("unterminated escape");
                char e = s_[pos_++];
                switch (e) {
                    case 'n': value += '\n'; break;
                    case 'r': value += '\r'; break;
                    case 't': value += '\t'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default: fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                value += c;
            }
        }
        if (peek(0) == '^' && peek(1) == '^') {
            pos_ += 2;
            std::string tag = word();
            auto type = datatype_from_tag(tag);
            if (!type) fail("unknown datatype tag '" + tag + "'");
            try {
                return make_literal(value, *type);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
        return Term::string(std::move(value));
    }

    [[noreturn]] void fail(const std::string& msg) const { throw GraphParseError(line_, msg); }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

}  // namespace detail

// Parses a single term in the graph syntax (used for command-line values).
inline Term parse_term(std::string_view text) {
    detail::LineParser p(text, 1);
    Term t = p.term();
    p.skip();
    return t;
}

inline Graph parse_graph(std::string_view text) {
    Graph g;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] != '#') {
            detail::LineParser p(line, line_no);
            Triple t = p.triple();
            p.expect_end();
            try {
                g.insert(t);
            } catch (const MalformedTriple& e) {
                throw GraphParseError(line_no, e.what());
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return g;
}

}  // namespace sens
