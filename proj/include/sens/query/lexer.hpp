#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sens::query {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t offset, std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                             ": " + message),
          offset_(offset),
          line_(line),
          column_(column) {}

    std::size_t offset() const { return offset_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t offset_, line_, column_;
};

enum class TokenKind {
    Variable,   // ?name
    Parameter,  // $name
    Iri,        // :name or prefix:name
    Word,       // bare identifier or keyword
    Integer,
    Decimal,
    String,     // "..." with optional ^^tag in `tag`
    Punct,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // name, lexical form or punctuation
    std::string tag;   // datatype tag for typed strings
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is(std::string_view punct) const { return kind == TokenKind::Punct && text == punct; }

    // Case-insensitive keyword test.
    bool is_keyword(std::string_view kw) const {
        if (kind != TokenKind::Word || text.size() != kw.size()) return false;
        for (std::size_t i = 0; i < kw.size(); ++i)
            if (std::toupper(static_cast<unsigned char>(text[i])) != std::toupper(static_cast<unsigned char>(kw[i])))
                return false;
        return true;
    }

    std::string describe() const {
        switch (kind) {
            case TokenKind::End: return "end of input";
            case TokenKind::Variable: return "'?" + text + "'";
            case TokenKind::Parameter: return "'$" + text + "'";
            case TokenKind::Iri: return "':" + text + "'";
            case TokenKind::String: return "string \"" + text + "\"";
            default: return "'" + text + "'";
        }
    }
};

namespace detail {

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
// IRI local names also admit '.', '-' and ':'; a trailing '.' is a terminator.
inline bool is_iri_char(char c) { return is_name_char(c) || c == '.' || c == '-' || c == ':'; }

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view src) {
    using namespace detail;
    std::vector<Token> out;
    std::size_t pos = 0, line = 1, line_start = 0;

    auto fail = [&](std::size_t at, const std::string& msg) {
        throw SyntaxError(at, line, at - line_start + 1, msg);
    };

    while (true) {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '\n') {
                ++pos;
                ++line;
                line_start = pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        Token tok;
        tok.offset = pos;
        tok.line = line;
        tok.column = pos - line_start + 1;
        if (pos >= src.size()) {
            tok.kind = TokenKind::End;
            out.push_back(tok);
            return out;
        }
        char c = src[pos];
        auto peek = [&](std::size_t k) { return pos + k < src.size() ? src[pos + k] : '\0'; };

        if (c == '?' || c == '$') {
            std::size_t start = ++pos;
            while (pos < src.size() && is_name_char(src[pos])) ++pos;
            if (pos == start) fail(start - 1, std::string("expected a name after '") + c + "'");
            tok.kind = c == '?' ? TokenKind::Variable : TokenKind::Parameter;
            tok.text = std::string(src.substr(start, pos - start));
        } else if (c == ':') {
            std::size_t start = ++pos;
            while (pos < src.size() && is_iri_char(src[pos])) ++pos;
            while (pos > start && src[pos - 1] == '.') --pos;
            if (pos == start) fail(start - 1, "expected a name after ':'");
            tok.kind = TokenKind::Iri;
            tok.text = std::string(src.substr(start, pos - start));
        } else if (is_name_start(c)) {
            std::size_t start = pos;
            while (pos < src.size() && is_name_char(src[pos])) ++pos;
            // prefix:name
            if (pos + 1 < src.size() && src[pos] == ':' && is_iri_char(src[pos + 1])) {
                ++pos;
                while (pos < src.size() && is_iri_char(src[pos])) ++pos;
                while (src[pos - 1] == '.') --pos;
                std::string full(src.substr(start, pos - start));
                tok.kind = TokenKind::Iri;
                tok.text = full == "rdf:type" ? "type" : full;
            } else {
                tok.kind = TokenKind::Word;
                tok.text = std::string(src.substr(start, pos - start));
            }
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            std::size_t start = pos;
            bool decimal = false;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos < src.size() && src[pos] == '.' && pos + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[pos + 1]))) {
                decimal = true;
                ++pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            }
            if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
                std::size_t save = pos++;
                if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
                if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                    decimal = true;
                    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
                } else {
                    pos = save;
                }
            }
            tok.kind = decimal ? TokenKind::Decimal : TokenKind::Integer;
            tok.text = std::string(src.substr(start, pos - start));
        } else if (c == '"') {
            ++pos;
            std::string value;
            for (;;) {
                if (pos >= src.size()) fail(tok.offset, "unterminated string literal");
                char ch = src[pos++];
                if (ch == '"') break;
                if (ch == '\n') fail(tok.offset, "newline in string literal");
                if (ch == '\\') {
                    if (pos >= src.size()) fail(tok.offset, "unterminated escape");
                    char e = src[pos++];
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 'r': value += '\r'; break;
                        case 't': value += '\t'; break;
                        case '"': value += '"'; break;
                        case '\\': value += '\\'; break;
                        default: fail(pos - 2, std::string("unknown escape '\\") + e + "'");
                    }
                } else {
                    value += ch;
                }
            }
            tok.kind = TokenKind::String;
            tok.text = std::move(value);
            if (peek(0) == '^' && peek(1) == '^') {
                pos += 2;
                std::size_t start = pos;
                while (pos < src.size() && (is_name_char(src[pos]) || src[pos] == ':')) ++pos;
                if (pos == start) fail(start, "expected a datatype tag after '^^'");
                tok.tag = std::string(src.substr(start, pos - start));
            }
        } else {
            static constexpr std::string_view two[] = {"<<", ">>", "<=", ">=", "!=", "&&", "||"};
            tok.kind = TokenKind::Punct;
            bool matched = false;
            for (auto p : two) {
                if (src.substr(pos, 2) == p) {
                    tok.text = std::string(p);
                    pos += 2;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                static constexpr std::string_view one = "{}().,*+-/=<>!;";
                if (one.find(c) == std::string_view::npos)
                    fail(pos, std::string("unexpected character '") + c + "'");
                tok.text = std::string(1, c);
                ++pos;
            }
        }
        out.push_back(std::move(tok));
    }
}

}  // namespace sens::query
