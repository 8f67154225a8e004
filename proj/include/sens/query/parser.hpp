#pragma once
// Recursive-descent parser for the query subset.
//
// Identifiers: `?v` variables, `$p` parameters, `:Name` IRIs. A bare word in a
// triple position is a parameter when it is declared, otherwise an IRI (so
// `?o hasQuantity ?q` reads as `?o :hasQuantity ?q`). A bare word inside an
// expression must be a declared parameter.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "sens/graph_io.hpp"
#include "sens/query/ast.hpp"
#include "sens/query/lexer.hpp"

namespace sens::query {

namespace detail {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& parameters)
        : tokens_(tokenize(text)), parameters_(parameters) {}

    Query parse() {
        Query q;
        if (peek().is_keyword("SELECT")) {
            advance();
            q.kind = Query::Kind::Select;
            parse_projection(q);
            expect_keyword("WHERE");
            parse_group(q);
            parse_modifiers(q);
        } else if (peek().is_keyword("INSERT")) {
            advance();
            q.kind = Query::Kind::InsertWhere;
            expect_punct("{");
            while (!peek().is("}")) {
                if (peek().kind == TokenKind::End) fail(peek(), "'}' to close INSERT template");
                q.insert_template.push_back(parse_triple());
                if (peek().is(".")) advance();
            }
            advance();
            expect_keyword("WHERE");
            parse_group(q);
        } else {
            fail(peek(), "SELECT or INSERT");
        }
        if (peek().kind != TokenKind::End) fail(peek(), "end of query");
        return q;
    }

private:
    const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        throw SyntaxError(at.offset, at.line, at.column,
                          "expected " + expected + " but found " + at.describe());
    }
    [[noreturn]] void fail_message(const Token& at, const std::string& message) const {
        throw SyntaxError(at.offset, at.line, at.column, message);
    }

    void expect_punct(std::string_view p) {
        if (!peek().is(p)) fail(peek(), "'" + std::string(p) + "'");
        advance();
    }
    void expect_keyword(std::string_view kw) {
        if (!peek().is_keyword(kw)) fail(peek(), std::string(kw));
        advance();
    }

    bool declared(const std::string& name) const {
        return std::find(parameters_.begin(), parameters_.end(), name) != parameters_.end();
    }

    bool at_reserved_word() const {
        for (auto kw : {"WHERE", "GROUP", "ORDER", "AS", "FILTER"})
            if (peek().is_keyword(kw)) return true;
        return false;
    }

    void parse_projection(Query& q) {
        if (peek().is("*")) {
            advance();
            q.select_all = true;
            return;
        }
        while (!at_reserved_word() && peek().kind != TokenKind::End) {
            ProjectionItem item;
            if (peek().is("(")) {
                advance();
                item.expr = parse_expr();
                if (peek().is_keyword("AS")) {
                    advance();
                    item.alias = expect_variable();
                }
                expect_punct(")");
            } else {
                item.expr = parse_expr();
                if (peek().is_keyword("AS")) {
                    advance();
                    item.alias = expect_variable();
                }
            }
            q.projection.push_back(std::move(item));
        }
        if (q.projection.empty()) fail(peek(), "'*' or a projection expression");
    }

    std::string expect_variable() {
        if (peek().kind != TokenKind::Variable) fail(peek(), "a variable");
        return advance().text;
    }

    void parse_group(Query& q) {
        expect_punct("{");
        while (!peek().is("}")) {
            if (peek().kind == TokenKind::End) fail(peek(), "'}'");
            if (peek().is_keyword("FILTER")) {
                advance();
                Expr e = parse_expr();
                if (e.contains_aggregate()) fail_message(peek(), "aggregates are not allowed in FILTER");
                q.filters.push_back(std::move(e));
            } else {
                q.where.push_back(parse_triple());
            }
            if (peek().is(".")) advance();
        }
        advance();
    }

    void parse_modifiers(Query& q) {
        if (peek().is_keyword("GROUP")) {
            advance();
            expect_keyword("BY");
            q.group_by = expect_variable();
        }
        if (peek().is_keyword("ORDER")) {
            advance();
            expect_keyword("BY");
            OrderCondition oc;
            if (peek().is_keyword("DESC") || peek().is_keyword("ASC")) {
                oc.descending = peek().is_keyword("DESC");
                advance();
            }
            if (peek().is("(")) {
                advance();
                oc.variable = expect_variable();
                expect_punct(")");
            } else {
                oc.variable = expect_variable();
            }
            q.order_by = oc;
        }
    }

    TriplePattern parse_triple() {
        Term s = parse_term(false);
        Term p = parse_term(true);
        Term o = parse_term(false);
        if (!(p.is_iri() || p.is_variable()))
            fail_message(peek(), "predicate must be an IRI, variable or parameter");
        return TriplePattern{std::move(s), std::move(p), std::move(o)};
    }

    Term parse_term(bool predicate_position) {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Variable: advance(); return Term::variable(t.text);
            case TokenKind::Parameter: {
                advance();
                if (!declared(t.text)) fail_message(t, "undeclared parameter '$" + t.text + "'");
                return Term::parameter(t.text);
            }
            case TokenKind::Iri: advance(); return Term::iri(t.text);
            case TokenKind::Integer:
            case TokenKind::Decimal:
            case TokenKind::String: advance(); return literal_from(t);
            case TokenKind::Word: {
                if (t.is_keyword("FILTER") || t.is_keyword("WHERE") || t.is_keyword("SELECT") ||
                    t.is_keyword("INSERT"))
                    fail(t, "a term");
                advance();
                if (predicate_position && t.text == "a") return Term::iri("type");
                if (t.text == "true") return Term::boolean(true);
                if (t.text == "false") return Term::boolean(false);
                if (declared(t.text)) return Term::parameter(t.text);
                return Term::iri(t.text);
            }
            case TokenKind::Punct: {
                if (t.is("<<")) {
                    advance();
                    TriplePattern inner = parse_triple();
                    expect_punct(">>");
                    return Term::quoted(std::move(inner));
                }
                if (t.is("-") || t.is("+")) {
                    const Token& num = peek(1);
                    if (num.kind == TokenKind::Integer || num.kind == TokenKind::Decimal) {
                        bool neg = t.is("-");
                        advance();
                        advance();
                        Token copy = num;
                        if (neg) copy.text = "-" + copy.text;
                        return literal_from(copy);
                    }
                }
                fail(t, "a term");
            }
            case TokenKind::End: fail(t, "a term");
        }
        fail(t, "a term");
    }

    Term literal_from(const Token& t) {
        try {
            if (t.kind == TokenKind::String) {
                if (t.tag.empty()) return Term::string(t.text);
                auto type = sens::detail::datatype_from_tag(t.tag);
                if (!type) fail_message(t, "unknown datatype tag '" + t.tag + "'");
                return sens::detail::make_literal(t.text, *type);
            }
            return sens::detail::make_number(t.text);
        } catch (const std::invalid_argument& e) {
            fail_message(t, e.what());
        }
    }

    // expr := or
    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (peek().is("||")) {
            advance();
            lhs = Expr::binary(Op::Or, std::move(lhs), parse_and());
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_comparison();
        while (peek().is("&&")) {
            advance();
            lhs = Expr::binary(Op::And, std::move(lhs), parse_comparison());
        }
        return lhs;
    }

    Expr parse_comparison() {
        Expr lhs = parse_additive();
        static const std::pair<std::string_view, Op> ops[] = {{"=", Op::Eq},  {"!=", Op::Ne}, {"<", Op::Lt},
                                                              {"<=", Op::Le}, {">", Op::Gt},  {">=", Op::Ge}};
        for (auto [text, op] : ops) {
            if (peek().is(text)) {
                advance();
                return Expr::binary(op, std::move(lhs), parse_additive());
            }
        }
        return lhs;
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (peek().is("+") || peek().is("-")) {
            Op op = peek().is("+") ? Op::Add : Op::Sub;
            advance();
            lhs = Expr::binary(op, std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_unary();
        while (peek().is("*") || peek().is("/")) {
            Op op = peek().is("*") ? Op::Mul : Op::Div;
            advance();
            lhs = Expr::binary(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expr parse_unary() {
        if (peek().is("!")) {
            advance();
            return Expr::unary(Op::Not, parse_unary());
        }
        if (peek().is("-")) {
            advance();
            return Expr::unary(Op::Neg, parse_unary());
        }
        if (peek().is("+")) {
            advance();
            return Expr::unary(Op::Plus, parse_unary());
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Variable: advance(); return Expr::variable(t.text);
            case TokenKind::Parameter:
                advance();
                if (!declared(t.text)) fail_message(t, "undeclared parameter '$" + t.text + "'");
                return Expr::parameter(t.text);
            case TokenKind::Iri: advance(); return Expr::constant_of(Term::iri(t.text));
            case TokenKind::Integer:
            case TokenKind::Decimal:
            case TokenKind::String: advance(); return Expr::constant_of(literal_from(t));
            case TokenKind::Word: {
                if (auto fn = function_named(t); fn && peek(1).is("(")) {
                    advance();
                    return parse_call(*fn, t);
                }
                if (t.text == "true" || t.text == "false") {
                    advance();
                    return Expr::constant_of(Term::boolean(t.text == "true"));
                }
                if (declared(t.text)) {
                    advance();
                    return Expr::parameter(t.text);
                }
                fail_message(t, "unknown identifier '" + t.text + "' (not a declared parameter)");
            }
            case TokenKind::Punct:
                if (t.is("(")) {
                    advance();
                    Expr e = parse_expr();
                    expect_punct(")");
                    return e;
                }
                fail(t, "an expression");
            case TokenKind::End: fail(t, "an expression");
        }
        fail(t, "an expression");
    }

    static std::optional<Function> function_named(const Token& t) {
        if (t.is_keyword("IF")) return Function::If;
        if (t.is_keyword("REGEX")) return Function::Regex;
        if (t.is_keyword("STR")) return Function::Str;
        if (t.is_keyword("SUM")) return Function::Sum;
        if (t.is_keyword("AVG")) return Function::Avg;
        return std::nullopt;
    }

    Expr parse_call(Function fn, const Token& name) {
        expect_punct("(");
        std::vector<Expr> args;
        if (!peek().is(")")) {
            args.push_back(parse_expr());
            while (peek().is(",")) {
                advance();
                args.push_back(parse_expr());
            }
        }
        expect_punct(")");
        std::size_t min = 1, max = 1;
        switch (fn) {
            case Function::If: min = max = 3; break;
            case Function::Regex: min = 2; max = 3; break;
            default: break;
        }
        if (args.size() < min || args.size() > max)
            fail_message(name, name.text + " takes " + std::to_string(min) +
                                   (min == max ? "" : "-" + std::to_string(max)) + " argument(s)");
        Expr call = Expr::call(fn, std::move(args));
        if (call.is_aggregate() && call.args[0].contains_aggregate())
            fail_message(name, "nested aggregates are not supported");
        return call;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const std::vector<std::string>& parameters_;
};

}  // namespace detail

// Parses query text. `parameters` declares the runtime constants the text may
// reference; their values are supplied at evaluation time.
inline Query parse_query(std::string_view text, const std::vector<std::string>& parameters = {}) {
    return detail::Parser(text, parameters).parse();
}

}  // namespace sens::query
