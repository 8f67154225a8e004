#pragma once
// Canonical text for a query AST. parse_query(print(q), params) == q.

#include <string>

#include "sens/query/ast.hpp"

namespace sens::query {

inline std::string op_symbol(Op op) {
    switch (op) {
        case Op::Or: return "||";
        case Op::And: return "&&";
        case Op::Eq: return "=";
        case Op::Ne: return "!=";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Gt: return ">";
        case Op::Ge: return ">=";
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Not: return "!";
        case Op::Neg: return "-";
        case Op::Plus: return "+";
    }
    return "?";
}

inline std::string function_name(Function fn) {
    switch (fn) {
        case Function::If: return "IF";
        case Function::Regex: return "REGEX";
        case Function::Str: return "str";
        case Function::Sum: return "SUM";
        case Function::Avg: return "AVG";
    }
    return "?";
}

inline std::string print(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Constant: {
            // A bare "-5" would reparse as negation of 5; use the typed form.
            if (auto* l = e.constant.as_literal();
                l && is_numeric(e.constant) && *as_double(e.constant) < 0)
                return escape_string(lexical_form(*l)) + "^^" + std::string(datatype_tag(l->type));
            return to_string(e.constant);
        }
        case Expr::Kind::Variable: return "?" + e.name;
        case Expr::Kind::Parameter: return "$" + e.name;
        case Expr::Kind::Unary: return "(" + op_symbol(e.op) + print(e.args[0]) + ")";
        case Expr::Kind::Binary:
            return "(" + print(e.args[0]) + " " + op_symbol(e.op) + " " + print(e.args[1]) + ")";
        case Expr::Kind::Call: {
            std::string s = function_name(e.fn) + "(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                s += print(e.args[i]);
            }
            return s + ")";
        }
    }
    return {};
}

inline std::string print_pattern(const TriplePattern& p) { return to_string(p); }

inline std::string print(const Query& q) {
    std::string s;
    auto group = [&](const std::vector<TriplePattern>& patterns, const std::vector<Expr>& filters) {
        s += "{\n";
        for (const auto& p : patterns) s += "  " + print_pattern(p) + " .\n";
        for (const auto& f : filters) s += "  FILTER " + print(f) + "\n";
        s += "}";
    };
    if (q.kind == Query::Kind::InsertWhere) {
        s += "INSERT ";
        group(q.insert_template, {});
        s += " WHERE ";
        group(q.where, q.filters);
        return s;
    }
    s += "SELECT";
    if (q.select_all) {
        s += " *";
    } else {
        for (const auto& item : q.projection) {
            s += " (" + print(item.expr);
            if (item.alias) s += " AS ?" + *item.alias;
            s += ")";
        }
    }
    s += " WHERE ";
    group(q.where, q.filters);
    if (q.group_by) s += " GROUP BY ?" + *q.group_by;
    if (q.order_by) s += std::string(" ORDER BY ") + (q.order_by->descending ? "DESC" : "ASC") + "(?" +
                         q.order_by->variable + ")";
    return s;
}

}  // namespace sens::query
