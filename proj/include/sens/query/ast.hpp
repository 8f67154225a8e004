#pragma once
// Query AST for the supported subset:
//
//   SELECT (* | item+) WHERE { pattern-or-filter* } [GROUP BY ?v] [ORDER BY [ASC|DESC] ?v]
//   INSERT { template* } WHERE { pattern-or-filter* }
//
// Patterns may use quoted triples (<< s p o >>). Expressions cover
// comparisons, arithmetic, && || !, IF, REGEX, str, and the SUM/AVG aggregates.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sens/term.hpp"

namespace sens::query {

enum class Op { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Not, Neg, Plus };
enum class Function { If, Regex, Str, Sum, Avg };

struct Expr {
    enum class Kind { Constant, Variable, Parameter, Unary, Binary, Call };

    Kind kind = Kind::Constant;
    Op op = Op::Add;
    Function fn = Function::Str;
    std::string name;  // variable or parameter name
    Term constant;
    std::vector<Expr> args;

    bool operator==(const Expr&) const = default;

    static Expr constant_of(Term t) {
        Expr e;
        e.kind = Kind::Constant;
        e.constant = std::move(t);
        return e;
    }
    static Expr variable(std::string n) {
        Expr e;
        e.kind = Kind::Variable;
        e.name = std::move(n);
        return e;
    }
    static Expr parameter(std::string n) {
        Expr e;
        e.kind = Kind::Parameter;
        e.name = std::move(n);
        return e;
    }
    static Expr unary(Op op, Expr arg) {
        Expr e;
        e.kind = Kind::Unary;
        e.op = op;
        e.args.push_back(std::move(arg));
        return e;
    }
    static Expr binary(Op op, Expr lhs, Expr rhs) {
        Expr e;
        e.kind = Kind::Binary;
        e.op = op;
        e.args.push_back(std::move(lhs));
        e.args.push_back(std::move(rhs));
        return e;
    }
    static Expr call(Function fn, std::vector<Expr> args) {
        Expr e;
        e.kind = Kind::Call;
        e.fn = fn;
        e.args = std::move(args);
        return e;
    }

    bool is_aggregate() const { return kind == Kind::Call && (fn == Function::Sum || fn == Function::Avg); }

    bool contains_aggregate() const {
        if (is_aggregate()) return true;
        for (const auto& a : args)
            if (a.contains_aggregate()) return true;
        return false;
    }
};

struct ProjectionItem {
    Expr expr;
    std::optional<std::string> alias;
    bool operator==(const ProjectionItem&) const = default;
};

struct OrderCondition {
    std::string variable;
    bool descending = false;
    bool operator==(const OrderCondition&) const = default;
};

struct Query {
    enum class Kind { Select, InsertWhere };

    Kind kind = Kind::Select;
    bool select_all = false;
    std::vector<ProjectionItem> projection;
    std::vector<TriplePattern> insert_template;
    std::vector<TriplePattern> where;
    std::vector<Expr> filters;
    std::optional<std::string> group_by;
    std::optional<OrderCondition> order_by;

    bool operator==(const Query&) const = default;

    bool has_aggregates() const {
        for (const auto& p : projection)
            if (p.expr.contains_aggregate()) return true;
        return false;
    }
};

using Params = std::map<std::string, Term>;

inline void collect_variables(const Term& t, std::vector<std::string>& out) {
    if (auto* v = t.as_variable()) {
        if (!v->parameter) {
            for (const auto& n : out)
                if (n == v->name) return;
            out.push_back(v->name);
        }
    } else if (auto* q = t.as_quoted()) {
        collect_variables(q->subject, out);
        collect_variables(q->predicate, out);
        collect_variables(q->object, out);
    }
}

// Pattern variables in order of first appearance.
inline std::vector<std::string> pattern_variables(const std::vector<TriplePattern>& patterns) {
    std::vector<std::string> out;
    for (const auto& p : patterns) {
        collect_variables(p.subject, out);
        collect_variables(p.predicate, out);
        collect_variables(p.object, out);
    }
    return out;
}

inline void collect_expr_variables(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::Variable) out.insert(e.name);
    for (const auto& a : e.args) collect_expr_variables(a, out);
}

}  // namespace sens::query
