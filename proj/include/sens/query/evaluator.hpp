#pragma once
// Query evaluation over a Graph.
//
// Basic graph patterns are joined by backtracking: at each step the pattern
// with the most ground positions (after substituting current bindings) is
// matched next, and each FILTER runs as soon as all of its variables are
// bound. A FILTER that raises a type error rejects the solution instead of
// failing the query; that keeps the result independent of join order.
// Errors in projections, aggregates and ORDER BY still propagate. Result rows
// are sorted by the ORDER BY key when given, then by the serialized row, so
// output is deterministic.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sens/graph.hpp"
#include "sens/query/ast.hpp"
#include "sens/query/printer.hpp"

namespace sens::query {

class EvalError : public std::runtime_error {
public:
    enum class Kind { Type, Unbound, Parameter, Malformed, Unsupported };
    EvalError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Term>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::out_of_range("no column named '" + name + "'");
    }
};

inline Term bind_params(const Term& t, const Params& params) {
    if (auto* v = t.as_variable(); v && v->parameter) {
        auto it = params.find(v->name);
        if (it == params.end()) throw EvalError(EvalError::Kind::Parameter, "parameter $" + v->name + " has no value");
        return it->second;
    }
    if (auto* q = t.as_quoted())
        return Term::quoted({bind_params(q->subject, params), bind_params(q->predicate, params),
                             bind_params(q->object, params)});
    return t;
}

inline TriplePattern bind_params(const TriplePattern& p, const Params& params) {
    return {bind_params(p.subject, params), bind_params(p.predicate, params), bind_params(p.object, params)};
}

inline Term substitute(const Term& t, const Solution& s) {
    if (auto* v = t.as_variable()) {
        auto it = s.find(v->name);
        return it == s.end() ? t : it->second;
    }
    if (auto* q = t.as_quoted()) {
        if (q->subject.is_ground() && q->predicate.is_ground() && q->object.is_ground()) return t;
        return Term::quoted({substitute(q->subject, s), substitute(q->predicate, s), substitute(q->object, s)});
    }
    return t;
}

inline TriplePattern substitute(const TriplePattern& p, const Solution& s) {
    return {substitute(p.subject, s), substitute(p.predicate, s), substitute(p.object, s)};
}

// ---------------------------------------------------------------------------
// Expressions

namespace detail {

[[noreturn]] inline void type_error(const std::string& msg) { throw EvalError(EvalError::Kind::Type, msg); }

inline bool effective_boolean(const Term& t) {
    if (auto b = as_boolean(t)) return *b;
    if (auto i = as_integer(t)) return *i != 0;
    if (auto d = as_double(t)) return *d != 0.0;
    if (auto* s = as_string(t)) return !s->empty();
    type_error("no boolean value for " + to_string(t));
}

inline Term arithmetic(Op op, const Term& a, const Term& b) {
    if (!is_numeric(a) || !is_numeric(b))
        type_error("arithmetic on non-numeric operands " + to_string(a) + ", " + to_string(b));
    auto ia = as_integer(a), ib = as_integer(b);
    if (op == Op::Div) {
        double den = *as_double(b);
        if (den == 0.0) type_error("division by zero");
        return Term::decimal(*as_double(a) / den);
    }
    if (ia && ib) {
        std::int64_t r = 0;
        bool overflow = false;
        switch (op) {
            case Op::Add: overflow = __builtin_add_overflow(*ia, *ib, &r); break;
            case Op::Sub: overflow = __builtin_sub_overflow(*ia, *ib, &r); break;
            case Op::Mul: overflow = __builtin_mul_overflow(*ia, *ib, &r); break;
            default: break;
        }
        if (overflow) type_error("integer overflow");
        return Term::integer(r);
    }
    double x = *as_double(a), y = *as_double(b);
    switch (op) {
        case Op::Add: return Term::decimal(x + y);
        case Op::Sub: return Term::decimal(x - y);
        case Op::Mul: return Term::decimal(x * y);
        default: break;
    }
    type_error("bad arithmetic operator");
}

inline bool compare(Op op, const Term& a, const Term& b) {
    int c = 0;
    if (is_numeric(a) && is_numeric(b)) {
        auto ia = as_integer(a), ib = as_integer(b);
        if (ia && ib) {
            c = *ia < *ib ? -1 : (*ia > *ib ? 1 : 0);
        } else {
            double x = *as_double(a), y = *as_double(b);
            c = x < y ? -1 : (x > y ? 1 : 0);
        }
    } else if (op == Op::Eq || op == Op::Ne) {
        return (a == b) == (op == Op::Eq);
    } else if (as_string(a) && as_string(b)) {
        int r = as_string(a)->compare(*as_string(b));
        c = r < 0 ? -1 : (r > 0 ? 1 : 0);
    } else if (as_boolean(a) && as_boolean(b)) {
        c = static_cast<int>(*as_boolean(a)) - static_cast<int>(*as_boolean(b));
    } else {
        type_error("cannot order " + to_string(a) + " and " + to_string(b));
    }
    switch (op) {
        case Op::Eq: return c == 0;
        case Op::Ne: return c != 0;
        case Op::Lt: return c < 0;
        case Op::Le: return c <= 0;
        case Op::Gt: return c > 0;
        case Op::Ge: return c >= 0;
        default: type_error("bad comparison operator");
    }
}

// str(): IRI local name or literal lexical form. Booleans display as
// True/False, the spelling the fulfillment KPI query tests for.
inline std::string display_string(const Term& t) {
    if (auto* i = t.as_iri()) return i->name;
    if (auto b = as_boolean(t)) return *b ? "True" : "False";
    if (auto* l = t.as_literal()) return lexical_form(*l);
    type_error("str() of " + to_string(t));
}

// Substring search with optional ^ and $ anchors.
inline bool regex_match(std::string text, std::string pattern, bool ignore_case) {
    if (ignore_case) {
        for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        for (auto& c : pattern) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    bool start = !pattern.empty() && pattern.front() == '^';
    if (start) pattern.erase(0, 1);
    bool end = !pattern.empty() && pattern.back() == '$';
    if (end) pattern.pop_back();
    if (start && end) return text == pattern;
    if (start) return text.starts_with(pattern);
    if (end) return text.ends_with(pattern);
    return text.find(pattern) != std::string::npos;
}

struct Context {
    const Solution* row = nullptr;
    const Params* params = nullptr;
    const std::vector<const Solution*>* group = nullptr;  // set while projecting aggregates
};

inline Term eval(const Expr& e, const Context& ctx);

inline Term aggregate(const Expr& e, const Context& ctx) {
    if (!ctx.group) throw EvalError(EvalError::Kind::Unsupported, "aggregate outside of a grouped projection");
    std::vector<Term> values;
    values.reserve(ctx.group->size());
    bool all_int = true;
    for (const Solution* row : *ctx.group) {
        Context inner{row, ctx.params, nullptr};
        Term v = eval(e.args[0], inner);
        if (!is_numeric(v)) type_error(function_name(e.fn) + " over non-numeric value " + to_string(v));
        all_int = all_int && as_integer(v).has_value();
        values.push_back(std::move(v));
    }
    std::int64_t isum = 0;
    double dsum = 0.0;
    for (const Term& v : values) {
        if (all_int) {
            if (__builtin_add_overflow(isum, *as_integer(v), &isum)) type_error("integer overflow in SUM");
        } else {
            dsum += *as_double(v);
        }
    }
    if (e.fn == Function::Sum) return all_int ? Term::integer(isum) : Term::decimal(dsum);
    if (values.empty()) return Term::decimal(0.0);
    double total = all_int ? static_cast<double>(isum) : dsum;
    return Term::decimal(total / static_cast<double>(values.size()));
}

inline Term eval(const Expr& e, const Context& ctx) {
    switch (e.kind) {
        case Expr::Kind::Constant: return e.constant;
        case Expr::Kind::Variable: {
            if (ctx.row) {
                auto it = ctx.row->find(e.name);
                if (it != ctx.row->end()) return it->second;
            }
            throw EvalError(EvalError::Kind::Unbound, "variable ?" + e.name + " is not bound here");
        }
        case Expr::Kind::Parameter: {
            auto it = ctx.params ? ctx.params->find(e.name) : Params::const_iterator{};
            if (!ctx.params || it == ctx.params->end())
                throw EvalError(EvalError::Kind::Parameter, "parameter $" + e.name + " has no value");
            return it->second;
        }
        case Expr::Kind::Unary: {
            if (e.op == Op::Not) return Term::boolean(!effective_boolean(eval(e.args[0], ctx)));
            Term v = eval(e.args[0], ctx);
            if (!is_numeric(v)) type_error("unary sign on non-numeric " + to_string(v));
            if (e.op == Op::Plus) return v;
            if (auto i = as_integer(v)) {
                if (*i == std::numeric_limits<std::int64_t>::min()) type_error("integer overflow");
                return Term::integer(-*i);
            }
            return Term::decimal(-*as_double(v));
        }
        case Expr::Kind::Binary: {
            if (e.op == Op::And)
                return Term::boolean(effective_boolean(eval(e.args[0], ctx)) &&
                                     effective_boolean(eval(e.args[1], ctx)));
            if (e.op == Op::Or)
                return Term::boolean(effective_boolean(eval(e.args[0], ctx)) ||
                                     effective_boolean(eval(e.args[1], ctx)));
            Term a = eval(e.args[0], ctx);
            Term b = eval(e.args[1], ctx);
            switch (e.op) {
                case Op::Add:
                case Op::Sub:
                case Op::Mul:
                case Op::Div: return arithmetic(e.op, a, b);
                default: return Term::boolean(compare(e.op, a, b));
            }
        }
        case Expr::Kind::Call: {
            switch (e.fn) {
                case Function::If:
                    return effective_boolean(eval(e.args[0], ctx)) ? eval(e.args[1], ctx) : eval(e.args[2], ctx);
                case Function::Str: return Term::string(display_string(eval(e.args[0], ctx)));
                case Function::Regex: {
                    Term text = eval(e.args[0], ctx);
                    Term pattern = eval(e.args[1], ctx);
                    if (!as_string(text) || !as_string(pattern)) type_error("REGEX expects string arguments");
                    bool icase = false;
                    if (e.args.size() == 3) {
                        Term flags = eval(e.args[2], ctx);
                        if (!as_string(flags)) type_error("REGEX flags must be a string");
                        icase = as_string(flags)->find('i') != std::string::npos;
                    }
                    return Term::boolean(regex_match(*as_string(text), *as_string(pattern), icase));
                }
                case Function::Sum:
                case Function::Avg: return aggregate(e, ctx);
            }
        }
    }
    throw EvalError(EvalError::Kind::Unsupported, "unknown expression");
}

inline std::string row_key(const std::vector<Term>& row) {
    std::string k;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) k += '\t';
        k += to_string(row[i]);
    }
    return k;
}

struct PreparedFilter {
    const Expr* expr;
    std::set<std::string> vars;
};

class Joiner {
public:
    Joiner(const Graph& g, std::vector<TriplePattern> patterns, std::vector<PreparedFilter> filters,
           const Params& params)
        : g_(g), patterns_(std::move(patterns)), filters_(std::move(filters)), params_(params) {}

    std::vector<Solution> run() {
        Solution current;
        std::vector<bool> used(patterns_.size(), false);
        std::vector<bool> applied(filters_.size(), false);
        if (!apply_ready_filters(current, applied)) return {};
        recurse(current, used, applied, 0);
        return std::move(out_);
    }

private:
    bool apply_ready_filters(const Solution& s, std::vector<bool>& applied) {
        for (std::size_t i = 0; i < filters_.size(); ++i) {
            if (applied[i]) continue;
            bool ready = std::all_of(filters_[i].vars.begin(), filters_[i].vars.end(),
                                     [&](const std::string& v) { return s.count(v) != 0; });
            if (!ready) continue;
            applied[i] = true;
            Context ctx{&s, &params_, nullptr};
            bool keep = false;
            try {
                keep = effective_boolean(eval(*filters_[i].expr, ctx));
            } catch (const EvalError& e) {
                if (e.kind() != EvalError::Kind::Type) throw;
            }
            if (!keep) return false;
        }
        return true;
    }

    static int ground_positions(const TriplePattern& p) {
        return static_cast<int>(p.subject.is_ground()) + static_cast<int>(p.predicate.is_ground()) +
               static_cast<int>(p.object.is_ground());
    }

    void recurse(Solution& current, std::vector<bool>& used, const std::vector<bool>& applied, std::size_t depth) {
        if (depth == patterns_.size()) {
            out_.push_back(current);
            return;
        }
        std::size_t best = patterns_.size();
        int best_score = -1;
        TriplePattern best_pattern;
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            if (used[i]) continue;
            TriplePattern sub = substitute(patterns_[i], current);
            int score = ground_positions(sub);
            if (score > best_score) {
                best_score = score;
                best = i;
                best_pattern = std::move(sub);
            }
        }
        used[best] = true;
        for (Solution& m : g_.match(best_pattern)) {
            Solution next = current;
            for (auto& [k, v] : m) next.emplace(k, std::move(v));
            std::vector<bool> next_applied = applied;
            if (!apply_ready_filters(next, next_applied)) continue;
            recurse(next, used, next_applied, depth + 1);
        }
        used[best] = false;
    }

    const Graph& g_;
    std::vector<TriplePattern> patterns_;
    std::vector<PreparedFilter> filters_;
    const Params& params_;
    std::vector<Solution> out_;
};

inline void require_bound(const std::set<std::string>& used, const std::vector<std::string>& available,
                          const std::string& where) {
    for (const auto& v : used)
        if (std::find(available.begin(), available.end(), v) == available.end())
            throw EvalError(EvalError::Kind::Unbound, "variable ?" + v + " in " + where +
                                                          " does not occur in the WHERE patterns");
}

// Missing parameter values fail up front, whether or not a row reaches the
// filter.
inline void require_params(const Expr& e, const Params& params) {
    if (e.kind == Expr::Kind::Parameter && !params.count(e.name))
        throw EvalError(EvalError::Kind::Parameter, "parameter $" + e.name + " has no value");
    for (const auto& a : e.args) require_params(a, params);
}

}  // namespace detail

// Solutions of the WHERE clause (patterns joined, filters applied).
inline std::vector<Solution> solve(const std::vector<TriplePattern>& where, const std::vector<Expr>& filters,
                                   const Graph& g, const Params& params = {}) {
    std::vector<std::string> vars = pattern_variables(where);
    std::vector<detail::PreparedFilter> prepared;
    for (const auto& f : filters) {
        detail::PreparedFilter pf{&f, {}};
        collect_expr_variables(f, pf.vars);
        detail::require_bound(pf.vars, vars, "FILTER");
        detail::require_params(f, params);
        prepared.push_back(std::move(pf));
    }
    std::vector<TriplePattern> bound;
    bound.reserve(where.size());
    for (const auto& p : where) bound.push_back(bind_params(p, params));
    return detail::Joiner(g, std::move(bound), std::move(prepared), params).run();
}

inline std::string column_name(const ProjectionItem& item) {
    if (item.alias) return *item.alias;
    if (item.expr.kind == Expr::Kind::Variable) return item.expr.name;
    return print(item.expr);
}

inline ResultTable evaluate(const Query& q, const Graph& g, const Params& params = {}) {
    if (q.kind != Query::Kind::Select) throw EvalError(EvalError::Kind::Unsupported, "evaluate() expects a SELECT query");
    std::vector<std::string> vars = pattern_variables(q.where);

    std::set<std::string> used;
    for (const auto& item : q.projection) collect_expr_variables(item.expr, used);
    detail::require_bound(used, vars, "SELECT");
    if (q.group_by) detail::require_bound({*q.group_by}, vars, "GROUP BY");

    ResultTable table;
    if (q.select_all) {
        table.columns = vars;
    } else {
        for (const auto& item : q.projection) table.columns.push_back(column_name(item));
    }

    std::vector<Solution> solutions = solve(q.where, q.filters, g, params);
    bool grouped = q.has_aggregates() || q.group_by.has_value();
    if (grouped && q.select_all)
        throw EvalError(EvalError::Kind::Unsupported, "SELECT * cannot be combined with grouping");

    // (order key, row) pairs
    std::vector<std::pair<std::optional<Term>, std::vector<Term>>> rows;
    auto order_column = [&]() -> std::optional<std::size_t> {
        if (!q.order_by) return std::nullopt;
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            if (table.columns[i] == q.order_by->variable) return i;
        return std::nullopt;
    }();
    if (q.order_by && !order_column) {
        if (grouped)
            throw EvalError(EvalError::Kind::Unbound,
                            "ORDER BY ?" + q.order_by->variable + " must name an output column of a grouped query");
        detail::require_bound({q.order_by->variable}, vars, "ORDER BY");
    }

    if (!grouped) {
        for (const Solution& s : solutions) {
            std::vector<Term> row;
            if (q.select_all) {
                for (const auto& v : vars) row.push_back(s.at(v));
            } else {
                detail::Context ctx{&s, &params, nullptr};
                for (const auto& item : q.projection) row.push_back(detail::eval(item.expr, ctx));
            }
            std::optional<Term> key;
            if (q.order_by) key = order_column ? row[*order_column] : s.at(q.order_by->variable);
            rows.emplace_back(std::move(key), std::move(row));
        }
    } else {
        std::vector<std::string> keys;
        if (q.group_by) {
            keys.push_back(*q.group_by);
        } else {
            for (const auto& item : q.projection)
                if (item.expr.kind == Expr::Kind::Variable) keys.push_back(item.expr.name);
        }
        std::map<std::string, std::pair<Solution, std::vector<const Solution*>>> groups;
        for (const Solution& s : solutions) {
            std::string k;
            Solution key_binding;
            for (const auto& name : keys) {
                k += to_string(s.at(name));
                k += '\t';
                key_binding.emplace(name, s.at(name));
            }
            auto& slot = groups[k];
            slot.first = std::move(key_binding);
            slot.second.push_back(&s);
        }
        if (keys.empty() && groups.empty()) groups[""];  // one global group over zero rows
        for (auto& [k, group] : groups) {
            detail::Context ctx{&group.first, &params, &group.second};
            std::vector<Term> row;
            for (const auto& item : q.projection) row.push_back(detail::eval(item.expr, ctx));
            std::optional<Term> key;
            if (order_column) key = row[*order_column];
            rows.emplace_back(std::move(key), std::move(row));
        }
    }

    std::vector<std::pair<std::string, std::size_t>> tiebreak;
    tiebreak.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) tiebreak.emplace_back(detail::row_key(rows[i].second), i);
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    bool desc = q.order_by && q.order_by->descending;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].first && rows[b].first) {
            int c = compare_terms(*rows[a].first, *rows[b].first);
            if (c != 0) return desc ? c > 0 : c < 0;
        }
        return tiebreak[a].first < tiebreak[b].first;
    });
    table.rows.reserve(rows.size());
    for (std::size_t i : order) table.rows.push_back(std::move(rows[i].second));
    return table;
}

// Runs an INSERT-WHERE update. All template instances are built and checked
// before the first insertion, so a failing update leaves the graph unchanged.
inline std::size_t evaluate_update(const Query& q, Graph& g, const Params& params = {}) {
    if (q.kind != Query::Kind::InsertWhere)
        throw EvalError(EvalError::Kind::Unsupported, "evaluate_update() expects an INSERT query");
    std::vector<std::string> where_vars = pattern_variables(q.where);
    std::vector<std::string> template_vars = pattern_variables(q.insert_template);
    detail::require_bound(std::set<std::string>(template_vars.begin(), template_vars.end()), where_vars,
                          "INSERT template");
    std::vector<TriplePattern> templ;
    for (const auto& p : q.insert_template) templ.push_back(bind_params(p, params));

    std::vector<Triple> pending;
    for (const Solution& s : solve(q.where, q.filters, g, params)) {
        for (const auto& p : templ) {
            Triple t = substitute(p, s);
            try {
                check_storable(t);
            } catch (const MalformedTriple& e) {
                throw EvalError(EvalError::Kind::Malformed, e.what());
            }
            pending.push_back(std::move(t));
        }
    }
    std::size_t added = 0;
    for (const auto& t : pending)
        if (g.insert(t)) ++added;
    return added;
}

}  // namespace sens::query
