#pragma once
// Brute-force reference evaluator used as a test oracle.
//
// Deliberately naive: every pattern is matched against a full scan of the
// graph in textual order, filters run only on complete solutions, and
// expression semantics are re-implemented from the documented rules rather
// than shared with the engine. The result is a sorted multiset of serialized
// rows, so it is compared with the engine before ordering.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sens/query.hpp"

__extension__ typedef __int128 ref_i128;

namespace ref {

using sens::Term;
using sens::Triple;
using sens::query::Expr;
using sens::query::Function;
using sens::query::Op;
using sens::query::Params;
using sens::query::Query;

struct Outcome {
    bool error = false;
    bool too_large = false;             // the nested loop exceeded the row budget
    std::vector<std::string> rows;      // tab-joined serialized rows, sorted
    std::vector<std::string> columns;
};

struct TypeError {};
struct HardError {};

using Bindings = std::map<std::string, Term>;

// Matches one pattern term against a data term, extending b.
inline bool match_term(const Term& pat, const Term& data, Bindings& b) {
    if (auto* v = pat.as_variable()) {
        auto it = b.find(v->name);
        if (it == b.end()) {
            b[v->name] = data;
            return true;
        }
        return it->second == data;
    }
    if (auto* pq = pat.as_quoted()) {
        auto* dq = data.as_quoted();
        return dq && match_term(pq->subject, dq->subject, b) && match_term(pq->predicate, dq->predicate, b) &&
               match_term(pq->object, dq->object, b);
    }
    return pat == data;
}

inline Term fill(const Term& t, const Params& params) {
    if (auto* v = t.as_variable(); v && v->parameter) {
        auto it = params.find(v->name);
        if (it == params.end()) throw HardError{};
        return it->second;
    }
    if (auto* q = t.as_quoted())
        return Term::quoted({fill(q->subject, params), fill(q->predicate, params), fill(q->object, params)});
    return t;
}

inline bool numeric(const Term& t) {
    auto* l = t.as_literal();
    return l && (l->type == sens::Datatype::Integer || l->type == sens::Datatype::Decimal ||
                 l->type == sens::Datatype::Timestep);
}
inline bool integral(const Term& t) {
    auto* l = t.as_literal();
    return l && (l->type == sens::Datatype::Integer || l->type == sens::Datatype::Timestep);
}
inline long long ival(const Term& t) { return std::get<std::int64_t>(t.as_literal()->value); }
inline double dval(const Term& t) {
    auto* l = t.as_literal();
    if (l->type == sens::Datatype::Decimal) return std::get<double>(l->value);
    return static_cast<double>(std::get<std::int64_t>(l->value));
}
inline const std::string* sval(const Term& t) {
    auto* l = t.as_literal();
    return l && l->type == sens::Datatype::String ? &std::get<std::string>(l->value) : nullptr;
}
inline std::optional<bool> bval(const Term& t) {
    auto* l = t.as_literal();
    if (l && l->type == sens::Datatype::Boolean) return std::get<bool>(l->value);
    return std::nullopt;
}

inline bool truthy(const Term& t) {
    if (auto b = bval(t)) return *b;
    if (integral(t)) return ival(t) != 0;
    if (numeric(t)) return dval(t) != 0.0;
    if (auto* s = sval(t)) return !s->empty();
    throw TypeError{};
}

inline Term arith(Op op, const Term& a, const Term& b) {
    if (!numeric(a) || !numeric(b)) throw TypeError{};
    if (op == Op::Div) {
        if (dval(b) == 0.0) throw TypeError{};
        return Term::decimal(dval(a) / dval(b));
    }
    if (integral(a) && integral(b)) {
        ref_i128 x = ival(a), y = ival(b);
        ref_i128 r = op == Op::Add ? x + y : op == Op::Sub ? x - y : x * y;
        if (r > INT64_MAX || r < INT64_MIN) throw TypeError{};
        return Term::integer(static_cast<std::int64_t>(r));
    }
    double x = dval(a), y = dval(b);
    return Term::decimal(op == Op::Add ? x + y : op == Op::Sub ? x - y : x * y);
}

inline bool cmp(Op op, const Term& a, const Term& b) {
    int c;
    if (numeric(a) && numeric(b)) {
        if (integral(a) && integral(b))
            c = (ival(a) > ival(b)) - (ival(a) < ival(b));
        else
            c = (dval(a) > dval(b)) - (dval(a) < dval(b));
    } else if (op == Op::Eq) {
        return a == b;
    } else if (op == Op::Ne) {
        return !(a == b);
    } else if (sval(a) && sval(b)) {
        c = (*sval(a) > *sval(b)) - (*sval(a) < *sval(b));
    } else if (bval(a) && bval(b)) {
        c = int(*bval(a)) - int(*bval(b));
    } else {
        throw TypeError{};
    }
    switch (op) {
        case Op::Eq: return c == 0;
        case Op::Ne: return c != 0;
        case Op::Lt: return c < 0;
        case Op::Le: return c <= 0;
        case Op::Gt: return c > 0;
        default: return c >= 0;
    }
}

inline std::string text_of(const Term& t) {
    if (auto* i = t.as_iri()) return i->name;
    if (auto b = bval(t)) return *b ? "True" : "False";
    if (auto* l = t.as_literal()) return sens::lexical_form(*l);
    throw TypeError{};
}

inline bool find_pattern(std::string text, std::string pat, bool fold) {
    if (fold) {
        std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
        std::transform(pat.begin(), pat.end(), pat.begin(), [](unsigned char c) { return std::tolower(c); });
    }
    bool a = !pat.empty() && pat[0] == '^';
    if (a) pat = pat.substr(1);
    bool z = !pat.empty() && pat.back() == '$';
    if (z) pat.pop_back();
    for (std::size_t i = 0; i + pat.size() <= text.size(); ++i) {
        if (a && i != 0) break;
        if (z && i + pat.size() != text.size()) continue;
        if (text.compare(i, pat.size(), pat) == 0) return true;
    }
    return false;
}

struct Env {
    const Bindings* row;
    const Params* params;
    const std::vector<Bindings>* group;
};

inline Term run(const Expr& e, const Env& env);

inline Term fold_group(const Expr& e, const Env& env) {
    if (!env.group) throw HardError{};
    bool ints = true;
    std::vector<Term> vs;
    for (const auto& r : *env.group) {
        Term v = run(e.args[0], Env{&r, env.params, nullptr});
        if (!numeric(v)) throw TypeError{};
        ints = ints && integral(v);
        vs.push_back(v);
    }
    if (ints) {
        ref_i128 s = 0;
        for (auto& v : vs) {
            s += ival(v);
            if (s > INT64_MAX || s < INT64_MIN) throw TypeError{};
        }
        if (e.fn == Function::Sum) return Term::integer(static_cast<std::int64_t>(s));
        return Term::decimal(vs.empty() ? 0.0 : static_cast<double>(s) / static_cast<double>(vs.size()));
    }
    double s = 0;
    for (auto& v : vs) s += dval(v);
    if (e.fn == Function::Sum) return Term::decimal(s);
    return Term::decimal(s / static_cast<double>(vs.size()));
}

inline Term run(const Expr& e, const Env& env) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Constant: return e.constant;
        case K::Variable: {
            if (!env.row || !env.row->count(e.name)) throw HardError{};
            return env.row->at(e.name);
        }
        case K::Parameter: {
            if (!env.params->count(e.name)) throw HardError{};
            return env.params->at(e.name);
        }
        case K::Unary: {
            if (e.op == Op::Not) return Term::boolean(!truthy(run(e.args[0], env)));
            Term v = run(e.args[0], env);
            if (!numeric(v)) throw TypeError{};
            if (e.op == Op::Plus) return v;
            if (integral(v)) {
                if (ival(v) == INT64_MIN) throw TypeError{};
                return Term::integer(-ival(v));
            }
            return Term::decimal(-dval(v));
        }
        case K::Binary: {
            if (e.op == Op::And) return Term::boolean(truthy(run(e.args[0], env)) && truthy(run(e.args[1], env)));
            if (e.op == Op::Or) return Term::boolean(truthy(run(e.args[0], env)) || truthy(run(e.args[1], env)));
            Term a = run(e.args[0], env), b = run(e.args[1], env);
            if (e.op == Op::Add || e.op == Op::Sub || e.op == Op::Mul || e.op == Op::Div) return arith(e.op, a, b);
            return Term::boolean(cmp(e.op, a, b));
        }
        case K::Call:
            switch (e.fn) {
                case Function::If: return truthy(run(e.args[0], env)) ? run(e.args[1], env) : run(e.args[2], env);
                case Function::Str: return Term::string(text_of(run(e.args[0], env)));
                case Function::Regex: {
                    Term t = run(e.args[0], env), p = run(e.args[1], env);
                    if (!sval(t) || !sval(p)) throw TypeError{};
                    bool fold = false;
                    if (e.args.size() > 2) {
                        Term f = run(e.args[2], env);
                        if (!sval(f)) throw TypeError{};
                        fold = sval(f)->find('i') != std::string::npos;
                    }
                    return Term::boolean(find_pattern(*sval(t), *sval(p), fold));
                }
                default: return fold_group(e, env);
            }
    }
    throw HardError{};
}

inline void vars_of(const Term& t, std::vector<std::string>& out) {
    if (auto* v = t.as_variable(); v && !v->parameter) {
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    } else if (auto* q = t.as_quoted()) {
        vars_of(q->subject, out);
        vars_of(q->predicate, out);
        vars_of(q->object, out);
    }
}

inline void expr_vars(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::Variable) out.insert(e.name);
    for (const auto& a : e.args) expr_vars(a, out);
}

inline bool has_agg(const Expr& e) {
    if (e.kind == Expr::Kind::Call && (e.fn == Function::Sum || e.fn == Function::Avg)) return true;
    for (const auto& a : e.args)
        if (has_agg(a)) return true;
    return false;
}

inline std::string join(const std::vector<Term>& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "\t" : "") + sens::to_string(row[i]);
    return s;
}

// Evaluates a SELECT query. Every failure is reported as error = true.
inline Outcome evaluate(const Query& q, const sens::Graph& g, const Params& params = {},
                        std::size_t budget = 200000) {
    Outcome out;
    try {
        std::vector<std::string> where_vars;
        for (const auto& p : q.where) {
            vars_of(p.subject, where_vars);
            vars_of(p.predicate, where_vars);
            vars_of(p.object, where_vars);
        }
        auto in_where = [&](const std::string& v) {
            return std::find(where_vars.begin(), where_vars.end(), v) != where_vars.end();
        };
        std::set<std::string> mentioned;
        for (const auto& f : q.filters) expr_vars(f, mentioned);
        for (const auto& item : q.projection) expr_vars(item.expr, mentioned);
        if (q.group_by) mentioned.insert(*q.group_by);
        for (const auto& v : mentioned)
            if (!in_where(v)) throw HardError{};
        for (const auto& f : q.filters) {
            std::function<void(const Expr&)> check = [&](const Expr& e) {
                if (e.kind == Expr::Kind::Parameter && !params.count(e.name)) throw HardError{};
                for (const auto& a : e.args) check(a);
            };
            check(f);
        }

        std::vector<Triple> data = g.triples();
        std::vector<Bindings> sols{Bindings{}};
        for (const auto& raw : q.where) {
            Triple p{fill(raw.subject, params), fill(raw.predicate, params), fill(raw.object, params)};
            std::vector<Bindings> next;
            for (const auto& s : sols)
                for (const auto& t : data) {
                    Bindings b = s;
                    if (match_term(p.subject, t.subject, b) && match_term(p.predicate, t.predicate, b) &&
                        match_term(p.object, t.object, b))
                        next.push_back(std::move(b));
                    if (next.size() > budget) {
                        out.too_large = true;
                        return out;
                    }
                }
            sols = std::move(next);
        }

        std::vector<Bindings> kept;
        for (const auto& s : sols) {
            bool ok = true;
            for (const auto& f : q.filters) {
                try {
                    ok = truthy(run(f, Env{&s, &params, nullptr}));
                } catch (const TypeError&) {
                    ok = false;
                }
                if (!ok) break;
            }
            if (ok) kept.push_back(s);
        }

        bool grouped = q.group_by.has_value();
        for (const auto& item : q.projection) grouped = grouped || has_agg(item.expr);
        if (grouped && q.select_all) throw HardError{};

        if (q.select_all) {
            out.columns = where_vars;
            for (const auto& s : kept) {
                std::vector<Term> row;
                for (const auto& v : where_vars) row.push_back(s.at(v));
                out.rows.push_back(join(row));
            }
        } else if (!grouped) {
            for (const auto& s : kept) {
                std::vector<Term> row;
                for (const auto& item : q.projection) row.push_back(run(item.expr, Env{&s, &params, nullptr}));
                out.rows.push_back(join(row));
            }
        } else {
            std::vector<std::string> keys;
            if (q.group_by)
                keys.push_back(*q.group_by);
            else
                for (const auto& item : q.projection)
                    if (item.expr.kind == Expr::Kind::Variable) keys.push_back(item.expr.name);
            std::vector<std::pair<Bindings, std::vector<Bindings>>> groups;
            for (const auto& s : kept) {
                Bindings k;
                for (const auto& name : keys) k[name] = s.at(name);
                auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& gr) { return gr.first == k; });
                if (it == groups.end())
                    groups.push_back({k, {s}});
                else
                    it->second.push_back(s);
            }
            if (keys.empty() && groups.empty()) groups.push_back({{}, {}});
            for (const auto& [k, rows] : groups) {
                std::vector<Term> row;
                for (const auto& item : q.projection) row.push_back(run(item.expr, Env{&k, &params, &rows}));
                out.rows.push_back(join(row));
            }
        }
    } catch (const TypeError&) {
        out.error = true;
    } catch (const HardError&) {
        out.error = true;
    }
    if (out.error) out.rows.clear();
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

// Engine result in the same shape (sorted serialized rows, error flag).
inline Outcome engine(const Query& q, const sens::Graph& g, const Params& params = {}) {
    Outcome out;
    try {
        auto t = sens::query::evaluate(q, g, params);
        out.columns = t.columns;
        for (const auto& r : t.rows) out.rows.push_back(join(r));
    } catch (const sens::query::EvalError&) {
        out.error = true;
    }
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

}  // namespace ref
