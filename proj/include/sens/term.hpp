#pragma once
// Terms and triples of the knowledge graph.
//
// A term is an IRI, a typed literal, a variable (patterns only) or a quoted
// triple. Quoted triples nest; equality is structural. Every term has exactly
// one serialized form, and that form doubles as the ordering and index key.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>

namespace sens {

enum class Datatype { Integer, Decimal, String, Boolean, Timestep };

inline std::string_view datatype_tag(Datatype type) {
    switch (type) {
        case Datatype::Integer: return "integer";
        case Datatype::Decimal: return "decimal";
        case Datatype::String: return "string";
        case Datatype::Boolean: return "boolean";
        case Datatype::Timestep: return "timestep";
    }
    return "string";
}

struct Iri {
    std::string name;
    bool operator==(const Iri&) const = default;
};

struct Variable {
    std::string name;
    // Parameters are named runtime constants ($name); they are substituted
    // before matching and never reach a graph.
    bool parameter = false;
    bool operator==(const Variable&) const = default;
};

struct Literal {
    Datatype type = Datatype::Integer;
    std::variant<std::int64_t, double, std::string, bool> value;
    bool operator==(const Literal&) const = default;
};

struct Triple;

struct Quoted {
    std::shared_ptr<const Triple> triple;
};

class Term {
public:
    using Storage = std::variant<Iri, Literal, Variable, Quoted>;

    Term() = default;

    static Term iri(std::string name) { return Term(Iri{std::move(name)}); }
    static Term variable(std::string name) { return Term(Variable{std::move(name), false}); }
    static Term parameter(std::string name) { return Term(Variable{std::move(name), true}); }
    static Term integer(std::int64_t v) { return Term(Literal{Datatype::Integer, v}); }
    static Term timestep(std::int64_t v) { return Term(Literal{Datatype::Timestep, v}); }
    static Term boolean(bool v) { return Term(Literal{Datatype::Boolean, v}); }
    static Term string(std::string v) { return Term(Literal{Datatype::String, std::move(v)}); }
    static Term decimal(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("decimal literal must be finite");
        if (v == 0.0) v = 0.0;  // fold -0.0
        return Term(Literal{Datatype::Decimal, v});
    }
    static Term quoted(Triple t);

    bool is_iri() const { return std::holds_alternative<Iri>(v_); }
    bool is_literal() const { return std::holds_alternative<Literal>(v_); }
    bool is_variable() const { return std::holds_alternative<Variable>(v_); }
    bool is_quoted() const { return std::holds_alternative<Quoted>(v_); }

    const Iri* as_iri() const { return std::get_if<Iri>(&v_); }
    const Literal* as_literal() const { return std::get_if<Literal>(&v_); }
    const Variable* as_variable() const { return std::get_if<Variable>(&v_); }
    const Triple* as_quoted() const;

    const Storage& storage() const { return v_; }

    // True when no variable or parameter occurs anywhere inside the term.
    bool is_ground() const;

private:
    explicit Term(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

struct Triple {
    Term subject;
    Term predicate;
    Term object;
};

// Patterns share the triple shape; any position may hold a variable.
using TriplePattern = Triple;

inline bool operator==(const Term& a, const Term& b);

inline bool operator==(const Triple& a, const Triple& b) {
    return a.subject == b.subject && a.predicate == b.predicate && a.object == b.object;
}

inline bool operator==(const Quoted& a, const Quoted& b) {
    if (a.triple == b.triple) return true;
    if (!a.triple || !b.triple) return false;
    return *a.triple == *b.triple;
}

inline bool operator==(const Term& a, const Term& b) { return a.storage() == b.storage(); }

inline Term Term::quoted(Triple t) { return Term(Quoted{std::make_shared<const Triple>(std::move(t))}); }

inline const Triple* Term::as_quoted() const {
    auto* q = std::get_if<Quoted>(&v_);
    return q ? q->triple.get() : nullptr;
}

inline bool Term::is_ground() const {
    if (is_variable()) return false;
    if (auto* t = as_quoted())
        return t->subject.is_ground() && t->predicate.is_ground() && t->object.is_ground();
    return true;
}

inline bool is_ground(const Triple& t) {
    return t.subject.is_ground() && t.predicate.is_ground() && t.object.is_ground();
}

// ---------------------------------------------------------------------------
// Numeric helpers

inline bool is_numeric(const Term& t) {
    auto* l = t.as_literal();
    return l && (l->type == Datatype::Integer || l->type == Datatype::Decimal ||
                 l->type == Datatype::Timestep);
}

// Integer view of an integer or timestep literal.
inline std::optional<std::int64_t> as_integer(const Term& t) {
    auto* l = t.as_literal();
    if (!l || (l->type != Datatype::Integer && l->type != Datatype::Timestep)) return std::nullopt;
    return std::get<std::int64_t>(l->value);
}

inline std::optional<double> as_double(const Term& t) {
    auto* l = t.as_literal();
    if (!l) return std::nullopt;
    if (l->type == Datatype::Decimal) return std::get<double>(l->value);
    if (l->type == Datatype::Integer || l->type == Datatype::Timestep)
        return static_cast<double>(std::get<std::int64_t>(l->value));
    return std::nullopt;
}

inline std::optional<bool> as_boolean(const Term& t) {
    auto* l = t.as_literal();
    if (!l || l->type != Datatype::Boolean) return std::nullopt;
    return std::get<bool>(l->value);
}

inline const std::string* as_string(const Term& t) {
    auto* l = t.as_literal();
    if (!l || l->type != Datatype::String) return nullptr;
    return &std::get<std::string>(l->value);
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string format_decimal(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, end);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

inline std::string escape_string(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// Lexical form without quoting or datatype tag.
inline std::string lexical_form(const Literal& l) {
    switch (l.type) {
        case Datatype::Integer:
        case Datatype::Timestep: return std::to_string(std::get<std::int64_t>(l.value));
        case Datatype::Decimal: return format_decimal(std::get<double>(l.value));
        case Datatype::String: return std::get<std::string>(l.value);
        case Datatype::Boolean: return std::get<bool>(l.value) ? "true" : "false";
    }
    return {};
}

inline std::string to_string(const Triple& t);

inline std::string to_string(const Term& term) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Iri>) {
                return ":" + v.name;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return (v.parameter ? "$" : "?") + v.name;
            } else if constexpr (std::is_same_v<T, Quoted>) {
                return "<< " + to_string(*v.triple) + " >>";
            } else {
                switch (v.type) {
                    case Datatype::Integer:
                    case Datatype::Decimal: return lexical_form(v);
                    case Datatype::String: return escape_string(std::get<std::string>(v.value));
                    default:
                        return escape_string(lexical_form(v)) + "^^" + std::string(datatype_tag(v.type));
                }
            }
        },
        term.storage());
}

inline std::string to_string(const Triple& t) {
    return to_string(t.subject) + " " + to_string(t.predicate) + " " + to_string(t.object);
}

// Total order used for deterministic iteration: numeric literals compare by
// value, everything else by serialized form.
inline int compare_terms(const Term& a, const Term& b) {
    if (is_numeric(a) && is_numeric(b)) {
        auto ia = as_integer(a), ib = as_integer(b);
        if (ia && ib) {
            if (*ia != *ib) return *ia < *ib ? -1 : 1;
        } else {
            double da = *as_double(a), db = *as_double(b);
            if (da != db) return da < db ? -1 : 1;
        }
    }
    int c = to_string(a).compare(to_string(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// Convenience: IRI name or empty string.
inline const std::string& iri_name(const Term& t) {
    static const std::string empty;
    auto* i = t.as_iri();
    return i ? i->name : empty;
}

}  // namespace sens
