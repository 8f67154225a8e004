#pragma once
// In-memory triple store.
//
// Triples are kept in a map keyed by their serialized form, so iteration is
// lexicographic by serialized triple. Three secondary indices map the
// serialized subject, predicate and object to the triples that carry them.
// match() returns solutions in that same lexicographic triple order.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sens/term.hpp"

namespace sens {

class MalformedTriple : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Variable name -> bound term. Ordered so that solutions compare and print
// deterministically.
using Solution = std::map<std::string, Term>;

inline void check_storable(const Triple& t) {
    if (!is_ground(t)) throw MalformedTriple("stored triple contains a variable: " + to_string(t));
    if (!t.predicate.is_iri()) throw MalformedTriple("predicate must be an IRI: " + to_string(t));
    if (!(t.subject.is_iri() || t.subject.is_quoted()))
        throw MalformedTriple("subject must be an IRI or quoted triple: " + to_string(t));
    auto check_quoted = [](const Term& term, auto& self) -> void {
        if (auto* inner = term.as_quoted()) {
            if (!inner->predicate.is_iri()) throw MalformedTriple("quoted predicate must be an IRI");
            if (!(inner->subject.is_iri() || inner->subject.is_quoted()))
                throw MalformedTriple("quoted subject must be an IRI or quoted triple");
            self(inner->subject, self);
            self(inner->object, self);
        }
    };
    check_quoted(t.subject, check_quoted);
    check_quoted(t.object, check_quoted);
    for (const Term* term : {&t.subject, &t.predicate, &t.object}) {
        if (auto* iri = term->as_iri()) {
            if (iri->name.empty()) throw MalformedTriple("empty IRI");
            for (char c : iri->name)
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '"' || c == '<' || c == '>')
                    throw MalformedTriple("IRI contains whitespace or a delimiter: '" + iri->name + "'");
        }
    }
}

// Unifies pattern against data, extending bindings. Returns false on clash.
inline bool unify(const Term& pattern, const Term& data, Solution& bindings) {
    if (auto* var = pattern.as_variable()) {
        auto [it, inserted] = bindings.try_emplace(var->name, data);
        return inserted || it->second == data;
    }
    if (auto* pq = pattern.as_quoted()) {
        auto* dq = data.as_quoted();
        if (!dq) return false;
        return unify(pq->subject, dq->subject, bindings) &&
               unify(pq->predicate, dq->predicate, bindings) &&
               unify(pq->object, dq->object, bindings);
    }
    return pattern == data;
}

class Graph {
public:
    Graph() = default;
    Graph(const Graph& other) { *this = other; }
    Graph(Graph&&) noexcept = default;
    Graph& operator=(Graph&&) noexcept = default;
    Graph& operator=(const Graph& other) {
        if (this != &other) {
            clear();
            for (const auto& [key, t] : other.triples_) insert(t);
        }
        return *this;
    }

    // Returns true iff the triple was not already present.
    bool insert(const Triple& t) {
        check_storable(t);
        std::string key = to_string(t);
        auto [it, inserted] = triples_.try_emplace(std::move(key), t);
        if (!inserted) return false;
        std::string_view k = it->first;
        const Triple* ptr = &it->second;
        subject_index_[to_string(t.subject)].emplace(k, ptr);
        predicate_index_[to_string(t.predicate)].emplace(k, ptr);
        object_index_[to_string(t.object)].emplace(k, ptr);
        return true;
    }

    bool remove(const Triple& t) {
        auto it = triples_.find(to_string(t));
        if (it == triples_.end()) return false;
        std::string_view k = it->first;
        erase_from(subject_index_, to_string(t.subject), k);
        erase_from(predicate_index_, to_string(t.predicate), k);
        erase_from(object_index_, to_string(t.object), k);
        triples_.erase(it);
        return true;
    }

    bool contains(const Triple& t) const { return triples_.count(to_string(t)) != 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    void clear() {
        triples_.clear();
        subject_index_.clear();
        predicate_index_.clear();
        object_index_.clear();
    }

    // All triples in lexicographic order of their serialized form.
    std::vector<Triple> triples() const {
        std::vector<Triple> out;
        out.reserve(triples_.size());
        for (const auto& [key, t] : triples_) out.push_back(t);
        return out;
    }

    template <class F>
    void for_each(F&& f) const {
        for (const auto& [key, t] : triples_) f(t);
    }

    // Solutions of a single pattern, in lexicographic order of the matched triple.
    std::vector<Solution> match(const TriplePattern& p) const {
        std::vector<Solution> out;
        visit_candidates(p, [&](const Triple& t) {
            Solution s;
            if (unify(p.subject, t.subject, s) && unify(p.predicate, t.predicate, s) &&
                unify(p.object, t.object, s))
                out.push_back(std::move(s));
        });
        return out;
    }

    // Triples matching optional fixed positions.
    std::vector<Triple> find(const std::optional<Term>& s, const std::optional<Term>& p,
                             const std::optional<Term>& o) const {
        TriplePattern pat{s.value_or(Term::variable("s")), p.value_or(Term::variable("p")),
                          o.value_or(Term::variable("o"))};
        std::vector<Triple> out;
        visit_candidates(pat, [&](const Triple& t) {
            if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o))
                out.push_back(t);
        });
        return out;
    }

    std::vector<Term> objects(const Term& subject, const Term& predicate) const {
        std::vector<Term> out;
        for (auto& t : find(subject, predicate, std::nullopt)) out.push_back(t.object);
        return out;
    }

    std::vector<Term> subjects(const Term& predicate, const Term& object) const {
        std::vector<Term> out;
        for (auto& t : find(std::nullopt, predicate, object)) out.push_back(t.subject);
        return out;
    }

    std::optional<Term> object(const Term& subject, const Term& predicate) const {
        auto objs = objects(subject, predicate);
        if (objs.empty()) return std::nullopt;
        return objs.front();
    }

    // Every indexed triple is stored and every stored triple is indexed under
    // each of its three positions.
    bool indices_coherent() const {
        auto check = [&](const Index& index, auto position) {
            std::size_t total = 0;
            for (const auto& [term_key, entries] : index) {
                if (entries.empty()) return false;
                for (const auto& [k, ptr] : entries) {
                    auto it = triples_.find(std::string(k));
                    if (it == triples_.end() || &it->second != ptr) return false;
                    if (to_string(position(*ptr)) != term_key) return false;
                }
                total += entries.size();
            }
            return total == triples_.size();
        };
        return check(subject_index_, [](const Triple& t) { return t.subject; }) &&
               check(predicate_index_, [](const Triple& t) { return t.predicate; }) &&
               check(object_index_, [](const Triple& t) { return t.object; });
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        if (a.triples_.size() != b.triples_.size()) return false;
        auto ia = a.triples_.begin();
        for (auto ib = b.triples_.begin(); ib != b.triples_.end(); ++ia, ++ib)
            if (ia->first != ib->first) return false;
        return true;
    }

private:
    using Entries = std::map<std::string_view, const Triple*>;
    using Index = std::unordered_map<std::string, Entries>;

    static void erase_from(Index& index, const std::string& term_key, std::string_view k) {
        auto it = index.find(term_key);
        if (it == index.end()) return;
        it->second.erase(k);
        if (it->second.empty()) index.erase(it);
    }

    // Calls f for every triple that could match p, using the smallest index
    // among the ground positions, or a full scan when none is ground.
    template <class F>
    void visit_candidates(const TriplePattern& p, F&& f) const {
        const Entries* best = nullptr;
        bool any_ground = false;
        auto consider = [&](const Term& term, const Index& index) {
            if (!term.is_ground()) return;
            any_ground = true;
            auto it = index.find(to_string(term));
            static const Entries none;
            const Entries* e = it == index.end() ? &none : &it->second;
            if (!best || e->size() < best->size()) best = e;
        };
        consider(p.subject, subject_index_);
        consider(p.predicate, predicate_index_);
        consider(p.object, object_index_);
        if (any_ground) {
            for (const auto& [k, ptr] : *best) f(*ptr);
        } else {
            for (const auto& [k, t] : triples_) f(t);
        }
    }

    std::map<std::string, Triple> triples_;
    Index subject_index_;
    Index predicate_index_;
    Index object_index_;
};

}  // namespace sens
