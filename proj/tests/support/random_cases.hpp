#pragma once
// Random graphs and queries for differential testing against the reference
// evaluator. Numeric data is limited to integers and halves so sums are exact
// in any order.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sens/graph.hpp"
#include "sens/graph_io.hpp"
#include "sens/query.hpp"

namespace randomized {

using sens::Graph;
using sens::Term;

class Source {
public:
    explicit Source(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
    }

private:
    std::mt19937_64 rng_;
};

inline const std::vector<std::string>& entities() {
    static const std::vector<std::string> v = {"e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7",
                                               "e8", "e9", "e10", "e11", "e12", "e13", "e14"};
    return v;
}
inline const std::vector<std::string>& predicates() {
    static const std::vector<std::string> v = {"p0", "p1", "p2", "p3", "p4"};
    return v;
}

// Literal in graph syntax and query syntax (the two coincide for these).
inline const std::vector<std::string>& literal_texts() {
    static const std::vector<std::string> v = {"-3", "0",    "1",  "2",       "3",  "5",     "7",  "12",
                                               "0.5", "1.5", "-2.5", "\"a\"", "\"ab\"", "\"True\"", "\"b c\"",
                                               "\"\"", "true", "false"};
    return v;
}

inline Term literal(Source& s) {
    static const std::vector<Term> v = [] {
        std::vector<Term> out;
        for (const auto& t : literal_texts()) out.push_back(sens::parse_term(t));
        out.push_back(Term::timestep(3));
        out.push_back(Term::timestep(12));
        return out;
    }();
    return s.pick(v);
}

inline Term entity(Source& s) { return Term::iri(s.pick(entities())); }
inline Term predicate(Source& s) { return Term::iri(s.pick(predicates())); }

inline Graph graph(Source& s, int max_triples) {
    Graph g;
    int n = s.below(max_triples + 1);
    for (int i = 0; i < n; ++i) {
        Term subj = s.chance(0.1) ? Term::quoted({entity(s), predicate(s), entity(s)}) : entity(s);
        Term obj;
        int r = s.below(20);
        if (r < 9)
            obj = entity(s);
        else if (r < 19)
            obj = literal(s);
        else
            obj = Term::quoted({entity(s), predicate(s), s.chance(0.5) ? entity(s) : literal(s)});
        g.insert({subj, predicate(s), obj});
    }
    return g;
}

struct Case {
    std::string text;
    std::vector<std::string> parameters;
    sens::query::Params params;
};

class QueryBuilder {
public:
    explicit QueryBuilder(Source& s) : s_(s) {}

    Case build() {
        Case c;
        int patterns = 1 + s_.below(3);
        std::string where;
        for (int i = 0; i < patterns; ++i) where += pattern() + " . ";
        if (vars_.empty()) {
            where += "?a :p0 ?b . ";
            vars_ = {"a", "b"};
        }
        int filters = s_.below(4) / 2;
        for (int i = 0; i < filters; ++i) where += "FILTER (" + condition(2) + ") ";
        std::string head = projection();
        if (uses_k_) {
            c.parameters.push_back("k");
            c.params["k"] = Term::integer(s_.below(8));
        }
        c.text = "SELECT " + head + " WHERE { " + where + "}" + modifiers_;
        return c;
    }

private:
    // Reuses an earlier pattern's variable or introduces a new one; repeats
    // within one pattern are rare so most patterns are not self-loops.
    std::string variable() {
        static const std::vector<std::string> pool = {"a", "b", "c", "d"};
        std::vector<std::string> earlier;
        for (const auto& v : vars_)
            if (std::find(local_.begin(), local_.end(), v) == local_.end()) earlier.push_back(v);
        std::string v;
        if (!earlier.empty() && s_.chance(0.5)) {
            v = s_.pick(earlier);
        } else {
            std::vector<std::string> unused;
            for (const auto& p : pool)
                if (std::find(local_.begin(), local_.end(), p) == local_.end() || s_.chance(0.1)) unused.push_back(p);
            v = s_.pick(unused.empty() ? pool : unused);
        }
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end()) vars_.push_back(v);
        local_.push_back(v);
        return v;
    }

    std::string pattern() {
        local_.clear();
        std::string subj, pred, obj;
        if (s_.chance(0.08)) {
            subj = "<< ?" + variable() + " :" + s_.pick(predicates()) + " ?" + variable() + " >>";
        } else if (s_.chance(0.8)) {
            subj = "?" + variable();
        } else {
            subj = ":" + s_.pick(entities());
        }
        pred = s_.chance(0.2) ? "?" + variable() : ":" + s_.pick(predicates());
        int r = s_.below(10);
        if (r < 7)
            obj = "?" + variable();
        else if (r < 9)
            obj = ":" + s_.pick(entities());
        else
            obj = s_.pick(literal_texts());
        return subj + " " + pred + " " + obj;
    }

    std::string operand() {
        int r = s_.below(10);
        if (r < 5) return "?" + s_.pick(vars_);
        if (r < 8) return s_.pick(literal_texts());
        if (r < 9) {
            uses_k_ = true;
            return "$k";
        }
        return ":" + s_.pick(entities());
    }

    std::string condition(int depth) {
        static const std::vector<std::string> cmp = {"=", "!=", "<", "<=", ">", ">="};
        static const std::vector<std::string> arith = {"+", "-", "*", "/"};
        int r = s_.below(depth > 0 ? 8 : 4);
        switch (r) {
            case 0:
            case 1: return operand() + " " + s_.pick(cmp) + " " + operand();
            case 2: return "(" + operand() + " " + s_.pick(arith) + " " + operand() + ") " + s_.pick(cmp) + " " + operand();
            case 3: return "REGEX(str(" + operand() + "), \"" + std::string(s_.chance(0.5) ? "^a" : "b") + "\"" +
                           (s_.chance(0.3) ? ", \"i\"" : "") + ")";
            case 4: return "(" + condition(depth - 1) + ") && (" + condition(depth - 1) + ")";
            case 5: return "(" + condition(depth - 1) + ") || (" + condition(depth - 1) + ")";
            case 6: return "!(" + condition(depth - 1) + ")";
            default: return "IF(" + condition(depth - 1) + ", " + operand() + ", " + operand() + ")";
        }
    }

    std::string projection() {
        int r = s_.below(10);
        if (r < 4) return "*";
        if (r < 7) {
            std::string h;
            int n = 1 + s_.below(static_cast<int>(vars_.size()));
            for (int i = 0; i < n; ++i) h += "?" + s_.pick(vars_) + " ";
            if (s_.chance(0.3)) modifiers_ = " ORDER BY " + std::string(s_.chance(0.5) ? "DESC" : "ASC") + "(?" + vars_[0] + ")";
            return h;
        }
        if (r < 8) {
            static const std::vector<std::string> arith = {"+", "-", "*", "/"};
            return "?" + s_.pick(vars_) + " (" + operand() + " " + s_.pick(arith) + " " + operand() + " AS ?x)";
        }
        std::string fn = s_.chance(0.5) ? "SUM" : "AVG";
        std::string agg = "(" + fn + "(" + (s_.chance(0.7) ? "?" + s_.pick(vars_) : "IF(" + condition(0) + ", 1, 0)") +
                          ") AS ?agg)";
        int shape = s_.below(3);
        if (shape == 0) return agg;
        std::string key = s_.pick(vars_);
        if (shape == 2) modifiers_ = " GROUP BY ?" + key;
        return "?" + key + " " + agg;
    }

    Source& s_;
    std::vector<std::string> vars_;
    std::vector<std::string> local_;
    bool uses_k_ = false;
    std::string modifiers_;
};

inline Case query(Source& s) { return QueryBuilder(s).build(); }

}  // namespace randomized
