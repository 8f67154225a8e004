#include <gtest/gtest.h>

#include <random>

#include "sens/graph.hpp"
#include "sens/graph_io.hpp"
#include "support/random_cases.hpp"

using namespace sens;

namespace {

Term I(const std::string& n) { return Term::iri(n); }
Term V(const std::string& n) { return Term::variable(n); }

// Linear scan with its own unifier, independent of Graph::match.
std::vector<std::string> scan(const Graph& g, const TriplePattern& p) {
    std::function<bool(const Term&, const Term&, Solution&)> u = [&](const Term& pat, const Term& d, Solution& s) {
        if (auto* v = pat.as_variable()) {
            auto [it, fresh] = s.emplace(v->name, d);
            return fresh || it->second == d;
        }
        if (pat.is_quoted())
            return d.is_quoted() && u(pat.as_quoted()->subject, d.as_quoted()->subject, s) &&
                   u(pat.as_quoted()->predicate, d.as_quoted()->predicate, s) &&
                   u(pat.as_quoted()->object, d.as_quoted()->object, s);
        return pat == d;
    };
    std::vector<std::string> out;
    for (const auto& t : g.triples()) {
        Solution s;
        if (u(p.subject, t.subject, s) && u(p.predicate, t.predicate, s) && u(p.object, t.object, s)) {
            std::string k;
            for (auto& [n, v] : s) k += n + "=" + to_string(v) + ";";
            out.push_back(k);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> keys(const std::vector<Solution>& sols) {
    std::vector<std::string> out;
    for (const auto& s : sols) {
        std::string k;
        for (auto& [n, v] : s) k += n + "=" + to_string(v) + ";";
        out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Term, SerializesEachKind) {
    EXPECT_EQ(to_string(I("Node1.1")), ":Node1.1");
    EXPECT_EQ(to_string(Term::integer(-4)), "-4");
    EXPECT_EQ(to_string(Term::decimal(2.5)), "2.5");
    EXPECT_EQ(to_string(Term::decimal(3)), "3.0");
    EXPECT_EQ(to_string(Term::string("a \"b\"")), "\"a \\\"b\\\"\"");
    EXPECT_EQ(to_string(Term::boolean(true)), "\"true\"^^boolean");
    EXPECT_EQ(to_string(Term::timestep(178)), "\"178\"^^timestep");
    EXPECT_EQ(to_string(Term::quoted({I("ProductA"), I("needsProduct"), I("Product1")})),
              "<< :ProductA :needsProduct :Product1 >>");
}

TEST(Term, QuotedEqualityIsStructural) {
    Term a = Term::quoted({I("a"), I("b"), I("c")});
    Term b = Term::quoted({I("a"), I("b"), I("c")});
    EXPECT_EQ(a, b);
    EXPECT_FALSE(a == Term::quoted({I("a"), I("b"), I("d")}));
}

TEST(Term, IntegerAndTimestepAreDistinctTerms) {
    EXPECT_FALSE(Term::integer(5) == Term::timestep(5));
    EXPECT_EQ(as_integer(Term::timestep(5)), 5);
}

TEST(Graph, InsertReportsNovelty) {
    Graph g;
    Triple t{I("Node1.1"), I("hasDownStreamNode"), I("Node1.2")};
    EXPECT_TRUE(g.insert(t));
    EXPECT_EQ(g.size(), 1u);
    EXPECT_FALSE(g.insert(t));
    EXPECT_EQ(g.size(), 1u);
}

TEST(Graph, StoresQuotedSubjectOnce) {
    Graph g;
    Triple t{Term::quoted({I("ProductA"), I("needsProduct"), I("Product1")}), I("needsQuantity"), Term::integer(1)};
    EXPECT_TRUE(g.insert(t));
    EXPECT_FALSE(g.insert(t));
    EXPECT_EQ(g.size(), 1u);
    EXPECT_TRUE(g.contains(t));
}

TEST(Graph, RejectsMalformedTriples) {
    Graph g;
    EXPECT_THROW(g.insert({V("x"), I("p"), I("o")}), MalformedTriple);
    EXPECT_THROW(g.insert({I("s"), Term::integer(1), I("o")}), MalformedTriple);
    EXPECT_THROW(g.insert({I("s"), I("p"), Term::quoted({I("a"), V("b"), I("c")})}), MalformedTriple);
    EXPECT_THROW(g.insert({I("has space"), I("p"), I("o")}), MalformedTriple);
    EXPECT_TRUE(g.empty());
}

TEST(Graph, RemoveKeepsIndicesCoherent) {
    Graph g;
    g.insert({I("a"), I("p"), I("b")});
    g.insert({I("a"), I("q"), I("c")});
    EXPECT_TRUE(g.remove({I("a"), I("p"), I("b")}));
    EXPECT_FALSE(g.remove({I("a"), I("p"), I("b")}));
    EXPECT_EQ(g.size(), 1u);
    EXPECT_TRUE(g.indices_coherent());
    EXPECT_TRUE(g.match({V("s"), I("p"), V("o")}).empty());
}

TEST(Graph, MatchBindsCustomersAndOrders) {
    Graph g;
    g.insert({I("Node3.2"), I("makes"), I("OrderJZHu5")});
    g.insert({I("Node3.1"), I("makes"), I("OrderAbc")});
    g.insert({I("Node3.1"), I("hasPriority"), Term::integer(2)});
    auto sols = g.match({V("c"), I("makes"), V("o")});
    ASSERT_EQ(sols.size(), 2u);
    bool found = false;
    for (const auto& s : sols) found = found || (s.at("c") == I("Node3.2") && s.at("o") == I("OrderJZHu5"));
    EXPECT_TRUE(found);
}

TEST(Graph, MatchOnEmptyGraphIsEmpty) {
    Graph g;
    EXPECT_TRUE(g.match({V("s"), V("p"), V("o")}).empty());
}

TEST(Graph, MatchThroughQuotedSubject) {
    Graph g;
    g.insert({Term::quoted({I("ProductA"), I("needsProduct"), I("Product1")}), I("needsQuantity"), Term::integer(1)});
    g.insert({I("ProductA"), I("needsProduct"), I("Product1")});
    auto sols = g.match({Term::quoted({I("ProductA"), I("needsProduct"), V("p")}), I("needsQuantity"), V("q")});
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0].at("p"), I("Product1"));
    EXPECT_EQ(sols[0].at("q"), Term::integer(1));
}

TEST(Graph, RepeatedVariableMustAgree) {
    Graph g;
    g.insert({I("a"), I("p"), I("a")});
    g.insert({I("a"), I("p"), I("b")});
    auto sols = g.match({V("x"), I("p"), V("x")});
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0].at("x"), I("a"));
}

TEST(Graph, MatchOrderIsLexicographic) {
    Graph g;
    for (auto n : {"c", "a", "b"}) g.insert({I(n), I("p"), I("o")});
    auto sols = g.match({V("s"), I("p"), I("o")});
    ASSERT_EQ(sols.size(), 3u);
    EXPECT_EQ(sols[0].at("s"), I("a"));
    EXPECT_EQ(sols[1].at("s"), I("b"));
    EXPECT_EQ(sols[2].at("s"), I("c"));
}

TEST(GraphIo, EmptyRoundTrip) {
    EXPECT_EQ(serialize(Graph{}), "");
    EXPECT_TRUE(parse_graph("").empty());
}

TEST(GraphIo, QuotedStatementIsOneLine) {
    Graph g;
    g.insert({Term::quoted({I("SP1"), I("needsNode"), I("Supplier1.1")}), I("getsProduct"), I("Product1.1")});
    std::string text = serialize(g);
    EXPECT_EQ(text, "<< :SP1 :needsNode :Supplier1.1 >> :getsProduct :Product1.1 .\n");
    EXPECT_EQ(parse_graph(text), g);
}

TEST(GraphIo, ParsesCommentsTypesAndAliases) {
    Graph g = parse_graph(
        "# header\n"
        "\n"
        ":o1 a :Order .\n"
        ":o1 :hasDeliveryTime \"12\"^^timestep .\n"
        ":o1 :isFulfilled \"true\"^^xsd:boolean .\n"
        ":o1 :hasCost 2.5 .\n");
    EXPECT_EQ(g.size(), 4u);
    EXPECT_TRUE(g.contains({I("o1"), I("type"), I("Order")}));
    EXPECT_TRUE(g.contains({I("o1"), I("hasDeliveryTime"), Term::timestep(12)}));
    EXPECT_TRUE(g.contains({I("o1"), I("isFulfilled"), Term::boolean(true)}));
    EXPECT_TRUE(g.contains({I("o1"), I("hasCost"), Term::decimal(2.5)}));
}

TEST(GraphIo, ErrorsCarryLineNumbers) {
    try {
        parse_graph(":a :b :c .\n:a :b\n");
        FAIL() << "expected a parse error";
    } catch (const GraphParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_graph(":a :b :c"), GraphParseError);
    EXPECT_THROW(parse_graph(":a :b \"open .\n"), GraphParseError);
    EXPECT_THROW(parse_graph(":a :b ?x .\n"), GraphParseError);
    EXPECT_THROW(parse_graph(":a 5 :c .\n"), GraphParseError);
    EXPECT_THROW(parse_graph(":a :b \"x\"^^unknown .\n"), GraphParseError);
    EXPECT_THROW(parse_graph("<< :a :b :c :d .\n"), GraphParseError);
}

TEST(GraphIo, StringEscapesRoundTrip) {
    Graph g;
    g.insert({I("s"), I("p"), Term::string("tab\there \"quoted\" back\\slash\nnewline")});
    EXPECT_EQ(parse_graph(serialize(g)), g);
}

TEST(GraphIo, OutputIsSorted) {
    Graph g;
    g.insert({I("z"), I("p"), I("o")});
    g.insert({I("a"), I("p"), I("o")});
    EXPECT_EQ(serialize(g), ":a :p :o .\n:z :p :o .\n");
}

TEST(GraphProperty, RandomGraphsRoundTrip) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        randomized::Source s(seed);
        Graph g = randomized::graph(s, 1000);
        std::string text = serialize(g);
        Graph back = parse_graph(text);
        ASSERT_EQ(back, g) << "seed " << seed;
        ASSERT_EQ(serialize(back), text) << "seed " << seed;
        ASSERT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), g.size());
    }
}

TEST(GraphProperty, MatchEqualsLinearScan) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        randomized::Source s(seed);
        Graph g = randomized::graph(s, 1000);
        for (int k = 0; k < 20; ++k) {
            auto pos = [&](bool allow_quoted) -> Term {
                int r = s.below(10);
                if (r < 5) return V(std::string(1, static_cast<char>('a' + s.below(3))));
                if (allow_quoted && r == 9)
                    return Term::quoted({V("x"), randomized::predicate(s), s.chance(0.5) ? V("y") : randomized::entity(s)});
                return r < 8 ? randomized::entity(s) : randomized::literal(s);
            };
            TriplePattern p{pos(true), s.chance(0.3) ? V("p") : randomized::predicate(s), pos(true)};
            ASSERT_EQ(keys(g.match(p)), scan(g, p)) << "seed " << seed << " pattern " << to_string(p);
        }
    }
}

TEST(GraphProperty, IndicesStayCoherentUnderInsertRemove) {
    std::mt19937_64 rng(7);
    randomized::Source s(7);
    Graph g;
    std::vector<Triple> inserted;
    for (int step = 0; step < 3000; ++step) {
        if (!inserted.empty() && rng() % 3 == 0) {
            std::size_t i = rng() % inserted.size();
            g.remove(inserted[i]);
            inserted.erase(inserted.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            Triple t{randomized::entity(s), randomized::predicate(s),
                     s.chance(0.5) ? randomized::entity(s) : randomized::literal(s)};
            if (g.insert(t)) inserted.push_back(t);
        }
        if (step % 100 == 0) {
            ASSERT_TRUE(g.indices_coherent()) << "step " << step;
        }
    }
    EXPECT_TRUE(g.indices_coherent());
    EXPECT_EQ(g.size(), inserted.size());
}

TEST(GraphProperty, CopiesAreIndependent) {
    Graph g;
    g.insert({I("a"), I("p"), I("b")});
    Graph h = g;
    h.insert({I("a"), I("p"), I("c")});
    EXPECT_EQ(g.size(), 1u);
    EXPECT_EQ(h.match({I("a"), I("p"), V("o")}).size(), 2u);
    EXPECT_TRUE(h.indices_coherent());
}
