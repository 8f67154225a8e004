#pragma once
// KPI queries, scenario sweeps and the conformance corpus.
//
// Every KPI is computed by running a query through the engine. The ledger
// variants (suffix _direct) exist as an independent second path for tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sens/config.hpp"
#include "sens/fulfillment.hpp"
#include "sens/generator.hpp"
#include "sens/query.hpp"
#include "sens/schema.hpp"

namespace sens {

class MissingData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Order fulfillment, verbatim form.
inline constexpr std::string_view order_fulfillment_query =
    R"(SELECT  ?order (SUM(IF(REGEX(str(?x),"True"), 1, 0)) AS ?fulfill)
(SUM(IF(REGEX(str(?x),"False"), 1, 0)) AS ?notfulfill) WHERE { ?order isFulfilled  ?x. })";

// Node utilization at step t, with t as a parameter.
inline constexpr std::string_view node_utilization_query =
    "SELECT ?supplier (100*?quant/?max AS ?utilization) WHERE { ?supplier hasSaturation ?max. "
    "?supplier hasCapacity ?cap. ?cap hasQuantity ?quant. ?cap hasTimeStamp t.}";

// Average SCOR KPI, verbatim form.
inline constexpr std::string_view average_responsiveness_query =
    "SELECT AVG(?res) AS ?Responsiveness WHERE { ?supplier hasResponsiveness ?res. }";

struct FulfillmentCounts {
    std::int64_t fulfilled = 0;
    std::int64_t unfulfilled = 0;

    // Percent of resolved orders that were fulfilled; 0 with none resolved.
    double rate() const {
        std::int64_t n = fulfilled + unfulfilled;
        return n == 0 ? 0.0 : 100.0 * static_cast<double>(fulfilled) / static_cast<double>(n);
    }
    bool operator==(const FulfillmentCounts&) const = default;
};

inline FulfillmentCounts order_fulfillment(const Graph& g) {
    static const query::Query q = query::parse_query(order_fulfillment_query);
    auto table = query::evaluate(q, g);
    FulfillmentCounts c;
    for (const auto& row : table.rows) {
        c.fulfilled += as_integer(row[1]).value_or(0);
        c.unfulfilled += as_integer(row[2]).value_or(0);
    }
    return c;
}

// Per-node utilization percent at t for every node with a capacity record at t.
inline std::map<std::string, double> utilization_at(const Graph& g, std::int64_t t) {
    static const query::Query q = query::parse_query(node_utilization_query, {"t"});
    auto table = query::evaluate(q, g, {{"t", Term::timestep(t)}});
    std::map<std::string, double> out;
    for (const auto& row : table.rows) out[iri_name(row[0])] += *as_double(row[1]);
    return out;
}

// 100 * committed / saturation for one node at t, summed over its products.
inline double node_utilization(const Graph& g, const std::string& node, std::int64_t t) {
    static const query::Query q = query::parse_query(
        "SELECT (100 * ?quant / ?max AS ?u) WHERE { n :hasSaturation ?max . n :hasCapacity ?cap . "
        "?cap :hasTimeStamp t . ?cap :hasQuantity ?quant . }",
        {"n", "t"});
    auto table = query::evaluate(q, g, {{"n", Term::iri(node)}, {"t", Term::timestep(t)}});
    if (table.rows.empty())
        throw MissingData("no capacity record for :" + node + " at t=" + std::to_string(t));
    double sum = 0.0;
    for (const auto& row : table.rows) sum += *as_double(row[0]);
    return sum;
}

// Mean of 100 * committed / saturation over every capacity record.
inline double mean_utilization(const Graph& g) {
    static const query::Query q = query::parse_query(
        "SELECT (AVG(100 * ?quant / ?max) AS ?mean) WHERE { ?n :hasSaturation ?max . ?n :hasCapacity ?cap . "
        "?cap :hasQuantity ?quant . }");
    auto table = query::evaluate(q, g);
    return *as_double(table.rows.at(0).at(0));
}

// Same value read straight from the records, without the query engine.
inline double mean_utilization_direct(const Graph& g) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : g.find(std::nullopt, vocab::iri(vocab::hasSaturation), std::nullopt)) {
        std::string node = iri_name(t.subject);
        double sat = static_cast<double>(*as_integer(t.object));
        for (const auto& r : capacity_records(g, node)) {
            sum += 100.0 * static_cast<double>(r.quantity) / sat;
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

inline FulfillmentCounts order_fulfillment_direct(const Graph& g) {
    FulfillmentCounts c;
    for (const auto& t : g.find(std::nullopt, vocab::iri(vocab::isFulfilled), std::nullopt)) {
        if (as_boolean(t.object).value_or(false))
            ++c.fulfilled;
        else
            ++c.unfulfilled;
    }
    return c;
}

// Unweighted mean of a per-KPI property over all nodes carrying it.
inline double average_scor_kpi(const Graph& g, std::string_view property) {
    static const query::Query q =
        query::parse_query("SELECT (AVG(?res) AS ?avg) WHERE { ?node a :Node . ?node p ?res . }", {"p"});
    query::Params params{{"p", Term::iri(std::string(property))}};
    auto carriers = g.find(std::nullopt, params["p"], std::nullopt);
    if (std::none_of(carriers.begin(), carriers.end(), [&](const Triple& t) {
            return g.contains({t.subject, vocab::iri(vocab::type), vocab::iri(vocab::Node)});
        }))
        throw MissingData("no node carries :" + std::string(property));
    return *as_double(query::evaluate(q, g, params).rows.at(0).at(0));
}

struct KpiReport {
    FulfillmentCounts fulfillment;
    double mean_utilization = 0.0;
    std::map<std::string, double> average_kpis;  // property -> mean
    std::map<std::string, double> utilization;   // node -> percent at `at`
    std::optional<std::int64_t> at;
};

inline KpiReport kpi_report(const Graph& g, std::optional<std::int64_t> t = std::nullopt) {
    KpiReport r;
    r.fulfillment = order_fulfillment(g);
    r.mean_utilization = mean_utilization(g);
    for (auto k : vocab::kpi_properties) {
        try {
            r.average_kpis[std::string(k)] = average_scor_kpi(g, k);
        } catch (const MissingData&) {
        }
    }
    if (t) {
        r.at = t;
        r.utilization = utilization_at(g, *t);
    }
    return r;
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// metric,subject,value
inline std::string to_csv(const KpiReport& r) {
    std::string s = "metric,subject,value\n";
    s += "fulfilled,," + std::to_string(r.fulfillment.fulfilled) + "\n";
    s += "unfulfilled,," + std::to_string(r.fulfillment.unfulfilled) + "\n";
    s += "fulfillment_rate,," + format_number(r.fulfillment.rate()) + "\n";
    s += "mean_utilization,," + format_number(r.mean_utilization) + "\n";
    for (const auto& [k, v] : r.average_kpis) s += "average_kpi," + k + "," + format_number(v) + "\n";
    for (const auto& [n, v] : r.utilization)
        s += "utilization_t" + std::to_string(*r.at) + "," + n + "," + format_number(v) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioResult {
    std::string label;
    FulfillmentCounts fulfillment;
    double fulfillment_rate = 0.0;
    double mean_utilization = 0.0;
    double avg_responsiveness = 0.0;
    std::size_t orders = 0;
};

inline ScenarioResult run_scenario(const std::string& label, const GeneratorConfig& cfg,
                                   SimulationOptions opt = {}) {
    if (opt.replenishment_quantity == 0) {
        opt.replenishment_quantity = cfg.replenishment_quantity;
        opt.replenishment_period = cfg.replenishment_period;
    }
    SimulationState state(generate(cfg), opt);
    state.run(cfg.horizon);
    ScenarioResult r;
    r.label = label;
    r.fulfillment = order_fulfillment(state.graph());
    r.fulfillment_rate = r.fulfillment.rate();
    r.mean_utilization = mean_utilization(state.graph());
    r.avg_responsiveness = average_scor_kpi(state.graph(), vocab::hasResponsiveness);
    r.orders = all_orders(state.graph()).size();
    return r;
}

// Runs every scenario of the spec; `seed` replaces the base seed when given.
// Scenarios are independent, so `parallel` runs each on its own thread; the
// result order is the file order either way.
inline std::vector<ScenarioResult> run_scenarios(const ScenarioSpec& spec, std::optional<std::uint64_t> seed = std::nullopt,
                                                 bool parallel = false) {
    ScenarioSpec s = spec;
    if (seed) s.base.seed = *seed;
    std::vector<GeneratorConfig> configs;
    for (const auto& sc : s.scenarios) configs.push_back(s.config_for(sc));
    std::vector<ScenarioResult> out;
    if (!parallel) {
        for (std::size_t i = 0; i < configs.size(); ++i) out.push_back(run_scenario(s.scenarios[i].label, configs[i]));
        return out;
    }
    std::vector<std::future<ScenarioResult>> jobs;
    for (std::size_t i = 0; i < configs.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] { return run_scenario(s.scenarios[i].label, configs[i]); }));
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

inline std::string csv_field(std::string_view v) {
    if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
    std::string s = "\"";
    for (char c : v) {
        if (c == '"') s += '"';
        s += c;
    }
    return s + "\"";
}

inline std::string scenarios_csv(const std::vector<ScenarioResult>& rs) {
    std::string s = "label,orders,fulfilled,unfulfilled,fulfillment_rate,mean_utilization,avg_responsiveness\n";
    for (const auto& r : rs)
        s += csv_field(r.label) + "," + std::to_string(r.orders) + "," + std::to_string(r.fulfillment.fulfilled) +
             "," + std::to_string(r.fulfillment.unfulfilled) + "," + format_number(r.fulfillment_rate) + "," +
             format_number(r.mean_utilization) + "," + format_number(r.avg_responsiveness) + "\n";
    return s;
}

// Whitespace-separated columns for gnuplot-style tools.
inline std::string scenarios_dat(const std::vector<ScenarioResult>& rs) {
    std::string s = "# index label fulfillment_rate mean_utilization avg_responsiveness\n";
    for (std::size_t i = 0; i < rs.size(); ++i)
        s += std::to_string(i) + " " + rs[i].label + " " + format_number(rs[i].fulfillment_rate) + " " +
             format_number(rs[i].mean_utilization) + " " + format_number(rs[i].avg_responsiveness) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Conformance corpus

struct ConformanceCase {
    std::string id;
    std::string description;
    std::string text;
    std::vector<std::string> parameters;
    // Returns an error message when the table has the wrong shape.
    std::function<std::optional<std::string>(const query::ResultTable&, const Graph&)> check;
};

struct ConformanceResult {
    std::string id;
    bool passed = false;
    std::size_t rows = 0;
    std::string detail;
};

namespace detail {

enum class Kind { Iri, Integer, String, Quoted, Any };

inline bool kind_matches(const Term& t, Kind k) {
    switch (k) {
        case Kind::Iri: return t.is_iri();
        case Kind::Integer: return as_integer(t).has_value();
        case Kind::String: return as_string(t) != nullptr;
        case Kind::Quoted: return t.is_quoted();
        case Kind::Any: return true;
    }
    return false;
}

// Column names and term kinds the rows must have.
inline auto shape(std::vector<std::pair<std::string, Kind>> columns,
                  std::function<std::optional<std::string>(const std::vector<Term>&)> row_check = nullptr) {
    return [columns = std::move(columns), row_check = std::move(row_check)](
               const query::ResultTable& t, const Graph&) -> std::optional<std::string> {
        if (t.rows.empty()) return "no rows";
        if (t.columns.size() != columns.size()) return "expected " + std::to_string(columns.size()) + " columns";
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (t.columns[i] != columns[i].first) return "column " + std::to_string(i) + " is ?" + t.columns[i];
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < columns.size(); ++i)
                if (!kind_matches(row[i], columns[i].second))
                    return "?" + columns[i].first + " bound to unexpected term " + sens::to_string(row[i]);
            if (row_check)
                if (auto e = row_check(row)) return e;
        }
        return std::nullopt;
    };
}

}  // namespace detail

inline std::vector<ConformanceCase> conformance_cases() {
    using detail::Kind;
    using detail::shape;
    auto kpi_string = [](const std::vector<Term>& r) -> std::optional<std::string> {
        const std::string& s = *as_string(r[0]);
        auto colon = s.find(": ");
        if (colon == std::string::npos || colon == 0) return "KPI string '" + s + "' is not 'Name: value'";
        return std::nullopt;
    };
    return {
        {"Q1", "customers and their orders", "SELECT * WHERE { ?customer :makes ?order . }", {},
         shape({{"customer", Kind::Iri}, {"order", Kind::Iri}})},
        {"Q2", "links between customers", "SELECT * WHERE { ?c a :Customer . ?c2 a :Customer . ?c ?x ?c2 . }", {},
         shape({{"c", Kind::Iri}, {"c2", Kind::Iri}, {"x", Kind::Iri}})},
        {"Q3", "BOM edges of the finished product (quoted subject)",
         "SELECT * WHERE { << product :needsProduct ?p >> :needsQuantity ?q . }", {"product"},
         shape({{"p", Kind::Iri}, {"q", Kind::Integer}})},
        {"Q4", "processes of a customer node", "SELECT * WHERE { node :hasProcess ?process . }", {"node"},
         [](const query::ResultTable& t, const Graph& g) -> std::optional<std::string> {
             if (auto e = detail::shape({{"process", Kind::Iri}})(t, g)) return e;
             for (const auto& row : t.rows)
                 if (g.contains({row[0], vocab::iri(vocab::type), vocab::iri(vocab::Make)})) return std::nullopt;
             return "no process is typed :Make";
         }},
        {"Q5", "SCOR KPI summary strings of a customer node", "SELECT * WHERE { node :hasSCORKPI ?kpi . }", {"node"},
         shape({{"kpi", Kind::String}}, kpi_string)},
        {"Q6", "everything typed Node", "SELECT * WHERE { ?node ?a :Node . }", {},
         shape({{"node", Kind::Iri}, {"a", Kind::Iri}}, [](const std::vector<Term>& r) -> std::optional<std::string> {
             if (iri_name(r[1]) != vocab::type) return "predicate is not rdf:type";
             return std::nullopt;
         })},
        {"C1a", "customer interaction: orders", "SELECT * WHERE { ?customer :makes ?order . ?customer a :Customer . }", {},
         shape({{"customer", Kind::Iri}, {"order", Kind::Iri}})},
        {"C1b", "customer interaction: downstream customers",
         "SELECT * WHERE { ?customer :hasDownStreamNode ?c . ?customer a :Customer . }", {},
         shape({{"customer", Kind::Iri}, {"c", Kind::Iri}})},
        {"C2/C10", "material transactions and various materials",
         "SELECT * WHERE { << product :needsProduct ?p >> :needsQuantity ?q . }", {"product"},
         shape({{"p", Kind::Iri}, {"q", Kind::Integer}})},
        {"C4", "process description", "SELECT * WHERE { ?node :hasProcess ?process . ?process rdf:type :Make . }", {},
         shape({{"node", Kind::Iri}, {"process", Kind::Iri}})},
        {"C5", "SCOR metrics", "SELECT * WHERE { ?node :hasResponsiveness ?r . }", {},
         shape({{"node", Kind::Iri}, {"r", Kind::Integer}})},
        {"C8/C9", "vertices and edges", "SELECT * WHERE { ?node a :Node . ?node ?prop ?node2 . ?node2 a :Node . }", {},
         shape({{"node", Kind::Iri}, {"prop", Kind::Iri}, {"node2", Kind::Iri}})},
    };
}

// Parameters for the corpus: the finished product and the first customer
// that places orders.
inline query::Params conformance_params(const Graph& g) {
    query::Params p;
    auto oems = g.subjects(vocab::iri(vocab::type), vocab::iri(vocab::OEM));
    if (!oems.empty())
        if (auto prod = g.object(oems.front(), vocab::iri(vocab::manufactures))) p["product"] = *prod;
    auto makers = g.find(std::nullopt, vocab::iri(vocab::makes), std::nullopt);
    if (!makers.empty()) p["node"] = makers.front().subject;
    return p;
}

inline std::vector<ConformanceResult> conformance_corpus(const Graph& g) {
    query::Params params = conformance_params(g);
    std::vector<ConformanceResult> out;
    for (const auto& c : conformance_cases()) {
        ConformanceResult r;
        r.id = c.id;
        try {
            auto q = query::parse_query(c.text, c.parameters);
            auto table = query::evaluate(q, g, params);
            r.rows = table.rows.size();
            auto err = c.check(table, g);
            r.passed = !err;
            r.detail = err.value_or("ok");
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace sens
