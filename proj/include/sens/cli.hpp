#pragma once
// The `sens` command-line front end. run_cli is the whole program; main only
// forwards argv and the standard streams.
//
// Exit codes: 0 success, 1 usage or file error, 2 data or validation error.
// Output files are written to a temporary sibling and renamed into place, so
// a failing command never leaves a partial file behind.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sens/analytics.hpp"
#include "sens/config.hpp"
#include "sens/fulfillment.hpp"
#include "sens/generator.hpp"
#include "sens/graph_io.hpp"
#include "sens/query.hpp"
#include "sens/schema.hpp"

namespace sens::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "-" reads standard input.
inline std::string read_file(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Empty path or "-" writes to `out`.
inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write '" + path + "'");
        f << content;
        f.close();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw UsageError("cannot write '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw UsageError("cannot write '" + path + "'");
    }
}

// RFC 4180 field quoting.
inline std::string csv_field(std::string_view v) { return sens::csv_field(v); }

// Literals print as their lexical form; IRIs and quoted triples as serialized.
inline std::string cell_text(const Term& t) {
    if (auto* l = t.as_literal()) return lexical_form(*l);
    return to_string(t);
}

inline std::string table_csv(const query::ResultTable& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + csv_field(t.columns[i]);
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_field(cell_text(row[i]));
        s += "\n";
    }
    return s;
}

// name=value; the value uses the graph term syntax, and a bare local name
// (no quote, colon or space) is read as an IRI.
inline std::pair<std::string, Term> parse_param(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects name=value, got '" + arg + "'");
    std::string name = arg.substr(0, eq);
    std::string value = arg.substr(eq + 1);
    if (value.empty()) throw UsageError("--param " + name + " has an empty value");
    try {
        return {name, parse_term(value)};
    } catch (const std::exception&) {
        if (value.find_first_of(" \t\"<>:") == std::string::npos) return {name, Term::iri(value)};
        throw UsageError("--param " + name + ": cannot parse value '" + value + "'");
    }
}

inline Graph load_graph_file(const std::string& path) {
    std::string text = read_file(path);
    try {
        return load_sens_graph(text);
    } catch (const GraphParseError& e) {
        throw DataError(path + ": " + e.what());
    }
}

struct ConfigFlags {
    std::string preset;
    std::string config;
    std::uint64_t seed = 0;
    int horizon = 0;
    std::vector<std::string> settings;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* horizon_opt = nullptr;

    void add_to(CLI::App* app) {
        app->add_option("--preset", preset, "Industry preset")->check(CLI::IsMember({"automotive", "dairy"}));
        app->add_option("--config", config, "Generator config file");
        seed_opt = app->add_option("--seed", seed, "RNG seed (overrides the config)");
        horizon_opt = app->add_option("--horizon", horizon, "Demand horizon in steps (overrides the config)");
        app->add_option("--set", settings, "Config override key=value (repeatable)");
    }

    bool given() const { return !preset.empty() || !config.empty(); }

    GeneratorConfig resolve() const {
        GeneratorConfig c;
        if (!preset.empty()) c = sens::preset(preset);
        if (!config.empty()) {
            try {
                c = parse_config(read_file(config), c);
            } catch (const ConfigParseError& e) {
                throw DataError(config + ": " + e.what());
            }
        }
        for (const auto& s : settings) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
            try {
                apply_setting(c, std::string(detail::trim(s.substr(0, eq))), s.substr(eq + 1));
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--set: ") + e.what());
            }
        }
        if (seed_opt->count()) c.seed = seed;
        if (horizon_opt->count()) c.horizon = horizon;
        if (auto errors = validate_config(c); !errors.empty()) throw InvalidConfig(std::move(errors));
        return c;
    }
};

inline std::string steps_csv(const std::vector<StepReport>& steps) {
    std::string s = "t,considered,from_stock,produced,unfulfilled\n";
    for (const auto& r : steps)
        s += std::to_string(r.t) + "," + std::to_string(r.considered) + "," + std::to_string(r.from_stock) + "," +
             std::to_string(r.produced) + "," + std::to_string(r.unfulfilled) + "\n";
    return s;
}

inline void require_valid(const Graph& g, bool allow_extra, std::ostream& err) {
    auto vs = validate(g, {allow_extra});
    if (has_errors(vs)) {
        err << format_report(vs);
        throw DataError("graph failed validation");
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Semantic supply-chain knowledge graph toolkit", "sens"};
    app.require_subcommand(1);

    ConfigFlags gen_flags;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Generate a supply-chain graph from a preset or config");
    gen_flags.add_to(gen);
    gen->add_option("--out", gen_out, "Output graph file (default: stdout)");

    std::string sim_graph, sim_out, sim_final;
    int sim_horizon = 178;
    std::int64_t sim_repl_q = 0;
    int sim_repl_p = 10;
    bool sim_extra = false;
    auto* sim = app.add_subcommand("simulate", "Run demand fulfillment over a graph");
    sim->add_option("--graph", sim_graph, "Input graph file")->required();
    sim->add_option("--horizon", sim_horizon, "Number of steps")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--out", sim_out, "Per-step report CSV (default: stdout)");
    sim->add_option("--final-graph", sim_final, "Write the post-simulation graph here");
    sim->add_option("--replenishment-quantity", sim_repl_q, "OEM stock added every period (0 disables)")
        ->check(CLI::NonNegativeNumber);
    sim->add_option("--replenishment-period", sim_repl_p, "Steps between replenishments")->check(CLI::PositiveNumber);
    sim->add_flag("--allow-extra", sim_extra, "Accept predicates outside the vocabulary");

    std::string q_graph, q_file = "-", q_out, q_final;
    std::vector<std::string> q_params;
    auto* qry = app.add_subcommand("query", "Evaluate a query file against a graph");
    qry->add_option("--graph", q_graph, "Input graph file")->required();
    qry->add_option("query", q_file, "Query file ('-' or omitted reads stdin)");
    qry->add_option("--param", q_params, "Runtime constant name=value (repeatable)");
    qry->add_option("--out", q_out, "Result CSV (default: stdout)");
    qry->add_option("--final-graph", q_final, "For INSERT queries, write the updated graph here");

    std::string r_graph, r_out;
    std::int64_t r_t = 0;
    auto* rep = app.add_subcommand("report", "Compute KPIs of a (simulated) graph");
    rep->add_option("--graph", r_graph, "Input graph file")->required();
    auto* r_t_opt = rep->add_option("--t", r_t, "Also report per-node utilization at this step");
    rep->add_option("--out", r_out, "KPI CSV (default: stdout)");

    std::string sw_file, sw_out, sw_dat;
    std::uint64_t sw_seed = 0;
    bool sw_serial = false;
    auto* sw = app.add_subcommand("sweep", "Run every scenario of a scenario file");
    sw->add_option("--scenarios", sw_file, "Scenario file")->required();
    auto* sw_seed_opt = sw->add_option("--seed", sw_seed, "Seed shared by all scenarios");
    sw->add_option("--out", sw_out, "Per-scenario CSV (default: stdout)");
    sw->add_option("--dat", sw_dat, "Also write a whitespace-separated data file");
    sw->add_flag("--serial", sw_serial, "Run scenarios one after another");

    ConfigFlags val_flags;
    std::string val_graph;
    bool val_extra = false;
    auto* val = app.add_subcommand("validate", "Check a graph against the schema, or a generator config");
    val->add_option("--graph", val_graph, "Graph file to check");
    val_flags.add_to(val);
    val->add_flag("--allow-extra", val_extra, "Accept predicates outside the vocabulary");

    ConfigFlags ex_flags;
    std::string ex_graph, ex_out;
    auto* ex = app.add_subcommand("export", "Write a graph in canonical form, or the resolved generator config");
    ex->add_option("--graph", ex_graph, "Graph file to canonicalize");
    ex_flags.add_to(ex);
    ex->add_option("--out", ex_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            if (!gen_flags.given()) throw UsageError("generate needs --preset or --config");
            write_output(gen_out, serialize(generate(gen_flags.resolve())), out);
        } else if (*sim) {
            Graph g = load_graph_file(sim_graph);
            require_valid(g, sim_extra, err);
            SimulationState state(std::move(g), {sim_repl_q, sim_repl_p});
            auto steps = state.run(sim_horizon);
            if (!sim_final.empty()) write_output(sim_final, serialize(state.graph()), out);
            write_output(sim_out, steps_csv(steps), out);
        } else if (*qry) {
            query::Params params;
            std::vector<std::string> names;
            for (const auto& p : q_params) {
                auto [name, term] = parse_param(p);
                names.push_back(name);
                params[name] = term;
            }
            std::string text = read_file(q_file);
            Graph g = load_graph_file(q_graph);
            auto q = query::parse_query(text, names);
            if (q.kind == query::Query::Kind::InsertWhere) {
                std::size_t n = query::evaluate_update(q, g, params);
                if (!q_final.empty()) write_output(q_final, serialize(g), out);
                write_output(q_out, "inserted\n" + std::to_string(n) + "\n", out);
            } else {
                write_output(q_out, table_csv(query::evaluate(q, g, params)), out);
            }
        } else if (*rep) {
            Graph g = load_graph_file(r_graph);
            std::optional<std::int64_t> t;
            if (r_t_opt->count()) t = r_t;
            write_output(r_out, to_csv(kpi_report(g, t)), out);
        } else if (*sw) {
            ScenarioSpec spec;
            try {
                spec = parse_scenarios(read_file(sw_file));
            } catch (const ConfigParseError& e) {
                throw DataError(sw_file + ": " + e.what());
            }
            std::optional<std::uint64_t> seed;
            if (sw_seed_opt->count()) seed = sw_seed;
            auto results = run_scenarios(spec, seed, !sw_serial);
            if (!sw_dat.empty()) write_output(sw_dat, scenarios_dat(results), out);
            write_output(sw_out, scenarios_csv(results), out);
        } else if (*val) {
            if (val_graph.empty() == !val_flags.given())
                throw UsageError("validate needs exactly one of --graph or --preset/--config");
            if (!val_graph.empty()) {
                auto vs = validate(load_graph_file(val_graph), {val_extra});
                out << format_report(vs);
                if (has_errors(vs)) return 2;
            } else {
                val_flags.resolve();
                out << "config ok\n";
            }
        } else if (*ex) {
            if (ex_graph.empty() == !ex_flags.given())
                throw UsageError("export needs exactly one of --graph or --preset/--config");
            std::string text = ex_graph.empty() ? format_config(ex_flags.resolve()) : serialize(load_graph_file(ex_graph));
            write_output(ex_out, text, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // Malformed graphs, queries or configs and failed evaluations.
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace sens::cli
