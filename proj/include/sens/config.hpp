#pragma once
// Generator configuration: fields, industry presets, validation and the flat
// `key = value` text format.
//
//   # comment
//   preset = automotive            # optional, must come first
//   supplier_tiers = 3
//   nodes_per_supplier_tier = [2, 3, 5]
//   saturation_range = [1000000, 3000000]
//   override.Supplier1.2.hasSaturation = 500000
//
// Scenario files reuse the syntax: top-level keys form the base config and
// each `[Label]` header opens a block of overrides for one scenario.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sens {

struct Range {
    std::int64_t min = 0;
    std::int64_t max = 0;
    bool operator==(const Range&) const = default;
};

struct GeneratorConfig {
    int supplier_tiers = 1;
    int customer_tiers = 1;
    std::vector<int> nodes_per_supplier_tier = {1};
    std::vector<int> nodes_per_customer_tier = {1};
    std::vector<int> supplier_groups_per_tier = {1};
    Range priority_range{1, 3};
    Range saturation_range{1'000'000, 1'000'000};
    Range delivery_time_range{1, 1};
    Range initial_inventory_range{0, 0};
    std::int64_t initial_capacity = 1'000;
    Range kpi_range{0, 100};
    // Optional per-KPI ranges keyed by property name (hasResponsiveness, ...).
    std::map<std::string, Range> kpi_ranges;
    Range co2_range{30, 45};
    Range longitude_range{0, 180};
    Range latitude_range{0, 90};
    Range capacity_cost_range{10, 100};
    Range inventory_cost_range{10, 100};
    Range bom_quantity_range{1, 4};
    int demand_frequency = 1;
    std::string order_product = "ProductA";
    std::int64_t order_quantity = 1;
    int horizon = 178;
    std::uint64_t seed = 1;
    // Units added to the OEM's finished-product stock every
    // replenishment_period steps (t > 0). Zero disables replenishment.
    std::int64_t replenishment_quantity = 0;
    int replenishment_period = 10;
    // node id -> property -> value; replaces the sampled value.
    std::map<std::string, std::map<std::string, std::int64_t>> per_node_overrides;

    bool operator==(const GeneratorConfig&) const = default;

    Range kpi_range_for(const std::string& property) const {
        auto it = kpi_ranges.find(property);
        return it == kpi_ranges.end() ? kpi_range : it->second;
    }
};

class UnknownPreset : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ConfigError {
    std::string key;
    std::string message;
    bool operator==(const ConfigError&) const = default;
};

class InvalidConfig : public std::invalid_argument {
public:
    explicit InvalidConfig(std::vector<ConfigError> errors)
        : std::invalid_argument(summarize(errors)), errors_(std::move(errors)) {}
    const std::vector<ConfigError>& errors() const { return errors_; }

private:
    static std::string summarize(const std::vector<ConfigError>& es) {
        std::string s = "invalid generator config";
        for (const auto& e : es) s += "; " + e.key + ": " + e.message;
        return s;
    }
    std::vector<ConfigError> errors_;
};

// Industry presets (automotive and dairy columns of the parameter table).
inline GeneratorConfig preset(std::string_view name) {
    GeneratorConfig c;
    c.priority_range = {1, 3};
    c.initial_capacity = 1'000;
    c.kpi_range = {0, 100};
    c.co2_range = {30, 45};
    c.horizon = 178;
    c.seed = 1;
    if (name == "automotive") {
        c.supplier_tiers = 3;
        c.customer_tiers = 3;
        c.nodes_per_supplier_tier = {2, 3, 5};
        c.nodes_per_customer_tier = {2, 2, 4};
        c.supplier_groups_per_tier = {1, 2, 4};
        c.saturation_range = {1'000'000, 3'000'000};
        c.delivery_time_range = {1, 7};
        c.initial_inventory_range = {10'000, 50'000};
        c.longitude_range = {0, 180};
        c.latitude_range = {0, 90};
        c.demand_frequency = 2;
        c.order_quantity = 100'000;
        return c;
    }
    if (name == "dairy") {
        c.supplier_tiers = 1;
        c.customer_tiers = 2;
        c.nodes_per_supplier_tier = {3};
        c.nodes_per_customer_tier = {2, 3};
        c.supplier_groups_per_tier = {1};
        c.saturation_range = {500'000, 1'000'000};
        c.delivery_time_range = {1, 3};
        c.initial_inventory_range = {5'000, 10'000};
        c.longitude_range = {90, 180};
        c.latitude_range = {45, 90};
        c.demand_frequency = 10;
        c.order_quantity = 5'000;
        return c;
    }
    throw UnknownPreset("unknown preset '" + std::string(name) + "' (expected automotive or dairy)");
}

inline const std::set<std::string>& overridable_node_properties() {
    static const std::set<std::string> p = {
        "hasPriority",   "hasSaturation",     "hasDeliveryTime", "hasResponsiveness", "hasReliability",
        "hasCost",       "hasAgility",        "hasAssetManagementEfficiency",         "hasCO2Balance",
        "hasLongitude",  "hasLatitude",       "hasGroup",        "initialInventory"};
    return p;
}

inline std::vector<ConfigError> validate_config(const GeneratorConfig& c) {
    std::vector<ConfigError> out;
    auto err = [&](std::string key, std::string msg) { out.push_back({std::move(key), std::move(msg)}); };
    if (c.supplier_tiers < 1) err("supplier_tiers", "must be >= 1");
    if (c.customer_tiers < 1) err("customer_tiers", "must be >= 1");
    auto check_list = [&](const char* key, const std::vector<int>& list, int expected, int min_value) {
        if (static_cast<int>(list.size()) != expected)
            err(key, "length " + std::to_string(list.size()) + " does not match tier count " + std::to_string(expected));
        for (int v : list)
            if (v < min_value) err(key, "entries must be >= " + std::to_string(min_value));
    };
    check_list("nodes_per_supplier_tier", c.nodes_per_supplier_tier, c.supplier_tiers, 1);
    check_list("nodes_per_customer_tier", c.nodes_per_customer_tier, c.customer_tiers, 1);
    check_list("supplier_groups_per_tier", c.supplier_groups_per_tier, c.supplier_tiers, 1);
    auto check_range = [&](const std::string& key, Range r, std::int64_t lo = INT64_MIN, std::int64_t hi = INT64_MAX) {
        if (r.min > r.max) err(key, "inverted range [" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
        else if (r.min < lo || r.max > hi)
            err(key, "range must lie within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    };
    check_range("priority_range", c.priority_range);
    check_range("saturation_range", c.saturation_range, 1);
    check_range("delivery_time_range", c.delivery_time_range, 1);
    check_range("initial_inventory_range", c.initial_inventory_range, 0);
    check_range("kpi_range", c.kpi_range, 0, 100);
    for (const auto& [k, r] : c.kpi_ranges) check_range(k + " range", r, 0, 100);
    check_range("co2_range", c.co2_range);
    check_range("longitude_range", c.longitude_range, -180, 180);
    check_range("latitude_range", c.latitude_range, -90, 90);
    check_range("capacity_cost_range", c.capacity_cost_range, 0);
    check_range("inventory_cost_range", c.inventory_cost_range, 0);
    check_range("bom_quantity_range", c.bom_quantity_range, 1);
    if (c.initial_capacity < 0) err("initial_capacity", "must be >= 0");
    if (c.initial_capacity > c.saturation_range.min)
        err("initial_capacity", "baseline load exceeds the smallest possible saturation");
    if (c.demand_frequency < 1) err("demand_frequency", "must be >= 1");
    if (c.order_quantity < 1) err("order_quantity", "must be >= 1");
    if (c.order_product.empty()) err("order_product", "must be non-empty");
    if (c.horizon < 1) err("horizon", "must be >= 1");
    if (c.replenishment_quantity < 0) err("replenishment_quantity", "must be >= 0");
    if (c.replenishment_period < 1) err("replenishment_period", "must be >= 1");
    for (const auto& [node, props] : c.per_node_overrides)
        for (const auto& [p, v] : props)
            if (!overridable_node_properties().count(p)) err("override." + node + "." + p, "not an overridable property");
    return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::int64_t parse_int(std::string_view s, const std::string& key) {
    s = trim(s);
    std::string digits;
    for (char c : s)
        if (c != '_' && c != '\'') digits += c;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty())
        throw std::invalid_argument(key + ": expected an integer, got '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::int64_t> parse_list(std::string_view s, const std::string& key) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument(key + ": expected a list like [a, b]");
    s = s.substr(1, s.size() - 2);
    std::vector<std::int64_t> out;
    if (trim(s).empty()) return out;
    while (true) {
        auto comma = s.find(',');
        out.push_back(parse_int(s.substr(0, comma), key));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

inline Range parse_range(std::string_view s, const std::string& key) {
    auto v = parse_list(s, key);
    if (v.size() == 1) return {v[0], v[0]};
    if (v.size() != 2) throw std::invalid_argument(key + ": expected [min, max]");
    return {v[0], v[1]};
}

inline std::vector<int> to_ints(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

inline std::string format_list(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
}

inline std::string format_range(Range r) { return "[" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]"; }

inline const std::map<std::string, std::string>& kpi_range_keys() {
    static const std::map<std::string, std::string> m = {
        {"responsiveness_range", "hasResponsiveness"},
        {"reliability_range", "hasReliability"},
        {"cost_range", "hasCost"},
        {"agility_range", "hasAgility"},
        {"asset_management_range", "hasAssetManagementEfficiency"},
    };
    return m;
}

}  // namespace detail

// Applies one `key = value` setting. Throws std::invalid_argument for unknown
// keys or malformed values.
inline void apply_setting(GeneratorConfig& c, const std::string& key, std::string_view value) {
    using namespace detail;
    value = trim(value);
    if (key == "preset") {
        c = preset(value);
    } else if (key == "supplier_tiers") {
        c.supplier_tiers = static_cast<int>(parse_int(value, key));
    } else if (key == "customer_tiers") {
        c.customer_tiers = static_cast<int>(parse_int(value, key));
    } else if (key == "nodes_per_supplier_tier") {
        c.nodes_per_supplier_tier = to_ints(parse_list(value, key));
    } else if (key == "nodes_per_customer_tier") {
        c.nodes_per_customer_tier = to_ints(parse_list(value, key));
    } else if (key == "supplier_groups_per_tier") {
        c.supplier_groups_per_tier = to_ints(parse_list(value, key));
    } else if (key == "priority_range") {
        c.priority_range = parse_range(value, key);
    } else if (key == "saturation_range") {
        c.saturation_range = parse_range(value, key);
    } else if (key == "delivery_time_range") {
        c.delivery_time_range = parse_range(value, key);
    } else if (key == "initial_inventory_range") {
        c.initial_inventory_range = parse_range(value, key);
    } else if (key == "initial_capacity") {
        c.initial_capacity = parse_int(value, key);
    } else if (key == "kpi_range") {
        c.kpi_range = parse_range(value, key);
    } else if (auto it = kpi_range_keys().find(key); it != kpi_range_keys().end()) {
        c.kpi_ranges[it->second] = parse_range(value, key);
    } else if (key == "co2_range") {
        c.co2_range = parse_range(value, key);
    } else if (key == "longitude_range") {
        c.longitude_range = parse_range(value, key);
    } else if (key == "latitude_range") {
        c.latitude_range = parse_range(value, key);
    } else if (key == "capacity_cost_range") {
        c.capacity_cost_range = parse_range(value, key);
    } else if (key == "inventory_cost_range") {
        c.inventory_cost_range = parse_range(value, key);
    } else if (key == "bom_quantity_range") {
        c.bom_quantity_range = parse_range(value, key);
    } else if (key == "demand_frequency") {
        c.demand_frequency = static_cast<int>(parse_int(value, key));
    } else if (key == "order_product") {
        c.order_product = std::string(value);
    } else if (key == "order_quantity") {
        c.order_quantity = parse_int(value, key);
    } else if (key == "horizon") {
        c.horizon = static_cast<int>(parse_int(value, key));
    } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "replenishment_quantity") {
        c.replenishment_quantity = parse_int(value, key);
    } else if (key == "replenishment_period") {
        c.replenishment_period = static_cast<int>(parse_int(value, key));
    } else if (key.starts_with("override.")) {
        // override.<node>.<property>; node ids may contain dots.
        std::string rest = key.substr(9);
        auto dot = rest.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == rest.size())
            throw std::invalid_argument(key + ": expected override.<node>.<property>");
        c.per_node_overrides[rest.substr(0, dot)][rest.substr(dot + 1)] = parse_int(value, key);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

namespace detail {

struct KeyValueLine {
    enum class Kind { Blank, Section, Setting } kind = Kind::Blank;
    std::string key;  // section label or setting key
    std::string value;
};

inline KeyValueLine parse_line(std::string_view raw, std::size_t line_no) {
    auto hash = raw.find('#');
    std::string_view s = trim(raw.substr(0, hash));
    if (s.empty()) return {};
    if (s.front() == '[' && s.back() == ']' && s.find('=') == std::string_view::npos) {
        std::string label(trim(s.substr(1, s.size() - 2)));
        if (label.empty()) throw ConfigParseError(line_no, "empty section label");
        return {KeyValueLine::Kind::Section, label, {}};
    }
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError(line_no, "expected 'key = value'");
    std::string key(trim(s.substr(0, eq)));
    if (key.empty()) throw ConfigParseError(line_no, "missing key before '='");
    return {KeyValueLine::Kind::Setting, key, std::string(trim(s.substr(eq + 1)))};
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    while (!text.empty() || line_no == 0) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        f(parse_line(line, line_no), line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

}  // namespace detail

inline GeneratorConfig parse_config(std::string_view text, GeneratorConfig base = {}) {
    detail::for_each_line(text, [&](const detail::KeyValueLine& l, std::size_t line_no) {
        if (l.kind == detail::KeyValueLine::Kind::Section)
            throw ConfigParseError(line_no, "sections are only allowed in scenario files");
        if (l.kind != detail::KeyValueLine::Kind::Setting) return;
        try {
            apply_setting(base, l.key, l.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigParseError(line_no, e.what());
        }
    });
    return base;
}

// Writes a config that parse_config() reads back to an equal value.
inline std::string format_config(const GeneratorConfig& c) {
    using namespace detail;
    std::string s;
    auto kv = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    kv("supplier_tiers", std::to_string(c.supplier_tiers));
    kv("customer_tiers", std::to_string(c.customer_tiers));
    kv("nodes_per_supplier_tier", format_list(c.nodes_per_supplier_tier));
    kv("nodes_per_customer_tier", format_list(c.nodes_per_customer_tier));
    kv("supplier_groups_per_tier", format_list(c.supplier_groups_per_tier));
    kv("priority_range", format_range(c.priority_range));
    kv("saturation_range", format_range(c.saturation_range));
    kv("delivery_time_range", format_range(c.delivery_time_range));
    kv("initial_inventory_range", format_range(c.initial_inventory_range));
    kv("initial_capacity", std::to_string(c.initial_capacity));
    kv("kpi_range", format_range(c.kpi_range));
    for (const auto& [key, prop] : kpi_range_keys())
        if (auto it = c.kpi_ranges.find(prop); it != c.kpi_ranges.end()) kv(key, format_range(it->second));
    kv("co2_range", format_range(c.co2_range));
    kv("longitude_range", format_range(c.longitude_range));
    kv("latitude_range", format_range(c.latitude_range));
    kv("capacity_cost_range", format_range(c.capacity_cost_range));
    kv("inventory_cost_range", format_range(c.inventory_cost_range));
    kv("bom_quantity_range", format_range(c.bom_quantity_range));
    kv("demand_frequency", std::to_string(c.demand_frequency));
    kv("order_product", c.order_product);
    kv("order_quantity", std::to_string(c.order_quantity));
    kv("horizon", std::to_string(c.horizon));
    kv("seed", std::to_string(c.seed));
    kv("replenishment_quantity", std::to_string(c.replenishment_quantity));
    kv("replenishment_period", std::to_string(c.replenishment_period));
    for (const auto& [node, props] : c.per_node_overrides)
        for (const auto& [p, v] : props) kv("override." + node + "." + p, std::to_string(v));
    return s;
}

// ---------------------------------------------------------------------------
// Scenario files

struct Scenario {
    std::string label;
    std::vector<std::pair<std::string, std::string>> overrides;  // applied in file order
};

struct ScenarioSpec {
    GeneratorConfig base;
    std::vector<Scenario> scenarios;

    GeneratorConfig config_for(const Scenario& s) const {
        GeneratorConfig c = base;
        for (const auto& [k, v] : s.overrides) {
            if (k == "preset") throw std::invalid_argument("scenario '" + s.label + "' may not switch preset");
            apply_setting(c, k, v);
        }
        return c;
    }
};

inline ScenarioSpec parse_scenarios(std::string_view text) {
    ScenarioSpec spec;
    std::set<std::string> labels;
    detail::for_each_line(text, [&](const detail::KeyValueLine& l, std::size_t line_no) {
        using K = detail::KeyValueLine::Kind;
        if (l.kind == K::Section) {
            if (!labels.insert(l.key).second) throw ConfigParseError(line_no, "duplicate scenario label '" + l.key + "'");
            spec.scenarios.push_back({l.key, {}});
        } else if (l.kind == K::Setting) {
            try {
                if (spec.scenarios.empty()) {
                    apply_setting(spec.base, l.key, l.value);
                } else {
                    GeneratorConfig probe = spec.base;  // reject bad keys/values at parse time
                    apply_setting(probe, l.key, l.value);
                    spec.scenarios.back().overrides.emplace_back(l.key, l.value);
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigParseError(line_no, e.what());
            }
        }
    });
    if (spec.scenarios.empty()) throw ConfigParseError(0, "scenario file defines no [label] blocks");
    return spec;
}

}  // namespace sens
