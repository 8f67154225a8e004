#pragma once
// SENS vocabulary, typed views over a graph, and structural validation.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sens/graph.hpp"
#include "sens/graph_io.hpp"

namespace sens {

namespace vocab {

// Classes
inline constexpr std::string_view Node = "Node";
inline constexpr std::string_view Supplier = "Supplier";
inline constexpr std::string_view Customer = "Customer";
inline constexpr std::string_view OEM = "OEM";
inline constexpr std::string_view SupplierTier = "SupplierTier";
inline constexpr std::string_view CustomerTier = "CustomerTier";
inline constexpr std::string_view Process = "Process";
inline constexpr std::string_view Source = "Source";
inline constexpr std::string_view Plan = "Plan";
inline constexpr std::string_view Make = "Make";
inline constexpr std::string_view Deliver = "Deliver";
inline constexpr std::string_view Enable = "Enable";
inline constexpr std::string_view Return = "Return";
inline constexpr std::string_view Order = "Order";
inline constexpr std::string_view Product = "Product";
inline constexpr std::string_view Capacity = "Capacity";
inline constexpr std::string_view Inventory = "Inventory";
inline constexpr std::string_view SupplyPlan = "SupplyPlan";

inline constexpr std::array<std::string_view, 6> process_kinds = {Source, Plan, Make, Deliver, Enable, Return};

// Properties
inline constexpr std::string_view type = "type";
inline constexpr std::string_view belongsToTier = "belongsToTier";
inline constexpr std::string_view hasUpStreamNode = "hasUpStreamNode";
inline constexpr std::string_view hasDownStreamNode = "hasDownStreamNode";
inline constexpr std::string_view hasUpStreamTier = "hasUpStreamTier";
inline constexpr std::string_view hasDownStreamTier = "hasDownStreamTier";
inline constexpr std::string_view hasOEM = "hasOEM";
inline constexpr std::string_view OEMhasNode = "OEMhasNode";
inline constexpr std::string_view hasProcess = "hasProcess";
inline constexpr std::string_view makes = "makes";
inline constexpr std::string_view hasProduct = "hasProduct";
inline constexpr std::string_view hasDeliveryTime = "hasDeliveryTime";
inline constexpr std::string_view hasQuantity = "hasQuantity";
inline constexpr std::string_view hasPriority = "hasPriority";
inline constexpr std::string_view manufactures = "manufactures";
inline constexpr std::string_view needsProduct = "needsProduct";
inline constexpr std::string_view needsQuantity = "needsQuantity";
inline constexpr std::string_view hasTransportMode = "hasTransportMode";
inline constexpr std::string_view hasGroup = "hasGroup";
inline constexpr std::string_view hasCapacity = "hasCapacity";
inline constexpr std::string_view hasSaturation = "hasSaturation";
inline constexpr std::string_view hasInventory = "hasInventory";
inline constexpr std::string_view hasCost = "hasCost";
inline constexpr std::string_view hasTimeStamp = "hasTimeStamp";
inline constexpr std::string_view hasSupplyPlan = "hasSupplyPlan";
inline constexpr std::string_view needsNode = "needsNode";
inline constexpr std::string_view getsProduct = "getsProduct";
inline constexpr std::string_view hasUnitPrice = "hasUnitPrice";
inline constexpr std::string_view isFulfilled = "isFulfilled";
inline constexpr std::string_view hasResponsiveness = "hasResponsiveness";
inline constexpr std::string_view hasReliability = "hasReliability";
inline constexpr std::string_view hasAgility = "hasAgility";
inline constexpr std::string_view hasAssetManagementEfficiency = "hasAssetManagementEfficiency";
inline constexpr std::string_view hasCO2Balance = "hasCO2Balance";
inline constexpr std::string_view hasLongitude = "hasLongitude";
inline constexpr std::string_view hasLatitude = "hasLatitude";
inline constexpr std::string_view hasSCORKPI = "hasSCORKPI";

// The five level-1 SCOR KPIs, in display order. hasCost doubles as the cost
// of capacity and inventory records.
inline constexpr std::array<std::string_view, 5> kpi_properties = {
    hasResponsiveness, hasReliability, hasCost, hasAgility, hasAssetManagementEfficiency};

inline std::string_view kpi_label(std::string_view property) {
    if (property == hasResponsiveness) return "Responsiveness";
    if (property == hasReliability) return "Reliability";
    if (property == hasCost) return "Cost";
    if (property == hasAgility) return "Agility";
    if (property == hasAssetManagementEfficiency) return "AssetManagementEfficiency";
    return property;
}

inline const std::set<std::string, std::less<>>& properties() {
    static const std::set<std::string, std::less<>> all = {
        std::string(type), std::string(belongsToTier), std::string(hasUpStreamNode),
        std::string(hasDownStreamNode), std::string(hasUpStreamTier), std::string(hasDownStreamTier),
        std::string(hasOEM), std::string(OEMhasNode), std::string(hasProcess), std::string(makes),
        std::string(hasProduct), std::string(hasDeliveryTime), std::string(hasQuantity),
        std::string(hasPriority), std::string(manufactures), std::string(needsProduct),
        std::string(needsQuantity), std::string(hasTransportMode), std::string(hasGroup),
        std::string(hasCapacity), std::string(hasSaturation), std::string(hasInventory),
        std::string(hasCost), std::string(hasTimeStamp), std::string(hasSupplyPlan), std::string(needsNode),
        std::string(getsProduct), std::string(hasUnitPrice), std::string(isFulfilled),
        std::string(hasResponsiveness), std::string(hasReliability), std::string(hasAgility),
        std::string(hasAssetManagementEfficiency), std::string(hasCO2Balance), std::string(hasLongitude),
        std::string(hasLatitude), std::string(hasSCORKPI)};
    return all;
}

inline Term iri(std::string_view name) { return Term::iri(std::string(name)); }

}  // namespace vocab

// ---------------------------------------------------------------------------
// Loading with alias normalization

namespace detail {

inline std::string_view canonical_predicate(std::string_view name) {
    if (name == "hasLeadTime") return vocab::hasDeliveryTime;
    if (name == "needsComponent") return vocab::needsProduct;
    if (name == "hasComponentQuantity") return vocab::needsQuantity;
    if (name == "neesNode") return vocab::needsNode;
    return name;
}

// "10m", "4", "12unit" -> integer base units; anything else stays a string
// and is reported by validate() as unknown-unit.
inline std::optional<std::int64_t> quantity_in_base_units(std::string_view s) {
    std::size_t digits = 0;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    if (digits == 0) return std::nullopt;
    std::string_view unit = s.substr(digits);
    while (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
    if (!(unit.empty() || unit == "m" || unit == "unit" || unit == "units")) return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + digits, v);
    if (ec != std::errc()) return std::nullopt;
    return v;
}

inline Term normalize_term(const Term& t) {
    if (auto* q = t.as_quoted()) {
        Term p = Term::iri(std::string(canonical_predicate(iri_name(q->predicate))));
        return Term::quoted({normalize_term(q->subject), std::move(p), normalize_term(q->object)});
    }
    return t;
}

inline bool is_quantity_predicate(std::string_view p) {
    return p == vocab::hasQuantity || p == vocab::needsQuantity;
}

}  // namespace detail

// Rewrites alias predicates to the canonical vocabulary and unit-bearing
// quantity strings to integers.
inline Graph normalize(const Graph& g) {
    Graph out;
    g.for_each([&](const Triple& t) {
        std::string_view pred = detail::canonical_predicate(iri_name(t.predicate));
        Term object = detail::normalize_term(t.object);
        if (detail::is_quantity_predicate(pred))
            if (auto* s = as_string(object))
                if (auto v = detail::quantity_in_base_units(*s)) object = Term::integer(*v);
        out.insert({detail::normalize_term(t.subject), Term::iri(std::string(pred)), std::move(object)});
    });
    return out;
}

inline Graph load_sens_graph(std::string_view text) { return normalize(parse_graph(text)); }

// ---------------------------------------------------------------------------
// Views

class MissingEntity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { Supplier, Customer, OEM };

inline std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Supplier: return vocab::Supplier;
        case NodeKind::Customer: return vocab::Customer;
        case NodeKind::OEM: return vocab::OEM;
    }
    return "";
}

namespace detail {

inline std::optional<std::int64_t> int_property(const Graph& g, const Term& s, std::string_view p) {
    auto o = g.object(s, vocab::iri(p));
    if (!o) return std::nullopt;
    return as_integer(*o);
}

inline std::int64_t required_int(const Graph& g, const Term& s, std::string_view p) {
    auto v = int_property(g, s, p);
    if (!v) throw MissingEntity(":" + iri_name(s) + " has no integer " + std::string(p));
    return *v;
}

inline std::string required_iri(const Graph& g, const Term& s, std::string_view p) {
    auto o = g.object(s, vocab::iri(p));
    if (!o || !o->is_iri()) throw MissingEntity(":" + iri_name(s) + " has no " + std::string(p));
    return iri_name(*o);
}

inline bool has_type(const Graph& g, const Term& s, std::string_view cls) {
    return g.contains({s, vocab::iri(vocab::type), vocab::iri(cls)});
}

// "SupplierTier3" -> 3
inline std::optional<int> tier_index(std::string_view tier, std::string_view prefix) {
    if (!tier.starts_with(prefix)) return std::nullopt;
    tier.remove_prefix(prefix.size());
    int v = 0;
    auto [p, ec] = std::from_chars(tier.data(), tier.data() + tier.size(), v);
    if (ec != std::errc() || p != tier.data() + tier.size()) return std::nullopt;
    return v;
}

}  // namespace detail

struct NodeView {
    std::string id;
    NodeKind kind = NodeKind::Supplier;
    int tier = 0;  // 0 for the OEM
    std::optional<std::int64_t> group;
    std::optional<std::int64_t> priority;
    std::optional<std::int64_t> saturation;
    std::optional<std::int64_t> delivery_time;
    std::map<std::string, std::int64_t> kpis;  // keyed by property name
    std::optional<std::int64_t> co2_balance;
    std::optional<std::int64_t> longitude;
    std::optional<std::int64_t> latitude;

    bool operator==(const NodeView&) const = default;

    // Predicates a NodeView is read from (and written back to).
    static const std::set<std::string>& predicates() {
        static const std::set<std::string> p = [] {
            std::set<std::string> s = {std::string(vocab::type),          std::string(vocab::belongsToTier),
                                       std::string(vocab::hasGroup),      std::string(vocab::hasPriority),
                                       std::string(vocab::hasSaturation), std::string(vocab::hasDeliveryTime),
                                       std::string(vocab::hasCO2Balance), std::string(vocab::hasLongitude),
                                       std::string(vocab::hasLatitude)};
            for (auto k : vocab::kpi_properties) s.insert(std::string(k));
            return s;
        }();
        return p;
    }
};

inline std::string tier_iri(NodeKind kind, int tier) {
    return std::string(kind == NodeKind::Customer ? vocab::CustomerTier : vocab::SupplierTier) +
           std::to_string(tier);
}

inline NodeView node(const Graph& g, const std::string& id) {
    Term s = Term::iri(id);
    NodeView v;
    v.id = id;
    if (detail::has_type(g, s, vocab::OEM)) {
        v.kind = NodeKind::OEM;
    } else if (detail::has_type(g, s, vocab::Supplier)) {
        v.kind = NodeKind::Supplier;
    } else if (detail::has_type(g, s, vocab::Customer)) {
        v.kind = NodeKind::Customer;
    } else {
        throw MissingEntity(":" + id + " is not a Supplier, Customer or OEM");
    }
    if (v.kind != NodeKind::OEM) {
        std::string tier = detail::required_iri(g, s, vocab::belongsToTier);
        auto idx = detail::tier_index(tier, v.kind == NodeKind::Customer ? vocab::CustomerTier : vocab::SupplierTier);
        if (!idx) throw MissingEntity(":" + id + " belongs to malformed tier :" + tier);
        v.tier = *idx;
    }
    v.group = detail::int_property(g, s, vocab::hasGroup);
    v.priority = detail::int_property(g, s, vocab::hasPriority);
    v.saturation = detail::int_property(g, s, vocab::hasSaturation);
    v.delivery_time = detail::int_property(g, s, vocab::hasDeliveryTime);
    for (auto k : vocab::kpi_properties)
        if (auto x = detail::int_property(g, s, k)) v.kpis[std::string(k)] = *x;
    v.co2_balance = detail::int_property(g, s, vocab::hasCO2Balance);
    v.longitude = detail::int_property(g, s, vocab::hasLongitude);
    v.latitude = detail::int_property(g, s, vocab::hasLatitude);
    return v;
}

inline std::vector<Triple> to_triples(const NodeView& v) {
    Term s = Term::iri(v.id);
    std::vector<Triple> out;
    auto add = [&](std::string_view p, Term o) { out.push_back({s, vocab::iri(p), std::move(o)}); };
    auto add_int = [&](std::string_view p, const std::optional<std::int64_t>& x) {
        if (x) add(p, Term::integer(*x));
    };
    add(vocab::type, vocab::iri(vocab::Node));
    add(vocab::type, vocab::iri(to_string(v.kind)));
    if (v.kind != NodeKind::OEM) add(vocab::belongsToTier, Term::iri(tier_iri(v.kind, v.tier)));
    add_int(vocab::hasGroup, v.group);
    add_int(vocab::hasPriority, v.priority);
    add_int(vocab::hasSaturation, v.saturation);
    add_int(vocab::hasDeliveryTime, v.delivery_time);
    for (const auto& [k, x] : v.kpis) add(k, Term::integer(x));
    add_int(vocab::hasCO2Balance, v.co2_balance);
    add_int(vocab::hasLongitude, v.longitude);
    add_int(vocab::hasLatitude, v.latitude);
    return out;
}

struct OrderView {
    std::string id;
    std::string customer;
    std::string product;
    std::int64_t quantity = 0;
    std::int64_t delivery_time = 0;
    std::optional<std::int64_t> issued;
    std::optional<bool> fulfilled;
    std::optional<std::string> supply_plan;

    bool operator==(const OrderView&) const = default;
};

inline OrderView order(const Graph& g, const std::string& id) {
    Term s = Term::iri(id);
    OrderView v;
    v.id = id;
    auto makers = g.subjects(vocab::iri(vocab::makes), s);
    if (makers.empty()) throw MissingEntity("no customer makes :" + id);
    v.customer = iri_name(makers.front());
    v.product = detail::required_iri(g, s, vocab::hasProduct);
    v.quantity = detail::required_int(g, s, vocab::hasQuantity);
    v.delivery_time = detail::required_int(g, s, vocab::hasDeliveryTime);
    v.issued = detail::int_property(g, s, vocab::hasTimeStamp);
    if (auto f = g.object(s, vocab::iri(vocab::isFulfilled))) v.fulfilled = as_boolean(*f);
    if (auto p = g.object(s, vocab::iri(vocab::hasSupplyPlan)); p && p->is_iri()) v.supply_plan = iri_name(*p);
    return v;
}

inline std::vector<Triple> to_triples(const OrderView& v) {
    Term s = Term::iri(v.id);
    std::vector<Triple> out = {
        {s, vocab::iri(vocab::type), vocab::iri(vocab::Order)},
        {Term::iri(v.customer), vocab::iri(vocab::makes), s},
        {s, vocab::iri(vocab::hasProduct), Term::iri(v.product)},
        {s, vocab::iri(vocab::hasQuantity), Term::integer(v.quantity)},
        {s, vocab::iri(vocab::hasDeliveryTime), Term::timestep(v.delivery_time)},
    };
    if (v.issued) out.push_back({s, vocab::iri(vocab::hasTimeStamp), Term::timestep(*v.issued)});
    if (v.fulfilled) out.push_back({s, vocab::iri(vocab::isFulfilled), Term::boolean(*v.fulfilled)});
    if (v.supply_plan) out.push_back({s, vocab::iri(vocab::hasSupplyPlan), Term::iri(*v.supply_plan)});
    return out;
}

inline std::vector<OrderView> all_orders(const Graph& g) {
    std::vector<OrderView> out;
    for (const Term& s : g.subjects(vocab::iri(vocab::type), vocab::iri(vocab::Order)))
        out.push_back(order(g, iri_name(s)));
    return out;
}

// Orders with DT(O) - lt == t, by customer priority descending, then IRI.
inline std::vector<OrderView> orders_due(const Graph& g, std::int64_t t, std::int64_t lt) {
    std::vector<std::pair<std::int64_t, OrderView>> due;
    for (auto& o : all_orders(g)) {
        if (o.delivery_time - lt != t) continue;
        std::int64_t prio = detail::int_property(g, Term::iri(o.customer), vocab::hasPriority).value_or(0);
        due.emplace_back(prio, std::move(o));
    }
    std::sort(due.begin(), due.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second.id < b.second.id;
    });
    std::vector<OrderView> out;
    for (auto& [p, o] : due) out.push_back(std::move(o));
    return out;
}

// A capacity or inventory record.
struct RecordView {
    std::string id;
    std::string owner;
    std::string product;
    std::int64_t quantity = 0;
    std::optional<std::int64_t> cost;
    std::int64_t timestamp = 0;

    bool operator==(const RecordView&) const = default;
};
using CapacityView = RecordView;
using InventoryView = RecordView;

namespace detail {

inline std::vector<RecordView> records(const Graph& g, const std::string& node, std::string_view link,
                                       const std::optional<std::string>& product) {
    std::vector<RecordView> out;
    for (const Term& r : g.objects(Term::iri(node), vocab::iri(link))) {
        if (!r.is_iri()) continue;
        RecordView v;
        v.id = iri_name(r);
        v.owner = node;
        v.product = required_iri(g, r, vocab::hasProduct);
        if (product && v.product != *product) continue;
        v.quantity = required_int(g, r, vocab::hasQuantity);
        v.cost = int_property(g, r, vocab::hasCost);
        v.timestamp = required_int(g, r, vocab::hasTimeStamp);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<Triple> record_triples(const RecordView& v, std::string_view link, std::string_view cls) {
    Term r = Term::iri(v.id);
    std::vector<Triple> out = {
        {Term::iri(v.owner), vocab::iri(link), r},
        {r, vocab::iri(vocab::type), vocab::iri(cls)},
        {r, vocab::iri(vocab::hasProduct), Term::iri(v.product)},
        {r, vocab::iri(vocab::hasQuantity), Term::integer(v.quantity)},
        {r, vocab::iri(vocab::hasTimeStamp), Term::timestep(v.timestamp)},
    };
    if (v.cost) out.push_back({r, vocab::iri(vocab::hasCost), Term::integer(*v.cost)});
    return out;
}

}  // namespace detail

inline std::vector<InventoryView> inventory_records(const Graph& g, const std::string& node,
                                                    const std::optional<std::string>& product = std::nullopt) {
    return detail::records(g, node, vocab::hasInventory, product);
}

inline std::vector<CapacityView> capacity_records(const Graph& g, const std::string& node,
                                                  const std::optional<std::string>& product = std::nullopt) {
    return detail::records(g, node, vocab::hasCapacity, product);
}

// Latest inventory record for (node, product) with timestamp <= t.
inline InventoryView inventory(const Graph& g, const std::string& node, const std::string& product, std::int64_t t) {
    std::optional<InventoryView> best;
    for (auto& r : inventory_records(g, node, product))
        if (r.timestamp <= t && (!best || r.timestamp > best->timestamp ||
                                 (r.timestamp == best->timestamp && r.id > best->id)))
            best = std::move(r);
    if (!best) throw MissingEntity("no inventory of :" + product + " at :" + node + " by t=" + std::to_string(t));
    return *best;
}

inline CapacityView capacity(const Graph& g, const std::string& node, const std::string& product, std::int64_t t) {
    for (auto& r : capacity_records(g, node, product))
        if (r.timestamp == t) return r;
    throw MissingEntity("no capacity of :" + product + " at :" + node + " for t=" + std::to_string(t));
}

inline std::vector<Triple> to_triples(const RecordView& v, bool is_capacity) {
    return is_capacity ? detail::record_triples(v, vocab::hasCapacity, vocab::Capacity)
                       : detail::record_triples(v, vocab::hasInventory, vocab::Inventory);
}

struct BomEdge {
    std::string parent;
    std::string child;
    std::int64_t quantity = 0;
    bool operator==(const BomEdge&) const = default;
};

inline std::vector<BomEdge> bom(const Graph& g, const std::string& product) {
    std::vector<BomEdge> out;
    for (const Term& child : g.objects(Term::iri(product), vocab::iri(vocab::needsProduct))) {
        Term edge = Term::quoted({Term::iri(product), vocab::iri(vocab::needsProduct), child});
        auto q = g.object(edge, vocab::iri(vocab::needsQuantity));
        if (!q || !as_integer(*q))
            throw MissingEntity("BOM edge :" + product + " -> " + to_string(child) + " has no integer quantity");
        out.push_back({product, iri_name(child), *as_integer(*q)});
    }
    return out;
}

inline std::vector<Triple> to_triples(const BomEdge& e) {
    Triple edge{Term::iri(e.parent), vocab::iri(vocab::needsProduct), Term::iri(e.child)};
    return {edge, {Term::quoted(edge), vocab::iri(vocab::needsQuantity), Term::integer(e.quantity)}};
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code;
    std::string subject;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationOptions {
    bool allow_extra = false;  // accept predicates outside the vocabulary
};

inline bool has_errors(const std::vector<Violation>& vs) {
    return std::any_of(vs.begin(), vs.end(), [](const Violation& v) { return v.severity == Violation::Severity::Error; });
}

namespace detail {

class Validator {
public:
    Validator(const Graph& g, ValidationOptions opt) : g_(g), opt_(opt) {}

    std::vector<Violation> run() {
        check_predicates();
        check_oem();
        check_nodes();
        check_links();
        check_orders();
        check_records();
        check_bom();
        std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
            return std::tie(a.code, a.subject, a.message) < std::tie(b.code, b.subject, b.message);
        });
        return std::move(out_);
    }

private:
    void error(std::string code, std::string subject, std::string msg) {
        out_.push_back({Violation::Severity::Error, std::move(code), std::move(subject), std::move(msg)});
    }
    void warning(std::string code, std::string subject, std::string msg) {
        out_.push_back({Violation::Severity::Warning, std::move(code), std::move(subject), std::move(msg)});
    }

    std::vector<std::string> instances(std::string_view cls) const {
        std::vector<std::string> out;
        for (const Term& s : g_.subjects(vocab::iri(vocab::type), vocab::iri(cls)))
            if (s.is_iri()) out.push_back(iri_name(s));
        return out;
    }

    void check_predicates() {
        if (opt_.allow_extra) return;
        std::set<std::string> seen;
        auto visit = [&](const Triple& t, auto& self) -> void {
            const std::string& p = iri_name(t.predicate);
            if (!vocab::properties().count(p) && seen.insert(p).second)
                error("unknown-predicate", p, "predicate :" + p + " is not in the SENS vocabulary");
            if (auto* q = t.subject.as_quoted()) self(*q, self);
            if (auto* q = t.object.as_quoted()) self(*q, self);
        };
        g_.for_each([&](const Triple& t) { visit(t, visit); });
    }

    void check_oem() {
        auto oems = instances(vocab::OEM);
        if (oems.empty()) error("missing-oem", "", "graph has no OEM");
        if (oems.size() > 1) {
            std::string names;
            for (const auto& o : oems) names += (names.empty() ? ":" : ", :") + o;
            error("multiple-oem", oems[1], "multiple OEM nodes: " + names);
        }
    }

    void check_range(const std::string& subject, std::string_view prop, std::int64_t lo, std::int64_t hi,
                     const std::string& code) {
        auto o = g_.object(Term::iri(subject), vocab::iri(prop));
        if (!o) return;
        auto v = as_integer(*o);
        if (!v || *v < lo || *v > hi)
            error(code, subject,
                  std::string(prop) + " = " + to_string(*o) + " outside [" + std::to_string(lo) + ", " +
                      (hi == INT64_MAX ? std::string("inf") : std::to_string(hi)) + "]");
    }

    void check_nodes() {
        for (auto kind : {NodeKind::Supplier, NodeKind::Customer, NodeKind::OEM}) {
            for (const auto& id : instances(to_string(kind))) {
                Term s = Term::iri(id);
                for (auto k : vocab::kpi_properties) check_range(id, k, 0, 100, "kpi-range");
                check_range(id, vocab::hasSaturation, 1, INT64_MAX, "saturation");
                check_range(id, vocab::hasDeliveryTime, 1, INT64_MAX, "delivery-time");
                if (kind != NodeKind::Customer) {
                    if (!g_.object(s, vocab::iri(vocab::hasSaturation)))
                        error("saturation", id, "producing node has no hasSaturation");
                    if (!g_.object(s, vocab::iri(vocab::hasDeliveryTime)))
                        error("delivery-time", id, "producing node has no hasDeliveryTime");
                }
                if (kind == NodeKind::OEM) continue;
                auto tier = g_.object(s, vocab::iri(vocab::belongsToTier));
                auto prefix = kind == NodeKind::Customer ? vocab::CustomerTier : vocab::SupplierTier;
                if (!tier || !tier->is_iri() || !tier_index(iri_name(*tier), prefix))
                    error("missing-tier", id, "node does not belong to a " + std::string(prefix));
                else
                    tiers_[id] = *tier_index(iri_name(*tier), prefix);
                kinds_[id] = kind;
            }
        }
    }

    std::optional<int> supplier_tier(const std::string& id) const {
        auto k = kinds_.find(id);
        if (k == kinds_.end() || k->second != NodeKind::Supplier) return std::nullopt;
        auto it = tiers_.find(id);
        return it == tiers_.end() ? std::nullopt : std::optional<int>(it->second);
    }

    std::optional<int> customer_tier(const std::string& id) const {
        auto k = kinds_.find(id);
        if (k == kinds_.end() || k->second != NodeKind::Customer) return std::nullopt;
        auto it = tiers_.find(id);
        return it == tiers_.end() ? std::nullopt : std::optional<int>(it->second);
    }

    void check_links() {
        auto oems = instances(vocab::OEM);
        std::set<std::string> oem_set(oems.begin(), oems.end());
        std::set<std::string> linked_suppliers, linked_customers;

        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::hasUpStreamNode), std::nullopt)) {
            auto from = supplier_tier(iri_name(t.subject));
            auto to = supplier_tier(iri_name(t.object));
            if (!to) continue;
            if (from) {
                if (*to == *from + 1)
                    linked_suppliers.insert(iri_name(t.object));
                else
                    warning("tier-skip", iri_name(t.subject),
                            "hasUpStreamNode from supplier tier " + std::to_string(*from) + " to tier " +
                                std::to_string(*to));
            } else if (oem_set.count(iri_name(t.subject)) && *to == 1) {
                linked_suppliers.insert(iri_name(t.object));
            }
        }
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::hasDownStreamNode), std::nullopt)) {
            auto from = customer_tier(iri_name(t.subject));
            auto to = customer_tier(iri_name(t.object));
            if (!from || !to) continue;
            if (*to == *from + 1)
                linked_customers.insert(iri_name(t.object));
            else
                warning("tier-skip", iri_name(t.subject),
                        "hasDownStreamNode from customer tier " + std::to_string(*from) + " to tier " +
                            std::to_string(*to));
        }
        for (const auto& [id, tier] : tiers_) {
            Term s = Term::iri(id);
            if (kinds_.at(id) == NodeKind::Supplier) {
                if (tier == 1) {
                    bool ok = false;
                    for (const auto& o : g_.objects(s, vocab::iri(vocab::hasOEM))) ok = ok || oem_set.count(iri_name(o));
                    if (!ok) error("missing-oem-link", id, "tier-1 supplier has no hasOEM link to the OEM");
                } else if (!linked_suppliers.count(id)) {
                    error("unlinked-supplier", id,
                          "no tier-" + std::to_string(tier - 1) + " supplier has it as hasUpStreamNode");
                }
            } else {
                if (tier == 1) {
                    bool ok = false;
                    for (const auto& o : oems) ok = ok || g_.contains({Term::iri(o), vocab::iri(vocab::OEMhasNode), s});
                    if (!ok) error("unlinked-customer", id, "tier-1 customer is not linked by OEMhasNode");
                } else if (!linked_customers.count(id)) {
                    error("unlinked-customer", id,
                          "no tier-" + std::to_string(tier - 1) + " customer has it as hasDownStreamNode");
                }
            }
        }
    }

    void check_orders() {
        for (const auto& id : instances(vocab::Order)) {
            Term s = Term::iri(id);
            if (g_.subjects(vocab::iri(vocab::makes), s).empty()) error("order-customer", id, "no customer makes this order");
            auto p = g_.object(s, vocab::iri(vocab::hasProduct));
            if (!p || !p->is_iri()) error("order-product", id, "order has no product");
            auto q = int_property(g_, s, vocab::hasQuantity);
            if (!q || *q <= 0) error("order-quantity", id, "order quantity must be a positive integer");
            auto dt = int_property(g_, s, vocab::hasDeliveryTime);
            if (!dt || *dt < 0) error("order-delivery-time", id, "order delivery time must be a timestep >= 0");
        }
    }

    void check_records() {
        for (auto [link, is_cap] : {std::pair{vocab::hasCapacity, true}, std::pair{vocab::hasInventory, false}}) {
            for (const auto& t : g_.find(std::nullopt, vocab::iri(link), std::nullopt)) {
                std::string owner = iri_name(t.subject);
                std::string id = t.object.is_iri() ? iri_name(t.object) : to_string(t.object);
                auto q = int_property(g_, t.object, vocab::hasQuantity);
                auto ts = int_property(g_, t.object, vocab::hasTimeStamp);
                auto p = g_.object(t.object, vocab::iri(vocab::hasProduct));
                std::string code = is_cap ? "capacity-range" : "inventory-range";
                if (!p || !p->is_iri()) error(code, id, "record has no product");
                if (!ts || *ts < 0) error(code, id, "record timestamp must be >= 0");
                if (!q || *q < 0) {
                    error(code, id, "record quantity must be an integer >= 0");
                } else if (is_cap) {
                    auto sat = int_property(g_, t.subject, vocab::hasSaturation);
                    if (sat && *q > *sat)
                        error(code, id,
                              "committed " + std::to_string(*q) + " exceeds saturation " + std::to_string(*sat) +
                                  " of :" + owner);
                }
            }
        }
        auto quantity_unit = [&](const Triple& t) {
            if (auto* s = as_string(t.object))
                error("unknown-unit", t.subject.is_iri() ? iri_name(t.subject) : to_string(t.subject),
                      "quantity \"" + *s + "\" has no known unit");
        };
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::hasQuantity), std::nullopt)) quantity_unit(t);
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::needsQuantity), std::nullopt)) quantity_unit(t);
    }

    void check_bom() {
        std::map<std::string, std::vector<std::string>> children;
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::needsProduct), std::nullopt)) {
            std::string parent = iri_name(t.subject), child = iri_name(t.object);
            children[parent].push_back(child);
            auto q = g_.object(Term::quoted(t), vocab::iri(vocab::needsQuantity));
            if (!q)
                error("bom-quantity", parent, "edge to :" + child + " has no needsQuantity");
            else if (auto v = as_integer(*q); v && *v < 1)
                error("bom-quantity", parent, "edge to :" + child + " has quantity below 1");
        }
        // Iterative DFS with colours; one violation per cycle entry point.
        std::map<std::string, int> colour;  // 0 white, 1 grey, 2 black
        for (const auto& [root, kids] : children) {
            if (colour[root]) continue;
            std::vector<std::pair<std::string, std::size_t>> stack = {{root, 0}};
            colour[root] = 1;
            while (!stack.empty()) {
                auto& [n, i] = stack.back();
                auto it = children.find(n);
                if (it == children.end() || i >= it->second.size()) {
                    colour[n] = 2;
                    stack.pop_back();
                    continue;
                }
                std::string next = it->second[i++];
                int c = colour[next];
                if (c == 1) {
                    error("bom-cycle", next, "BOM cycle through :" + n + " -> :" + next);
                } else if (c == 0) {
                    colour[next] = 1;
                    stack.emplace_back(next, 0);
                }
            }
        }
    }

    const Graph& g_;
    ValidationOptions opt_;
    std::vector<Violation> out_;
    std::map<std::string, int> tiers_;
    std::map<std::string, NodeKind> kinds_;
};

}  // namespace detail

inline std::vector<Violation> validate(const Graph& g, ValidationOptions opt = {}) {
    return detail::Validator(g, opt).run();
}

// One line per violation: code, subject IRI, message.
inline std::string format_report(const std::vector<Violation>& vs) {
    std::string out;
    for (const auto& v : vs) {
        out += v.code;
        out += ' ';
        out += v.subject.empty() ? "-" : ":" + v.subject;
        out += ' ';
        if (v.severity == Violation::Severity::Warning) out += "warning: ";
        out += v.message;
        out += '\n';
    }
    return out;
}

}  // namespace sens
