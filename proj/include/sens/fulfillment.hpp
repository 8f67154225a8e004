#pragma once
// Backward-scheduling demand fulfillment over SupplierTier1, the OEM and the
// customers that place orders.
//
// At step t the orders due (DT(O) - LT(OEM) == t) are processed by customer
// priority. An order is served from OEM stock when stock covers it; otherwise
// the shortfall Q(O) - Q(I) is produced at the OEM at t, and each direct
// component is sourced from one tier-1 supplier producing at t0 = t - LT(s).
// Commitment is all-or-nothing: a failing order leaves every ledger untouched
// and is marked isFulfilled false.
//
// The in-memory ledgers are authoritative during a run. Every change is
// written back to the graph as capacity/inventory records, so queries over the
// graph see the same numbers.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "sens/generator.hpp"
#include "sens/query.hpp"
#include "sens/schema.hpp"

namespace sens {

struct Allocation {
    std::string node;
    std::string product;
    std::int64_t timestamp = 0;
    std::int64_t quantity = 0;
    double unit_price = 0.0;
    bool operator==(const Allocation&) const = default;
};

struct SupplyPlan {
    std::string order;
    std::string id;
    bool from_stock = false;
    std::vector<Allocation> allocations;  // OEM first, then suppliers by component
    bool operator==(const SupplyPlan&) const = default;
};

enum class Outcome { FromStock, Produced, Unfulfilled };

struct OrderOutcome {
    std::string order;
    Outcome outcome = Outcome::Unfulfilled;
    std::int64_t produced = 0;  // production quantity at the OEM
    std::string reason;         // why an order failed
    std::optional<SupplyPlan> plan;
};

struct StepReport {
    std::int64_t t = 0;
    std::size_t considered = 0;
    std::size_t from_stock = 0;
    std::size_t produced = 0;
    std::size_t unfulfilled = 0;
    std::size_t triples_inserted = 0;
    std::vector<OrderOutcome> outcomes;
};

struct ComponentNeed {
    std::string product;
    std::int64_t per_unit = 0;
    std::int64_t required = 0;
    bool operator==(const ComponentNeed&) const = default;
};

struct SupplierChoice {
    std::string supplier;
    std::string product;
    std::int64_t t0 = 0;
    std::int64_t quantity = 0;
    bool operator==(const SupplierChoice&) const = default;
};

struct Selection {
    bool feasible = false;
    std::vector<SupplierChoice> choices;  // one per component when feasible
    std::string failed_component;
};

struct SimulationOptions {
    // Units added to the OEM's finished-product stock at every t > 0 with
    // t % replenishment_period == 0. Zero (the default) never replenishes.
    std::int64_t replenishment_quantity = 0;
    int replenishment_period = 10;
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const query::Query& due_orders_query() {
    static const query::Query q = query::parse_query(R"(
        SELECT ?o ?dt ?q ?p ?cus ?prio WHERE {
          ?o :hasDeliveryTime ?dt . ?o :hasQuantity ?q . ?o :hasProduct ?p .
          ?cus :makes ?o . ?cus :hasPriority ?prio .
          FILTER (?dt - lt = t)
        } ORDER BY DESC ?prio)",
                                                     {"lt", "t"});
    return q;
}

inline const query::Query& components_query() {
    static const query::Query q =
        query::parse_query("SELECT ?comp ?quant WHERE { << P :needsProduct ?comp >> :needsQuantity ?quant . }", {"P"});
    return q;
}

inline const query::Query& candidates_query() {
    static const query::Query q = query::parse_query(R"(
        SELECT ?s ?sat ?lt WHERE {
          ?s :hasOEM oem . ?s :manufactures product . ?s :hasSaturation ?sat . ?s :hasDeliveryTime ?lt .
        })",
                                                     {"oem", "product"});
    return q;
}

inline const query::Query& supply_plan_update() {
    static const query::Query q = query::parse_query(R"(
        INSERT {
          << ?SP :needsNode node >> :getsProduct product .
          << ?SP :needsNode node >> :hasTimeStamp t .
          << ?SP :needsNode node >> :hasQuantity q .
          << ?SP :needsNode node >> :hasUnitPrice price .
        } WHERE { order :hasSupplyPlan ?SP . })",
                                                     {"node", "product", "t", "q", "price", "order"});
    return q;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
    return h;
}

}  // namespace detail

// One level of BOM explosion: each direct component with per-unit × qty.
inline std::vector<ComponentNeed> explode_bom(const Graph& g, const std::string& product, std::int64_t qty) {
    auto table = query::evaluate(detail::components_query(), g, {{"P", Term::iri(product)}});
    std::vector<ComponentNeed> out;
    for (const auto& row : table.rows) {
        auto per_unit = as_integer(row[1]);
        if (!per_unit) throw SimulationError("BOM quantity of :" + product + " is not an integer");
        std::int64_t required = 0;
        if (__builtin_mul_overflow(*per_unit, qty, &required))
            throw SimulationError("BOM requirement overflows for :" + product);
        out.push_back({iri_name(row[0]), *per_unit, required});
    }
    return out;
}

class SimulationState {
public:
    explicit SimulationState(Graph g, SimulationOptions opt = {}) : g_(std::move(g)), opt_(opt) {
        auto oems = g_.subjects(vocab::iri(vocab::type), vocab::iri(vocab::OEM));
        if (oems.size() != 1) throw SimulationError("graph must contain exactly one OEM");
        oem_ = iri_name(oems.front());
        auto products = g_.objects(Term::iri(oem_), vocab::iri(vocab::manufactures));
        if (products.empty()) throw SimulationError("the OEM manufactures nothing");
        oem_product_ = iri_name(products.front());
        oem_lt_ = detail::required_int(g_, Term::iri(oem_), vocab::hasDeliveryTime);
        load_ledgers();
    }

    const Graph& graph() const { return g_; }
    Graph& graph() { return g_; }
    const std::string& oem() const { return oem_; }
    const std::string& oem_product() const { return oem_product_; }
    std::int64_t oem_delivery_time() const { return oem_lt_; }
    std::int64_t clock() const { return clock_; }
    const std::map<std::string, SupplyPlan>& plans() const { return plans_; }

    std::int64_t saturation(const std::string& node) const {
        return detail::required_int(g_, Term::iri(node), vocab::hasSaturation);
    }
    std::int64_t delivery_time(const std::string& node) const {
        return detail::required_int(g_, Term::iri(node), vocab::hasDeliveryTime);
    }

    // Committed load of (node, product) at t; the t = 0 record is the
    // baseline for steps without a record of their own.
    std::int64_t committed(const std::string& node, const std::string& product, std::int64_t t) const {
        if (auto it = committed_.find({node, product, t}); it != committed_.end()) return it->second;
        return baseline(node, product);
    }

    std::int64_t committed_total(const std::string& node, std::int64_t t) const {
        auto it = producing_.find(node);
        if (it == producing_.end()) return 0;
        std::int64_t sum = 0;
        for (const auto& p : it->second) sum += committed(node, p, t);
        return sum;
    }

    std::int64_t stock(const std::string& node, const std::string& product) const {
        auto it = stock_.find({node, product});
        return it == stock_.end() ? 0 : it->second.quantity;
    }

    // Hash of the effective ledgers: committed loads that differ from the
    // baseline plus all stock levels. Materializing records does not change it.
    std::uint64_t fingerprint() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& [k, v] : committed_) {
            const auto& [node, product, t] = k;
            if (v == baseline(node, product)) continue;
            h = detail::fnv1a(h, node + "|" + product + "|" + std::to_string(t) + "|" + std::to_string(v));
        }
        for (const auto& [k, s] : stock_)
            h = detail::fnv1a(h, k.first + "|" + k.second + "|" + std::to_string(s.quantity));
        return h;
    }

    // Conservation checks over the ledgers; empty when all hold.
    std::vector<std::string> invariant_violations() const {
        std::vector<std::string> out;
        for (const auto& [k, s] : stock_)
            if (s.quantity < 0) out.push_back("negative stock at :" + k.first + " of :" + k.second);
        std::set<std::pair<std::string, std::int64_t>> slots;
        for (const auto& [k, v] : committed_) slots.insert({std::get<0>(k), std::get<2>(k)});
        for (const auto& [node, t] : slots) {
            std::int64_t total = committed_total(node, t), sat = saturation(node);
            if (total > sat)
                out.push_back("committed " + std::to_string(total) + " exceeds saturation " + std::to_string(sat) +
                              " at :" + node + " t=" + std::to_string(t));
        }
        return out;
    }

    // Creates the capacity record for (node, product, t) if it is missing.
    void ensure_capacity_record(const std::string& node, const std::string& product, std::int64_t t) {
        if (t < 0 || cap_ids_.count({node, product, t})) return;
        RecordView r{capacity_id(node, product, t), node, product, committed(node, product, t),
                     capacity_cost(node, product), t};
        for (auto& tr : to_triples(r, true)) g_.insert(tr);
        cap_ids_[{node, product, t}] = r.id;
        committed_[{node, product, t}] = r.quantity;
    }

    // Records for every producing (node, product) at t in [0, last].
    void materialize_capacity(std::int64_t last) {
        for (const auto& [node, products] : producing_)
            for (const auto& p : products)
                for (std::int64_t t = 0; t <= last; ++t) ensure_capacity_record(node, p, t);
    }

    // Orders due at t (DT - LT(OEM) == t), by customer priority descending then
    // IRI, skipping orders that already carry a verdict.
    std::vector<OrderView> due_orders(std::int64_t t) const {
        auto table = query::evaluate(detail::due_orders_query(), g_,
                                     {{"lt", Term::integer(oem_lt_)}, {"t", Term::integer(t)}});
        std::vector<OrderView> out;
        for (const auto& row : table.rows) {
            Term o = row[0];
            if (g_.object(o, vocab::iri(vocab::isFulfilled))) continue;
            OrderView v;
            v.id = iri_name(o);
            v.delivery_time = *as_integer(row[1]);
            v.quantity = as_integer(row[2]).value_or(0);
            v.product = iri_name(row[3]);
            v.customer = iri_name(row[4]);
            out.push_back(std::move(v));
        }
        return out;
    }

    struct InventoryResult {
        bool fulfilled = false;
        std::int64_t remaining = 0;  // Q(O) - Q(I) when not fulfilled
    };

    // Serves the order from OEM stock when Q(I) >= Q(O); otherwise reports
    // the shortfall and changes nothing.
    InventoryResult fulfill_from_inventory(const OrderView& o, std::int64_t t) {
        std::int64_t q_i = stock(oem_, o.product);
        if (o.product != oem_product_ || q_i < o.quantity) return {false, o.quantity - q_i};
        double price = static_cast<double>(stock_cost(oem_, o.product));
        set_stock(oem_, o.product, q_i - o.quantity, t);
        SupplyPlan plan{o.id, plan_id(o.id), true, {{oem_, o.product, t, o.quantity, price}}};
        write_plan(plan);
        set_verdict(o.id, true);
        plans_[o.id] = plan;
        return {true, 0};
    }

    // For each component choose the feasible tier-1 supplier with the most
    // free capacity at t0 = t - LT(s) (ties by IRI). Load from earlier
    // components of the same order counts against later ones.
    Selection select_suppliers(const std::vector<ComponentNeed>& components, std::int64_t t) const {
        Selection sel;
        std::map<std::pair<std::string, std::int64_t>, std::int64_t> tentative;
        for (const auto& c : components) {
            auto table = query::evaluate(detail::candidates_query(), g_,
                                         {{"oem", Term::iri(oem_)}, {"product", Term::iri(c.product)}});
            std::optional<SupplierChoice> best;
            std::int64_t best_free = -1;
            for (const auto& row : table.rows) {
                std::string s = iri_name(row[0]);
                auto sat = as_integer(row[1]);
                auto lt = as_integer(row[2]);
                if (!sat || !lt) continue;
                std::int64_t t0 = t - *lt;
                if (t0 < 0) continue;
                std::int64_t load = committed_total(s, t0) + tentative[{s, t0}];
                if (*sat < load + c.required) continue;
                std::int64_t free = *sat - load;
                if (free > best_free || (free == best_free && s < best->supplier)) {
                    best_free = free;
                    best = SupplierChoice{s, c.product, t0, c.required};
                }
            }
            if (!best) {
                sel.failed_component = c.product;
                sel.choices.clear();
                return sel;
            }
            tentative[{best->supplier, best->t0}] += best->quantity;
            sel.choices.push_back(*best);
        }
        sel.feasible = true;
        return sel;
    }

    OrderOutcome process_order(const OrderView& o, std::int64_t t) {
        OrderOutcome out;
        out.order = o.id;
        auto inv = fulfill_from_inventory(o, t);
        if (inv.fulfilled) {
            out.outcome = Outcome::FromStock;
            out.plan = plans_.at(o.id);
            return out;
        }
        auto fail = [&](std::string reason) {
            set_verdict(o.id, false);
            out.outcome = Outcome::Unfulfilled;
            out.reason = std::move(reason);
            return out;
        };
        if (o.product != oem_product_) return fail("the OEM does not manufacture :" + o.product);
        std::int64_t remaining = inv.remaining;
        if (committed_total(oem_, t) + remaining > saturation(oem_)) return fail("OEM saturation reached");
        auto components = explode_bom(g_, o.product, remaining);
        Selection sel = select_suppliers(components, t);
        if (!sel.feasible) return fail("no tier-1 supplier can deliver :" + sel.failed_component);

        // Commit.
        ensure_capacity_record(oem_, o.product, t);
        for (const auto& ch : sel.choices) ensure_capacity_record(ch.supplier, ch.product, ch.t0);
        if (stock(oem_, o.product) > 0) set_stock(oem_, o.product, 0, t);
        add_load(oem_, o.product, t, remaining);
        SupplyPlan plan{o.id, plan_id(o.id), false, {}};
        plan.allocations.push_back(
            {oem_, o.product, t, remaining, static_cast<double>(capacity_cost(oem_, o.product))});
        for (const auto& ch : sel.choices) {
            add_load(ch.supplier, ch.product, ch.t0, ch.quantity);
            plan.allocations.push_back({ch.supplier, ch.product, ch.t0, ch.quantity,
                                        static_cast<double>(capacity_cost(ch.supplier, ch.product))});
        }
        write_plan(plan);
        set_verdict(o.id, true);
        plans_[o.id] = plan;
        out.outcome = Outcome::Produced;
        out.produced = remaining;
        out.plan = std::move(plan);
        return out;
    }

    // Called after each order with the ledger fingerprint before and after it.
    using OrderObserver = std::function<void(const OrderOutcome&, std::uint64_t, std::uint64_t)>;
    void set_order_observer(OrderObserver f) { observer_ = std::move(f); }

    StepReport step(std::int64_t t) {
        clock_ = t;
        std::size_t before = g_.size();
        if (opt_.replenishment_quantity > 0 && t > 0 && t % opt_.replenishment_period == 0)
            set_stock(oem_, oem_product_, stock(oem_, oem_product_) + opt_.replenishment_quantity, t);
        StepReport r;
        r.t = t;
        for (const auto& o : due_orders(t)) {
            ++r.considered;
            std::uint64_t before = observer_ ? fingerprint() : 0;
            OrderOutcome oc = process_order(o, t);
            if (observer_) observer_(oc, before, fingerprint());
            switch (oc.outcome) {
                case Outcome::FromStock: ++r.from_stock; break;
                case Outcome::Produced: ++r.produced; break;
                case Outcome::Unfulfilled: ++r.unfulfilled; break;
            }
            r.outcomes.push_back(std::move(oc));
        }
        r.triples_inserted = g_.size() - before;
        return r;
    }

    // Steps t = 0 .. horizon-1. Capacity records are materialized for every
    // producing node over [0, horizon] first, so utilization queries can read
    // any step including the horizon itself.
    std::vector<StepReport> run(std::int64_t horizon) {
        if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
        materialize_capacity(horizon);
        std::vector<StepReport> out;
        out.reserve(static_cast<std::size_t>(horizon));
        for (std::int64_t t = 0; t < horizon; ++t) out.push_back(step(t));
        return out;
    }

private:
    struct Stock {
        std::int64_t quantity = 0;
        std::int64_t cost = 0;
        std::int64_t timestamp = 0;
        std::string record;
    };

    void load_ledgers() {
        std::set<std::string> nodes;
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::manufactures), std::nullopt))
            producing_[iri_name(t.subject)].insert(iri_name(t.object));
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::hasCapacity), std::nullopt)) nodes.insert(iri_name(t.subject));
        for (const auto& t : g_.find(std::nullopt, vocab::iri(vocab::hasInventory), std::nullopt)) nodes.insert(iri_name(t.subject));
        for (const auto& node : nodes) {
            for (const auto& r : capacity_records(g_, node)) {
                producing_[node].insert(r.product);
                committed_[{node, r.product, r.timestamp}] = r.quantity;
                cap_ids_[{node, r.product, r.timestamp}] = r.id;
                auto& b = baselines_[{node, r.product}];
                if (!b.record.empty() && b.timestamp <= r.timestamp) continue;
                b = Stock{r.quantity, r.cost.value_or(0), r.timestamp, r.id};
            }
            for (const auto& r : inventory_records(g_, node)) {
                auto& s = stock_[{node, r.product}];
                if (!s.record.empty() && (s.timestamp > r.timestamp || (s.timestamp == r.timestamp && s.record > r.id)))
                    continue;
                s = Stock{r.quantity, r.cost.value_or(0), r.timestamp, r.id};
            }
        }
    }

    std::int64_t baseline(const std::string& node, const std::string& product) const {
        auto it = baselines_.find({node, product});
        return it == baselines_.end() ? 0 : it->second.quantity;
    }
    std::int64_t capacity_cost(const std::string& node, const std::string& product) const {
        auto it = baselines_.find({node, product});
        return it == baselines_.end() ? 0 : it->second.cost;
    }
    std::int64_t stock_cost(const std::string& node, const std::string& product) const {
        auto it = stock_.find({node, product});
        return it == stock_.end() ? 0 : it->second.cost;
    }

    void replace_quantity(const std::string& record, std::int64_t q) {
        Term r = Term::iri(record);
        for (const auto& old : g_.find(r, vocab::iri(vocab::hasQuantity), std::nullopt)) g_.remove(old);
        g_.insert({r, vocab::iri(vocab::hasQuantity), Term::integer(q)});
    }

    void add_load(const std::string& node, const std::string& product, std::int64_t t, std::int64_t q) {
        std::int64_t v = committed(node, product, t) + q;
        committed_[{node, product, t}] = v;
        replace_quantity(cap_ids_.at({node, product, t}), v);
    }

    // New stock level from t on; recorded as an inventory record stamped t.
    void set_stock(const std::string& node, const std::string& product, std::int64_t q, std::int64_t t) {
        auto& s = stock_[{node, product}];
        if (s.timestamp == t && !s.record.empty()) {
            replace_quantity(s.record, q);
        } else {
            RecordView r{inventory_id(node, product, t), node, product, q, s.cost, t};
            for (auto& tr : to_triples(r, false)) g_.insert(tr);
            s.record = r.id;
            s.timestamp = t;
        }
        s.quantity = q;
    }

    void set_verdict(const std::string& order, bool fulfilled) {
        g_.insert({Term::iri(order), vocab::iri(vocab::isFulfilled), Term::boolean(fulfilled)});
    }

    static std::string plan_id(const std::string& order) { return "Plan_" + order; }

    void write_plan(const SupplyPlan& plan) {
        g_.insert({Term::iri(plan.order), vocab::iri(vocab::hasSupplyPlan), Term::iri(plan.id)});
        g_.insert({Term::iri(plan.id), vocab::iri(vocab::type), vocab::iri(vocab::SupplyPlan)});
        for (const auto& a : plan.allocations) {
            query::Params p = {{"node", Term::iri(a.node)},           {"product", Term::iri(a.product)},
                               {"t", Term::timestep(a.timestamp)},    {"q", Term::integer(a.quantity)},
                               {"price", Term::decimal(a.unit_price)}, {"order", Term::iri(plan.order)}};
            query::evaluate_update(detail::supply_plan_update(), g_, p);
        }
    }

    Graph g_;
    SimulationOptions opt_;
    std::string oem_;
    std::string oem_product_;
    std::int64_t oem_lt_ = 0;
    std::int64_t clock_ = 0;
    std::map<std::string, std::set<std::string>> producing_;
    std::map<std::tuple<std::string, std::string, std::int64_t>, std::int64_t> committed_;
    std::map<std::tuple<std::string, std::string, std::int64_t>, std::string> cap_ids_;
    std::map<std::pair<std::string, std::string>, Stock> baselines_;
    std::map<std::pair<std::string, std::string>, Stock> stock_;
    std::map<std::string, SupplyPlan> plans_;
    OrderObserver observer_;
};

}  // namespace sens
