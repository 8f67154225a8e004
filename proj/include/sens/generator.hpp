#pragma once
// SENS-GEN: deterministic synthesis of a SENS knowledge graph and its demand
// stream from a GeneratorConfig.
//
// Naming: SupplierTier<n> / CustomerTier<n>; nodes Supplier<n>.<m>,
// Customer<n>.<m> (tier n, index m) and OEM1; products <order_product> and
// Product<n>.<g> (tier n, group g); orders Order00000...; records
// Cap_<node>_<product>_<t> and Inv_<node>_<product>_<t>; processes
// Prcs_<node>_<Kind>.
//
// Every sample consumes exactly one draw in a fixed order that does not
// depend on sampled values, so two configs differing only in a range (or
// only in demand frequency) produce otherwise identical graphs.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "sens/config.hpp"
#include "sens/graph.hpp"
#include "sens/rng.hpp"
#include "sens/schema.hpp"

namespace sens {

inline constexpr std::string_view oem_id = "OEM1";
inline constexpr int demand_window = 10;

inline std::string supplier_id(int tier, int index) {
    return "Supplier" + std::to_string(tier) + "." + std::to_string(index);
}
inline std::string customer_id(int tier, int index) {
    return "Customer" + std::to_string(tier) + "." + std::to_string(index);
}
inline std::string intermediate_product(int tier, int group) {
    return "Product" + std::to_string(tier) + "." + std::to_string(group);
}
inline std::string capacity_id(const std::string& node, const std::string& product, std::int64_t t) {
    return "Cap_" + node + "_" + product + "_" + std::to_string(t);
}
inline std::string inventory_id(const std::string& node, const std::string& product, std::int64_t t) {
    return "Inv_" + node + "_" + product + "_" + std::to_string(t);
}
inline std::string order_id(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "Order%05zu", n);
    return buf;
}

// Issue steps of one customer's orders: f per window of 10 steps, evenly
// spaced at floor(k * 10 / f).
inline std::vector<int> issue_steps(int frequency, int horizon) {
    std::vector<int> out;
    for (int w = 0; w * demand_window < horizon; ++w)
        for (int k = 0; k < frequency; ++k) {
            int t = w * demand_window + k * demand_window / frequency;
            if (t < horizon) out.push_back(t);
        }
    return out;
}

namespace detail {

class Builder {
public:
    explicit Builder(const GeneratorConfig& c) : c_(c), rng_(c.seed) {}

    Graph build() {
        products();
        oem();
        suppliers();
        customers();
        bom();
        demand();
        return std::move(g_);
    }

private:
    void add(const std::string& s, std::string_view p, Term o) { g_.insert({Term::iri(s), vocab::iri(p), std::move(o)}); }
    void add_iri(const std::string& s, std::string_view p, std::string_view o) { add(s, p, vocab::iri(o)); }

    std::int64_t draw(const std::string& node, std::string_view property, Range r) {
        std::int64_t v = rng_.uniform(r.min, r.max);
        if (auto n = c_.per_node_overrides.find(node); n != c_.per_node_overrides.end())
            if (auto p = n->second.find(std::string(property)); p != n->second.end()) v = p->second;
        return v;
    }

    void products() {
        add_iri(c_.order_product, vocab::type, vocab::Product);
        for (int n = 1; n <= c_.supplier_tiers; ++n)
            for (int grp = 1; grp <= c_.supplier_groups_per_tier[n - 1]; ++grp)
                add_iri(intermediate_product(n, grp), vocab::type, vocab::Product);
    }

    // Properties shared by every node kind.
    void common(const std::string& id, std::string_view kind) {
        add_iri(id, vocab::type, vocab::Node);
        add_iri(id, vocab::type, kind);
        for (auto k : vocab::process_kinds) {
            std::string p = "Prcs_" + id + "_" + std::string(k);
            add_iri(id, vocab::hasProcess, p);
            add_iri(p, vocab::type, vocab::Process);
            add_iri(p, vocab::type, k);
        }
    }

    void performance(const std::string& id) {
        std::int64_t lt = draw(id, vocab::hasDeliveryTime, c_.delivery_time_range);
        add(id, vocab::hasDeliveryTime, Term::integer(lt));
        delivery_[id] = lt;
        for (auto k : vocab::kpi_properties) {
            std::int64_t v = draw(id, k, c_.kpi_range_for(std::string(k)));
            add(id, k, Term::integer(v));
            add(id, vocab::hasSCORKPI, Term::string(std::string(vocab::kpi_label(k)) + ": " + std::to_string(v)));
        }
        add(id, vocab::hasCO2Balance, Term::integer(draw(id, vocab::hasCO2Balance, c_.co2_range)));
        add(id, vocab::hasLongitude, Term::integer(draw(id, vocab::hasLongitude, c_.longitude_range)));
        add(id, vocab::hasLatitude, Term::integer(draw(id, vocab::hasLatitude, c_.latitude_range)));
        static constexpr std::string_view modes[] = {"road", "rail", "air", "maritime"};
        add(id, vocab::hasTransportMode, Term::string(std::string(modes[rng_.uniform(0, 3)])));
    }

    void production(const std::string& id, const std::string& product) {
        add_iri(id, vocab::manufactures, product);
        add(id, vocab::hasSaturation, Term::integer(draw(id, vocab::hasSaturation, c_.saturation_range)));
        RecordView cap{capacity_id(id, product, 0), id, product, c_.initial_capacity,
                       rng_.uniform(c_.capacity_cost_range.min, c_.capacity_cost_range.max), 0};
        std::int64_t stock = draw(id, "initialInventory", c_.initial_inventory_range);
        RecordView inv{inventory_id(id, product, 0), id, product, stock,
                       rng_.uniform(c_.inventory_cost_range.min, c_.inventory_cost_range.max), 0};
        for (auto& t : to_triples(cap, true)) g_.insert(t);
        for (auto& t : to_triples(inv, false)) g_.insert(t);
    }

    void oem() {
        std::string id(oem_id);
        common(id, vocab::OEM);
        performance(id);
        production(id, c_.order_product);
    }

    // Links every node of `from` to at least one node of `to` and gives every
    // node of `to` at least one link, plus one random extra link per `from` node.
    template <class F>
    void link_tiers(const std::vector<std::string>& from, const std::vector<std::string>& to, F&& link) {
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < from.size(); ++i) edges.insert({i, i % to.size()});
        for (std::size_t j = 0; j < to.size(); ++j) edges.insert({j % from.size(), j});
        for (std::size_t i = 0; i < from.size(); ++i)
            edges.insert({i, static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(to.size()) - 1))});
        for (auto [i, j] : edges) link(from[i], to[j]);
    }

    void suppliers() {
        std::vector<std::vector<std::string>> tiers(c_.supplier_tiers);
        for (int n = 1; n <= c_.supplier_tiers; ++n) {
            std::string tier = tier_iri(NodeKind::Supplier, n);
            add_iri(tier, vocab::type, vocab::SupplierTier);
            if (n > 1) {
                std::string lower = tier_iri(NodeKind::Supplier, n - 1);
                add_iri(lower, vocab::hasUpStreamTier, tier);
                add_iri(tier, vocab::hasDownStreamTier, lower);
            }
            for (int m = 1; m <= c_.nodes_per_supplier_tier[n - 1]; ++m) {
                std::string id = supplier_id(n, m);
                tiers[n - 1].push_back(id);
                common(id, vocab::Supplier);
                add_iri(id, vocab::belongsToTier, tier);
                std::int64_t grp = draw(id, vocab::hasGroup, {1, c_.supplier_groups_per_tier[n - 1]});
                add(id, vocab::hasGroup, Term::integer(grp));
                performance(id);
                production(id, intermediate_product(n, static_cast<int>(grp)));
            }
        }
        std::string oem(oem_id);
        for (const auto& s : tiers[0]) {
            add_iri(s, vocab::hasOEM, oem);
            add_iri(s, vocab::hasDownStreamNode, oem);
            add_iri(oem, vocab::hasUpStreamNode, s);
        }
        for (int n = 1; n < c_.supplier_tiers; ++n)
            link_tiers(tiers[n - 1], tiers[n], [&](const std::string& low, const std::string& up) {
                add_iri(low, vocab::hasUpStreamNode, up);
                add_iri(up, vocab::hasDownStreamNode, low);
            });
    }

    void customers() {
        std::vector<std::vector<std::string>> tiers(c_.customer_tiers);
        for (int n = 1; n <= c_.customer_tiers; ++n) {
            std::string tier = tier_iri(NodeKind::Customer, n);
            add_iri(tier, vocab::type, vocab::CustomerTier);
            if (n > 1) {
                std::string prev = tier_iri(NodeKind::Customer, n - 1);
                add_iri(prev, vocab::hasDownStreamTier, tier);
                add_iri(tier, vocab::hasUpStreamTier, prev);
            }
            for (int m = 1; m <= c_.nodes_per_customer_tier[n - 1]; ++m) {
                std::string id = customer_id(n, m);
                tiers[n - 1].push_back(id);
                common(id, vocab::Customer);
                add_iri(id, vocab::belongsToTier, tier);
                add(id, vocab::hasPriority, Term::integer(draw(id, vocab::hasPriority, c_.priority_range)));
                performance(id);
            }
        }
        std::string oem(oem_id);
        for (const auto& cu : tiers[0]) {
            add_iri(oem, vocab::OEMhasNode, cu);
            add_iri(oem, vocab::hasDownStreamNode, cu);
            add_iri(cu, vocab::hasUpStreamNode, oem);
        }
        for (int n = 1; n < c_.customer_tiers; ++n)
            link_tiers(tiers[n - 1], tiers[n], [&](const std::string& up, const std::string& down) {
                add_iri(up, vocab::hasDownStreamNode, down);
                add_iri(down, vocab::hasUpStreamNode, up);
            });
        end_customers_ = tiers.back();
    }

    void bom() {
        auto edge = [&](const std::string& parent, const std::string& child) {
            BomEdge e{parent, child, rng_.uniform(c_.bom_quantity_range.min, c_.bom_quantity_range.max)};
            for (auto& t : to_triples(e)) g_.insert(t);
        };
        for (int grp = 1; grp <= c_.supplier_groups_per_tier[0]; ++grp)
            edge(c_.order_product, intermediate_product(1, grp));
        for (int n = 1; n < c_.supplier_tiers; ++n)
            for (int a = 1; a <= c_.supplier_groups_per_tier[n - 1]; ++a)
                for (int b = 1; b <= c_.supplier_groups_per_tier[n]; ++b)
                    edge(intermediate_product(n, a), intermediate_product(n + 1, b));
    }

    void demand() {
        std::int64_t max_supplier_lt = 0;
        for (const auto& [id, lt] : delivery_)
            if (id.starts_with("Supplier")) max_supplier_lt = std::max(max_supplier_lt, lt);
        std::int64_t lead = delivery_.at(std::string(oem_id)) + max_supplier_lt + 1;
        std::size_t n = 0;
        for (const auto& cu : end_customers_)
            for (int t : issue_steps(c_.demand_frequency, c_.horizon)) {
                OrderView o;
                o.id = order_id(n++);
                o.customer = cu;
                o.product = c_.order_product;
                o.quantity = c_.order_quantity;
                o.delivery_time = t + lead;
                o.issued = t;
                for (auto& tr : to_triples(o)) g_.insert(tr);
            }
    }

    const GeneratorConfig& c_;
    SplitMix64 rng_;
    Graph g_;
    std::map<std::string, std::int64_t> delivery_;
    std::vector<std::string> end_customers_;
};

}  // namespace detail

inline Graph generate(const GeneratorConfig& cfg) {
    if (auto errors = validate_config(cfg); !errors.empty()) throw InvalidConfig(std::move(errors));
    return detail::Builder(cfg).build();
}

}  // namespace sens
