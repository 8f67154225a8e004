#pragma once
// End-to-end audit of one simulation run: ledger conservation after every
// step, supply-plan arithmetic against the BOM read straight from the graph,
// ledger rollback around failed orders, and one verdict per due order.

#include <map>
#include <string>
#include <vector>

#include "sens/fulfillment.hpp"
#include "sens/generator.hpp"

namespace audit {

struct Result {
    std::vector<std::string> violations;
    std::vector<sens::StepReport> reports;
    sens::Graph final_graph;
    std::size_t failed_orders = 0;
    std::size_t produced_orders = 0;
};

// BOM children of `product` with per-unit quantity, from the schema view
// rather than the engine query the simulator uses.
inline std::map<std::string, std::int64_t> direct_components(const sens::Graph& g, const std::string& product) {
    std::map<std::string, std::int64_t> out;
    for (const auto& e : sens::bom(g, product))
        if (e.parent == product) out[e.child] = e.quantity;
    return out;
}

inline void check_plan(const sens::Graph& g, const sens::SimulationState& sim, const sens::OrderOutcome& oc,
                       std::int64_t t, std::int64_t order_qty, std::vector<std::string>& out) {
    auto bad = [&](const std::string& m) { out.push_back(oc.order + ": " + m); };
    if (!oc.plan) return bad("fulfilled without a plan");
    const auto& a = oc.plan->allocations;
    if (a.empty() || a[0].node != sim.oem()) return bad("plan does not start at the OEM");
    if (a[0].timestamp != t) bad("OEM allocation not at t");
    if (oc.outcome == sens::Outcome::FromStock) {
        if (a.size() != 1 || a[0].quantity != order_qty) bad("stock allocation does not cover the order");
        return;
    }
    if (a[0].quantity != oc.produced || oc.produced <= 0 || oc.produced > order_qty) bad("OEM quantity mismatch");
    auto comps = direct_components(g, a[0].product);
    if (a.size() != comps.size() + 1) return bad("one allocation per component expected");
    for (std::size_t i = 1; i < a.size(); ++i) {
        auto it = comps.find(a[i].product);
        if (it == comps.end()) {
            bad("allocation of non-component " + a[i].product);
            continue;
        }
        if (a[i].quantity != it->second * oc.produced) bad("component quantity is not BOM x produced");
        if (a[i].timestamp != t - sim.delivery_time(a[i].node)) bad("t0 is not t - LT(s)");
    }
}

inline Result run(const sens::GeneratorConfig& cfg, std::int64_t horizon) {
    using namespace sens;
    Result r;
    Graph g = generate(cfg);
    SimulationOptions opt;
    opt.replenishment_quantity = cfg.replenishment_quantity;
    opt.replenishment_period = cfg.replenishment_period;
    SimulationState sim(g, opt);

    std::map<std::string, OrderView> orders;
    for (auto& o : all_orders(g)) orders[o.id] = o;

    std::int64_t now = 0;
    sim.set_order_observer([&](const OrderOutcome& oc, std::uint64_t before, std::uint64_t after) {
        if (oc.outcome == Outcome::Unfulfilled) {
            ++r.failed_orders;
            if (before != after) r.violations.push_back(oc.order + ": ledgers changed by a failed order");
            return;
        }
        if (oc.outcome == Outcome::Produced) ++r.produced_orders;
        check_plan(g, sim, oc, now, orders.at(oc.order).quantity, r.violations);
    });

    sim.materialize_capacity(horizon);
    for (now = 0; now < horizon; ++now) {
        r.reports.push_back(sim.step(now));
        for (auto& v : sim.invariant_violations()) r.violations.push_back("t=" + std::to_string(now) + ": " + v);
    }

    // One verdict per due order, none for the rest.
    const Graph& fin = sim.graph();
    for (const auto& [id, o] : orders) {
        std::int64_t due = o.delivery_time - sim.oem_delivery_time();
        auto verdicts = fin.objects(Term::iri(id), vocab::iri(vocab::isFulfilled));
        std::size_t expect = (due >= 0 && due < horizon) ? 1 : 0;
        if (verdicts.size() != expect)
            r.violations.push_back(id + ": " + std::to_string(verdicts.size()) + " verdicts, expected " +
                                   std::to_string(expect));
    }
    r.final_graph = fin;
    return r;
}

}  // namespace audit
