#include "statcp/propagate.hpp"

#include <deque>
#include <stdexcept>

namespace statcp {

void RelConstraint::propagate(PropContext& ctx) const {
    ctx.begin_run();
    Interval out = ctx.eval(node);
    if (out.is_empty()) {
        ctx.fail();
        return;
    }
    double tau = ctx.tau();
    Interval req;
    switch (op) {
    case RelOp::Eq: req = Interval(rhs - tau, rhs + tau); break;
    case RelOp::Le: req = Interval(-Interval::inf(), rhs + tau); break;
    case RelOp::Ge: req = Interval(rhs - tau, Interval::inf()); break;
    }
    ctx.backward(node, req);
}

void RelConstraint::collect_vars(std::vector<VarId>& out) const {
    // Resolved lazily by the engine (needs the model); see Model::finalize.
    (void)out;
}

void ReifiedRel::propagate(PropContext& ctx) const {
    ctx.begin_run();
    Interval out = ctx.eval(node);
    if (out.is_empty()) {
        ctx.fail();
        return;
    }
    const Domain& bd = ctx.dom(bvar);
    bool can0 = bd.contains_int(0), can1 = bd.contains_int(1);
    if (!can0 && !can1) {
        ctx.fail();
        return;
    }
    double tau = ctx.tau();
    Interval sat, viol; // satisfying set; closure of the complement
    switch (op) {
    case RelOp::Le:
        sat = Interval(-Interval::inf(), rhs + tau);
        viol = Interval(rhs, Interval::inf());
        break;
    case RelOp::Ge:
        sat = Interval(rhs - tau, Interval::inf());
        viol = Interval(-Interval::inf(), rhs);
        break;
    case RelOp::Eq:
        sat = Interval(rhs - tau, rhs + tau);
        viol = Interval::entire(); // x != rhs prunes nothing over a box
        break;
    }
    // Condition entailed / refuted by the current box -> fix b.
    bool surely_true = sat.contains(out);
    bool surely_false = !out.intersects(sat);
    if (surely_true) {
        if (!ctx.assign_int(bvar, 1)) return;
        can0 = false;
    } else if (surely_false) {
        if (!ctx.assign_int(bvar, 0)) return;
        can1 = false;
    }
    if (can1 && !can0)
        ctx.backward(node, sat);
    else if (can0 && !can1 && op != RelOp::Eq)
        ctx.backward(node, viol);
}

void ReifiedRel::collect_vars(std::vector<VarId>& out) const { out.push_back(bvar); }

PropOutcome propagate(const Model& m, std::vector<Domain>& doms, double tau) {
    if (!m.finalized()) throw std::logic_error("model must be finalized before propagation");
    PropContext ctx(m, doms, tau);
    const auto& props = m.constraints();
    std::deque<int> queue;
    std::vector<char> queued(props.size(), 1);
    for (int i = 0; i < static_cast<int>(props.size()); ++i) queue.push_back(i);

    const std::vector<std::vector<int>>& watch = m.watchers();

    long long runs = 0, cap = 200'000;
    while (!queue.empty()) {
        int ci = queue.front();
        queue.pop_front();
        queued[ci] = 0;
        props[ci]->propagate(ctx);
        if (ctx.failed()) return PropOutcome::Fail;
        for (VarId v : ctx.changed()) {
            for (int w : watch[v]) {
                if (!queued[w]) {
                    queued[w] = 1;
                    queue.push_back(w);
                }
            }
        }
        ctx.changed().clear();
        if (++runs > cap) break; // termination guard; stopping early stays sound
    }
    return PropOutcome::Fixpoint;
}

} // namespace statcp
