#pragma once

#include "statcp/model.hpp"

namespace statcp {

// Per-search propagation workspace and the interface propagators prune
// through. Owns the forward-evaluation scratch (epoch-stamped so shared
// subexpressions are evaluated once per constraint run).
class PropContext {
public:
    PropContext(const Model& m, std::vector<Domain>& doms, double tau = 1e-9);

    double tau() const { return tau_; }

    const Model& model() const { return *m_; }
    std::vector<Domain>& domains() { return *doms_; }
    const Domain& dom(VarId v) const { return (*doms_)[v]; }
    Interval hull(VarId v) const { return (*doms_)[v].hull(); }

    bool failed() const { return fail_; }
    void fail() { fail_ = true; }

    // Contract a variable's domain with an interval. Sub-threshold real
    // shrinks are reverted (soundness is unaffected; this makes the fixpoint
    // a true fixpoint, hence propagation idempotent). Returns false on empty.
    bool tighten(VarId v, const Interval& iv);
    // Remove a single value from a finite domain.
    bool remove_value(VarId v, long long val);
    bool assign_int(VarId v, long long val);

    // Forward interval evaluation of an expression node (memoized per run).
    Interval eval(int node);
    // Backward projection: require node's value to lie in `req`, contracting
    // the variables underneath. Returns false on failure.
    bool backward(int node, const Interval& req);
    // Start a fresh forward/backward run (bumps the memo epoch).
    void begin_run();

    // Changed-variable marks consumed by the fixpoint engine.
    std::vector<VarId>& changed() { return changed_; }

private:
    Interval eval_rec(int id);
    bool back_rec(int id, const Interval& req);

    const Model* m_;
    std::vector<Domain>* doms_;
    std::vector<Interval> fwd_;
    std::vector<int> stamp_;
    int epoch_ = 0;
    double tau_ = 1e-9;
    bool fail_ = false;
    std::vector<VarId> changed_;
};

// All variables appearing under an expression node.
void collect_expr_vars(const Model& m, int node, std::vector<VarId>& out);

enum class PropOutcome { Fixpoint, Fail };

// Run all constraints to a propagation fixpoint (worklist over the model's
// var -> constraint watch index). Contraction only; FAIL iff a domain empties.
PropOutcome propagate(const Model& m, std::vector<Domain>& doms, double tau = 1e-9);

} // namespace statcp
