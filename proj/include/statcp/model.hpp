#pragma once

#include "statcp/interval.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace statcp {

using VarId = int;

// A variable domain: either a sorted finite set of integers or a real box.
// For finite domains `set` is authoritative and `box` mirrors its hull.
struct Domain {
    bool integral = false;
    Interval box = Interval::entire();
    std::vector<long long> set;

    static Domain real(double lo, double hi) {
        Domain d;
        d.box = Interval(lo, hi);
        return d;
    }
    static Domain int_range(long long lo, long long hi);
    static Domain int_set(std::vector<long long> vals);

    bool is_empty() const { return integral ? set.empty() : box.is_empty(); }
    bool is_fixed() const { return integral ? set.size() == 1 : box.is_point(); }
    Interval hull() const { return box; }
    size_t size() const { return integral ? set.size() : 0; }
    bool contains_int(long long v) const;
    void sync_hull(); // recompute box from set
    // Drop set elements outside [iv.lo, iv.hi]; returns true if any removed.
    bool restrict_to(const Interval& iv);
};

// Expression DAG node. Sum is n-ary with per-child coefficients plus a
// constant offset, which covers every linear identity in the catalog without
// chains of binary nodes.
enum class Op : std::uint8_t { Const, Var, Sum, Mul, Div, Sqr, Sqrt, Abs, Fn };

// Monotone scalar function with a (possibly approximate) inverse, used for
// distribution CDFs inside expressions. `slack` is added outward after every
// f/inv evaluation so approximate inverses stay sound enclosures.
struct FnDef {
    std::function<double(double)> f;
    std::function<double(double)> inv;
    bool increasing = true;
    Interval domain = Interval::entire();
    Interval range = Interval::entire();
    double slack = 1e-9;     // outward widening of forward images (y units)
    double inv_slack = 1e-7; // outward widening of inverse images (x units)
    std::string name;
};

struct Node {
    Op op = Op::Const;
    double value = 0.0;          // Const
    VarId var = -1;              // Var
    int a = -1, b = -1;          // Mul/Div/Sqr/Sqrt/Abs/Fn child ids
    int fn = -1;                 // Fn index
    std::vector<int> kids;       // Sum children
    std::vector<double> coef;    // Sum coefficients, parallel to kids
    double offset = 0.0;         // Sum constant
};

enum class RelOp { Eq, Le, Ge };

class Model;
class PropContext;

// A constraint: prunes domains through the context, signalling failure on it.
// Stateless and const so a Model is shareable across concurrent searches.
struct Propagator {
    virtual ~Propagator() = default;
    virtual void propagate(PropContext& ctx) const = 0;
    virtual void collect_vars(std::vector<VarId>& out) const = 0;
};

struct Objective {
    bool minimize = true;
    VarId var = -1;
};

class Model {
public:
    // --- variables ---
    VarId add_real(std::string name, double lo, double hi);
    VarId add_int(std::string name, long long lo, long long hi);
    VarId add_int_set(std::string name, std::vector<long long> vals);
    VarId add_fixed(std::string name, double value); // real point domain

    int var_count() const { return static_cast<int>(vars_.size()); }
    const Domain& initial_domain(VarId v) const { return vars_[v].dom; }
    const std::string& var_name(VarId v) const { return vars_[v].name; }
    VarId find_var(const std::string& name) const; // -1 if absent
    std::vector<Domain> initial_domains() const;

    // Branching set. If no variable is ever marked, all variables are
    // branched on; builders mark just the statistical parameters.
    void mark_search_var(VarId v);
    const std::vector<VarId>& search_vars() const { return search_vars_; }

    // --- expression arena ---
    int nconst(double v);
    int nvar(VarId v);
    int nsum(std::vector<int> kids, std::vector<double> coef, double offset = 0.0);
    int nadd(int a, int b);
    int nsub(int a, int b);
    int nmul(int a, int b);
    int ndiv(int a, int b);
    int nsqr(int a);
    int nsqrt(int a);
    int nabs(int a);
    int nfn(FnDef fn, int a);
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<FnDef>& fns() const { return fns_; }

    // --- constraints ---
    void post(std::unique_ptr<Propagator> p);
    void post_rel(int node, RelOp op, double rhs = 0.0);
    // var rel node, posted as (node - var) rel 0 flipped appropriately
    void post_var_eq(VarId v, int node);
    const std::vector<std::unique_ptr<Propagator>>& constraints() const { return props_; }

    void set_objective(bool minimize, VarId v) { objective_ = Objective{minimize, v}; }
    void clear_objective() { objective_.reset(); }
    const std::optional<Objective>& objective() const { return objective_; }

    // Validates the model (dangling ids, typing, finite real boxes) and
    // builds the var -> watching-constraint index. Must be called before
    // solving; the model is immutable afterwards.
    void finalize();
    bool finalized() const { return finalized_; }
    const std::vector<std::vector<int>>& watchers() const { return watchers_; }

private:
    struct VarRec {
        std::string name;
        Domain dom;
    };
    void check_mutable() const;
    void check_node(int id) const;

    std::vector<VarRec> vars_;
    std::vector<Node> nodes_;
    std::vector<FnDef> fns_;
    std::vector<std::unique_ptr<Propagator>> props_;
    std::vector<VarId> search_vars_;
    std::optional<Objective> objective_;
    std::vector<std::vector<int>> watchers_;
    bool finalized_ = false;
};

// Built-in relational constraint over an expression node, propagated with a
// forward/backward (HC4-style) traversal.
struct RelConstraint : Propagator {
    int node;
    RelOp op;
    double rhs;
    RelConstraint(int n, RelOp o, double r) : node(n), op(o), rhs(r) {}
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

// Reified comparison: b=1 <=> (node op rhs), with b a 0/1 integer variable.
// The negated side of a strict complement is enforced non-strictly (margin 0
// at interval granularity).
struct ReifiedRel : Propagator {
    int node;
    RelOp op;
    double rhs;
    VarId bvar;
    ReifiedRel(int n, RelOp o, double r, VarId b) : node(n), op(o), rhs(r), bvar(b) {}
    void propagate(PropContext& ctx) const override;
    void collect_vars(std::vector<VarId>& out) const override;
};

} // namespace statcp
