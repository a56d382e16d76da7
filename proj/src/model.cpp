#include "statcp/model.hpp"

#include "statcp/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace statcp {

Domain Domain::int_range(long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("int_range: lo > hi");
    Domain d;
    d.integral = true;
    d.set.reserve(static_cast<size_t>(hi - lo + 1));
    for (long long v = lo; v <= hi; ++v) d.set.push_back(v);
    d.sync_hull();
    return d;
}

Domain Domain::int_set(std::vector<long long> vals) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) throw std::invalid_argument("int_set: empty");
    Domain d;
    d.integral = true;
    d.set = std::move(vals);
    d.sync_hull();
    return d;
}

bool Domain::contains_int(long long v) const {
    return std::binary_search(set.begin(), set.end(), v);
}

void Domain::sync_hull() {
    if (set.empty())
        box = Interval::empty();
    else
        box = Interval(static_cast<double>(set.front()), static_cast<double>(set.back()));
}

bool Domain::restrict_to(const Interval& iv) {
    // Keep v with iv.lo <= v <= iv.hi (integers compared exactly).
    double lo = std::ceil(iv.lo), hi = std::floor(iv.hi);
    size_t before = set.size();
    set.erase(std::remove_if(set.begin(), set.end(),
                             [&](long long v) {
                                 double d = static_cast<double>(v);
                                 return d < lo || d > hi;
                             }),
              set.end());
    if (set.size() != before) {
        sync_hull();
        return true;
    }
    return false;
}

VarId Model::add_real(std::string name, double lo, double hi) {
    check_mutable();
    if (!(lo <= hi)) throw std::invalid_argument("add_real: bad bounds for " + name);
    vars_.push_back({std::move(name), Domain::real(lo, hi)});
    return static_cast<VarId>(vars_.size() - 1);
}

VarId Model::add_int(std::string name, long long lo, long long hi) {
    check_mutable();
    vars_.push_back({std::move(name), Domain::int_range(lo, hi)});
    return static_cast<VarId>(vars_.size() - 1);
}

VarId Model::add_int_set(std::string name, std::vector<long long> vals) {
    check_mutable();
    vars_.push_back({std::move(name), Domain::int_set(std::move(vals))});
    return static_cast<VarId>(vars_.size() - 1);
}

VarId Model::add_fixed(std::string name, double value) { return add_real(std::move(name), value, value); }

VarId Model::find_var(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<VarId>(i);
    return -1;
}

std::vector<Domain> Model::initial_domains() const {
    std::vector<Domain> out;
    out.reserve(vars_.size());
    for (const auto& v : vars_) out.push_back(v.dom);
    return out;
}

void Model::mark_search_var(VarId v) {
    check_mutable();
    if (std::find(search_vars_.begin(), search_vars_.end(), v) == search_vars_.end())
        search_vars_.push_back(v);
}

int Model::nconst(double v) {
    Node n;
    n.op = Op::Const;
    n.value = v;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nvar(VarId v) {
    Node n;
    n.op = Op::Var;
    n.var = v;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nsum(std::vector<int> kids, std::vector<double> coef, double offset) {
    if (kids.size() != coef.size()) throw std::invalid_argument("nsum: size mismatch");
    Node n;
    n.op = Op::Sum;
    n.kids = std::move(kids);
    n.coef = std::move(coef);
    n.offset = offset;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nadd(int a, int b) { return nsum({a, b}, {1.0, 1.0}); }
int Model::nsub(int a, int b) { return nsum({a, b}, {1.0, -1.0}); }

int Model::nmul(int a, int b) {
    Node n;
    n.op = Op::Mul;
    n.a = a;
    n.b = b;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::ndiv(int a, int b) {
    Node n;
    n.op = Op::Div;
    n.a = a;
    n.b = b;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nsqr(int a) {
    Node n;
    n.op = Op::Sqr;
    n.a = a;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nsqrt(int a) {
    Node n;
    n.op = Op::Sqrt;
    n.a = a;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nabs(int a) {
    Node n;
    n.op = Op::Abs;
    n.a = a;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

int Model::nfn(FnDef fn, int a) {
    fns_.push_back(std::move(fn));
    Node n;
    n.op = Op::Fn;
    n.a = a;
    n.fn = static_cast<int>(fns_.size() - 1);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

void Model::post(std::unique_ptr<Propagator> p) {
    check_mutable();
    props_.push_back(std::move(p));
}

void Model::post_rel(int node, RelOp op, double rhs) {
    post(std::make_unique<RelConstraint>(node, op, rhs));
}

void Model::post_var_eq(VarId v, int node) { post_rel(nsub(node, nvar(v)), RelOp::Eq, 0.0); }

void Model::check_mutable() const {
    if (finalized_) throw std::logic_error("model is immutable after finalize()");
}

void Model::check_node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("dangling expression node id");
    const Node& n = nodes_[id];
    switch (n.op) {
    case Op::Const: break;
    case Op::Var:
        if (n.var < 0 || n.var >= var_count()) throw std::invalid_argument("dangling VarId in expression");
        break;
    case Op::Sum:
        for (int k : n.kids) check_node(k);
        break;
    case Op::Mul:
    case Op::Div:
        check_node(n.a);
        check_node(n.b);
        break;
    case Op::Sqr:
    case Op::Sqrt:
    case Op::Abs:
        check_node(n.a);
        break;
    case Op::Fn:
        if (n.fn < 0 || n.fn >= static_cast<int>(fns_.size()))
            throw std::invalid_argument("dangling function id");
        check_node(n.a);
        break;
    }
}

void Model::finalize() {
    if (finalized_) return;
    for (const auto& vr : vars_) {
        if (!vr.dom.integral &&
            (!std::isfinite(vr.dom.box.lo) || !std::isfinite(vr.dom.box.hi)))
            throw std::invalid_argument("unbounded real domain for variable " + vr.name);
        if (vr.dom.is_empty()) throw std::invalid_argument("empty initial domain for " + vr.name);
    }
    std::vector<VarId> scratch;
    watchers_.assign(vars_.size(), {});
    for (size_t ci = 0; ci < props_.size(); ++ci) {
        scratch.clear();
        props_[ci]->collect_vars(scratch);
        if (auto* r = dynamic_cast<const RelConstraint*>(props_[ci].get()))
            collect_expr_vars(*this, r->node, scratch);
        if (auto* r = dynamic_cast<const ReifiedRel*>(props_[ci].get()))
            collect_expr_vars(*this, r->node, scratch);
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        for (VarId v : scratch) {
            if (v < 0 || v >= var_count()) throw std::invalid_argument("constraint references unknown variable");
            watchers_[v].push_back(static_cast<int>(ci));
        }
    }
    if (objective_ && (objective_->var < 0 || objective_->var >= var_count()))
        throw std::invalid_argument("objective variable does not exist");
    // Type/shape check every expression reachable from Rel constraints.
    for (const auto& p : props_) {
        if (auto* r = dynamic_cast<const RelConstraint*>(p.get())) check_node(r->node);
        if (auto* r = dynamic_cast<const ReifiedRel*>(p.get())) check_node(r->node);
    }
    if (search_vars_.empty())
        for (VarId v = 0; v < var_count(); ++v) search_vars_.push_back(v);
    finalized_ = true;
}

} // namespace statcp
