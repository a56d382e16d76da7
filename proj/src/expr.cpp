#include "statcp/propagate.hpp"

#include <cmath>

namespace statcp {

PropContext::PropContext(const Model& m, std::vector<Domain>& doms, double tau)
    : m_(&m), doms_(&doms), tau_(tau) {
    fwd_.resize(m.nodes().size());
    stamp_.assign(m.nodes().size(), -1);
}

void PropContext::begin_run() { ++epoch_; }

namespace {
// Sub-threshold shrinks of real boxes are reverted so the propagation
// fixpoint is exact (see PropContext::tighten contract).
bool significant_shrink(const Interval& oldb, const Interval& newb) {
    double tol = std::max(1e-12, 1e-4 * oldb.width());
    return (newb.lo - oldb.lo) > tol || (oldb.hi - newb.hi) > tol;
}
} // namespace

bool PropContext::tighten(VarId v, const Interval& iv) {
    Domain& d = (*doms_)[v];
    Interval nb = d.box.intersect(iv);
    if (nb.is_empty()) {
        fail_ = true;
        return false;
    }
    if (d.integral) {
        if (d.restrict_to(nb)) changed_.push_back(v);
        if (d.set.empty()) {
            fail_ = true;
            return false;
        }
        return true;
    }
    if (nb == d.box) return true;
    if (!significant_shrink(d.box, nb)) return true;
    d.box = nb;
    changed_.push_back(v);
    return true;
}

bool PropContext::remove_value(VarId v, long long val) {
    Domain& d = (*doms_)[v];
    auto it = std::lower_bound(d.set.begin(), d.set.end(), val);
    if (it != d.set.end() && *it == val) {
        d.set.erase(it);
        d.sync_hull();
        changed_.push_back(v);
        if (d.set.empty()) {
            fail_ = true;
            return false;
        }
    }
    return true;
}

bool PropContext::assign_int(VarId v, long long val) {
    Domain& d = (*doms_)[v];
    if (!d.contains_int(val)) {
        fail_ = true;
        return false;
    }
    if (d.set.size() > 1) {
        d.set = {val};
        d.sync_hull();
        changed_.push_back(v);
    }
    return true;
}

Interval PropContext::eval(int node) { return eval_rec(node); }

Interval PropContext::eval_rec(int id) {
    if (stamp_[id] == epoch_) return fwd_[id];
    const Node& n = m_->nodes()[id];
    Interval r;
    switch (n.op) {
    case Op::Const:
        r = Interval(n.value);
        break;
    case Op::Var:
        r = (*doms_)[n.var].hull();
        break;
    case Op::Sum: {
        r = Interval(n.offset);
        for (size_t i = 0; i < n.kids.size(); ++i)
            r = r + Interval(n.coef[i]) * eval_rec(n.kids[i]);
        break;
    }
    case Op::Mul:
        r = eval_rec(n.a) * eval_rec(n.b);
        break;
    case Op::Div:
        r = eval_rec(n.a) / eval_rec(n.b);
        break;
    case Op::Sqr:
        r = sqr(eval_rec(n.a));
        break;
    case Op::Sqrt:
        r = sqrt(eval_rec(n.a));
        break;
    case Op::Abs:
        r = abs(eval_rec(n.a));
        break;
    case Op::Fn: {
        const FnDef& f = m_->fns()[n.fn];
        Interval x = eval_rec(n.a).intersect(f.domain);
        if (x.is_empty()) {
            r = Interval::empty();
            break;
        }
        double ylo = f.f(x.lo), yhi = f.f(x.hi);
        if (!f.increasing) std::swap(ylo, yhi);
        r = outward(ylo - f.slack, yhi + f.slack).intersect(f.range);
        break;
    }
    }
    fwd_[id] = r;
    stamp_[id] = epoch_;
    return r;
}

bool PropContext::backward(int node, const Interval& req) { return back_rec(node, req); }

bool PropContext::back_rec(int id, const Interval& req) {
    const Node& n = m_->nodes()[id];
    Interval cur = stamp_[id] == epoch_ ? fwd_[id] : eval_rec(id);
    Interval nr = cur.intersect(req);
    if (nr.is_empty()) {
        fail_ = true;
        return false;
    }
    fwd_[id] = nr;
    switch (n.op) {
    case Op::Const:
        return true;
    case Op::Var:
        return tighten(n.var, nr);
    case Op::Sum: {
        // x_i ⊆ (req - sum_{j != i} coef_j * x_j) / coef_i, with the partial
        // sums taken over the forward enclosures (prefix/suffix arrays keep
        // this O(k)).
        const size_t k = n.kids.size();
        std::vector<Interval> term(k);
        for (size_t i = 0; i < k; ++i)
            term[i] = Interval(n.coef[i]) *
                      (stamp_[n.kids[i]] == epoch_ ? fwd_[n.kids[i]] : eval_rec(n.kids[i]));
        std::vector<Interval> pre(k + 1), suf(k + 1);
        pre[0] = Interval(n.offset);
        for (size_t i = 0; i < k; ++i) pre[i + 1] = pre[i] + term[i];
        suf[k] = Interval(0.0);
        for (size_t i = k; i-- > 0;) suf[i] = suf[i + 1] + term[i];
        for (size_t i = 0; i < k; ++i) {
            if (n.coef[i] == 0.0) continue;
            Interval others = pre[i] + suf[i + 1];
            Interval xi = (nr - others) / Interval(n.coef[i]);
            if (!back_rec(n.kids[i], xi)) return false;
        }
        return true;
    }
    case Op::Mul: {
        Interval fa = fwd_[n.a], fb = fwd_[n.b];
        Interval ra = div_rel(nr, fb);
        if (!ra.is_empty() && !back_rec(n.a, ra)) return false;
        Interval rb = div_rel(nr, fwd_[n.a]);
        if (!rb.is_empty() && !back_rec(n.b, rb)) return false;
        (void)fa;
        return true;
    }
    case Op::Div: {
        Interval fa = fwd_[n.a], fb = fwd_[n.b];
        if (!back_rec(n.a, nr * fb)) return false;
        Interval rb = div_rel(fa, nr);
        if (!rb.is_empty() && !back_rec(n.b, rb)) return false;
        return true;
    }
    case Op::Sqr: {
        Interval s = sqrt(nr);
        if (s.is_empty()) {
            fail_ = true;
            return false;
        }
        Interval fa = fwd_[n.a];
        Interval xi;
        if (fa.lo >= 0.0)
            xi = s;
        else if (fa.hi <= 0.0)
            xi = -s;
        else
            xi = Interval(-s.hi, s.hi);
        return back_rec(n.a, xi);
    }
    case Op::Sqrt:
        return back_rec(n.a, sqr(nr));
    case Op::Abs: {
        Interval p = nr.intersect(Interval(0.0, Interval::inf()));
        if (p.is_empty()) {
            fail_ = true;
            return false;
        }
        Interval fa = fwd_[n.a];
        Interval xi;
        if (fa.lo >= 0.0)
            xi = p;
        else if (fa.hi <= 0.0)
            xi = -p;
        else
            xi = Interval(-p.hi, p.hi);
        return back_rec(n.a, xi);
    }
    case Op::Fn: {
        const FnDef& f = m_->fns()[n.fn];
        Interval y = nr.intersect(f.range);
        if (y.is_empty()) {
            fail_ = true;
            return false;
        }
        double xlo, xhi;
        if (f.increasing) {
            xlo = f.inv(y.lo);
            xhi = f.inv(y.hi);
        } else {
            xlo = f.inv(y.hi);
            xhi = f.inv(y.lo);
        }
        if (std::isnan(xlo) || std::isnan(xhi)) return true; // inverse declined; no pruning
        Interval xi = outward(xlo - f.inv_slack, xhi + f.inv_slack).intersect(f.domain);
        return back_rec(n.a, xi);
    }
    }
    return true;
}

void collect_expr_vars(const Model& m, int node, std::vector<VarId>& out) {
    const Node& n = m.nodes()[node];
    switch (n.op) {
    case Op::Const:
        break;
    case Op::Var:
        out.push_back(n.var);
        break;
    case Op::Sum:
        for (int k : n.kids) collect_expr_vars(m, k, out);
        break;
    case Op::Mul:
    case Op::Div:
        collect_expr_vars(m, n.a, out);
        collect_expr_vars(m, n.b, out);
        break;
    case Op::Sqr:
    case Op::Sqrt:
    case Op::Abs:
    case Op::Fn:
        collect_expr_vars(m, n.a, out);
        break;
    }
}

} // namespace statcp
