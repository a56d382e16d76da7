#include "statcp/counting.hpp"

#include "statcp/propagate.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace statcp {

BinStructure BinStructure::uniform(double lo, double hi, int m) {
    BinStructure b;
    b.boundaries.resize(m + 1);
    for (int j = 0; j <= m; ++j) b.boundaries[j] = lo + (hi - lo) * j / m;
    b.validate();
    return b;
}

void BinStructure::validate() const {
    if (boundaries.size() < 2) throw std::invalid_argument("bins: need at least one bin");
    for (size_t i = 1; i < boundaries.size(); ++i)
        if (!(boundaries[i - 1] < boundaries[i]))
            throw std::invalid_argument("bins: boundaries must be strictly increasing");
}

int BinStructure::locate(double x) const {
    if (x < boundaries.front() || x >= boundaries.back()) return 0;
    int j = static_cast<int>(std::upper_bound(boundaries.begin(), boundaries.end(), x) -
                             boundaries.begin());
    return j; // boundaries[j-1] <= x < boundaries[j]
}

// --- BinAllocate ---

void BinAllocate::propagate(PropContext& ctx) const {
    const int m = static_cast<int>(bounds.size()) - 1;
    Interval xh = ctx.hull(x);
    // Prune allocation values with no overlap with the value hull.
    const Domain ad = ctx.dom(alloc); // copy: we mutate while iterating
    for (long long j : ad.set) {
        bool possible;
        if (j == 0)
            possible = !closed && (xh.lo < bounds.front() || xh.hi >= bounds.back());
        else
            possible = xh.hi >= bounds[j - 1] && xh.lo < bounds[j];
        if (!possible && !ctx.remove_value(alloc, j)) return;
    }
    const Domain& ad2 = ctx.dom(alloc);
    if (ad2.set.empty()) {
        ctx.fail();
        return;
    }
    // Back-channel: hull of the regions still allowed.
    bool outside_allowed = ad2.contains_int(0);
    if (!outside_allowed) {
        long long jmin = ad2.set.front(), jmax = ad2.set.back();
        if (!ctx.tighten(x, Interval(bounds[jmin - 1], bounds[jmax]))) return;
    }
    // Integer value variables are filtered exactly per value.
    const Domain& xd = ctx.dom(x);
    if (xd.integral) {
        BinStructure bs{bounds};
        const Domain xc = xd;
        for (long long v : xc.set) {
            int j = bs.locate(static_cast<double>(v));
            if (!ad2.contains_int(j) && !ctx.remove_value(x, v)) return;
        }
    }
}

void BinAllocate::collect_vars(std::vector<VarId>& out) const {
    out.push_back(x);
    out.push_back(alloc);
}

// --- Gcc (counting-bounds propagation) ---

void Gcc::propagate(PropContext& ctx) const {
    const int n = static_cast<int>(xs.size());
    const int mv = static_cast<int>(values.size());
    std::vector<int> fixed(mv, 0), possible(mv, 0);
    int fixed_outside = 0;
    for (int i = 0; i < n; ++i) {
        const Domain& d = ctx.dom(xs[i]);
        bool any = false;
        for (int j = 0; j < mv; ++j) {
            if (d.contains_int(values[j])) {
                ++possible[j];
                if (d.set.size() == 1) ++fixed[j];
                any = true;
            }
        }
        if (!any && d.set.size() == 1) ++fixed_outside;
        if (closed) {
            // Drop values outside the listed set.
            const Domain dc = d;
            for (long long v : dc.set)
                if (std::find(values.begin(), values.end(), v) == values.end() &&
                    !ctx.remove_value(xs[i], v))
                    return;
        }
    }
    long long sum_min = 0, sum_max = 0;
    for (int j = 0; j < mv; ++j) {
        if (!ctx.tighten(counts[j], Interval(fixed[j], possible[j]))) return;
        const Domain& cd = ctx.dom(counts[j]);
        sum_min += cd.set.front();
        sum_max += cd.set.back();
    }
    // sum(c) <= n always; = n when closed (every variable counted).
    for (int j = 0; j < mv; ++j) {
        const Domain& cd = ctx.dom(counts[j]);
        long long others_min = sum_min - cd.set.front();
        long long others_max = sum_max - cd.set.back();
        double lo = closed ? static_cast<double>(n - others_max) : -Interval::inf();
        double hi = static_cast<double>(n - others_min);
        if (!ctx.tighten(counts[j], Interval(lo, hi))) return;
    }
    // Count bounds back to the variables.
    for (int j = 0; j < mv; ++j) {
        const Domain& cd = ctx.dom(counts[j]);
        long long cmin = cd.set.front(), cmax = cd.set.back();
        if (cmax == fixed[j] && possible[j] > fixed[j]) {
            // No more variables may take this value.
            for (int i = 0; i < n; ++i) {
                const Domain& d = ctx.dom(xs[i]);
                if (d.set.size() > 1 && d.contains_int(values[j]) &&
                    !ctx.remove_value(xs[i], values[j]))
                    return;
            }
        } else if (cmin == possible[j] && fixed[j] < possible[j]) {
            // Every remaining support is required.
            for (int i = 0; i < n; ++i) {
                const Domain& d = ctx.dom(xs[i]);
                if (d.set.size() > 1 && d.contains_int(values[j]) &&
                    !ctx.assign_int(xs[i], values[j]))
                    return;
            }
        }
    }
    (void)fixed_outside;
}

void Gcc::collect_vars(std::vector<VarId>& out) const {
    out.insert(out.end(), xs.begin(), xs.end());
    out.insert(out.end(), counts.begin(), counts.end());
}

// --- CellMember ---

namespace {
// Possible/certain membership of a hull in [lo, hi).
bool may_be_in(const Interval& x, double lo, double hi) { return x.hi >= lo && x.lo < hi; }
bool must_be_in(const Interval& x, double lo, double hi) { return x.lo >= lo && x.hi < hi; }

// Exclude [lo, hi) from x where a box can express it (end clipping only).
bool exclude(PropContext& ctx, VarId v, const Interval& x, double lo, double hi) {
    if (must_be_in(x, lo, hi)) {
        ctx.fail();
        return false;
    }
    if (x.lo >= lo && x.lo < hi) return ctx.tighten(v, Interval(hi, Interval::inf()));
    if (x.hi >= lo && x.hi < hi) return ctx.tighten(v, Interval(-Interval::inf(), lo));
    return true;
}
} // namespace

void CellMember::propagate(PropContext& ctx) const {
    Interval h1 = ctx.hull(x1), h2 = ctx.hull(x2);
    const Domain& bd = ctx.dom(bvar);
    bool can0 = bd.contains_int(0), can1 = bd.contains_int(1);
    bool may = may_be_in(h1, rlo, rhi) && may_be_in(h2, clo, chi);
    bool must = must_be_in(h1, rlo, rhi) && must_be_in(h2, clo, chi);
    if (!may) {
        if (!ctx.assign_int(bvar, 0)) return;
        can1 = false;
    } else if (must) {
        if (!ctx.assign_int(bvar, 1)) return;
        can0 = false;
    }
    if (can1 && !can0) {
        if (!ctx.tighten(x1, Interval(rlo, rhi))) return;
        if (!ctx.tighten(x2, Interval(clo, chi))) return;
    } else if (can0 && !can1) {
        // Outside the cell: prune only when one coordinate is certainly
        // inside, so the other must avoid its range.
        if (must_be_in(h1, rlo, rhi)) {
            if (!exclude(ctx, x2, h2, clo, chi)) return;
        }
        if (must_be_in(h2, clo, chi)) {
            if (!exclude(ctx, x1, h1, rlo, rhi)) return;
        }
    }
}

void CellMember::collect_vars(std::vector<VarId>& out) const {
    out.push_back(x1);
    out.push_back(x2);
    out.push_back(bvar);
}

// --- factories ---

void post_global_cardinality(Model& m, const std::vector<VarId>& xs,
                             const std::vector<long long>& values,
                             const std::vector<VarId>& counts, bool closed) {
    if (values.size() != counts.size()) throw std::invalid_argument("gcc: |values| != |counts|");
    for (size_t i = 1; i < values.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (values[i] == values[j]) throw std::invalid_argument("gcc: duplicate value");
    auto p = std::make_unique<Gcc>();
    p->xs = xs;
    p->values = values;
    p->counts = counts;
    p->closed = closed;
    m.post(std::move(p));
}

std::vector<VarId> post_bin_counts(Model& m, const std::vector<VarId>& xs,
                                   const BinStructure& bins, const std::vector<VarId>& counts,
                                   bool closed) {
    bins.validate();
    const int mb = bins.bins();
    if (static_cast<int>(counts.size()) != mb)
        throw std::invalid_argument("bin_counts: |counts| != number of bins");
    std::vector<VarId> allocs;
    allocs.reserve(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        VarId a = m.add_int("_alloc" + std::to_string(m.var_count()), closed ? 1 : 0, mb);
        allocs.push_back(a);
        auto p = std::make_unique<BinAllocate>();
        p->x = xs[i];
        p->bounds = bins.boundaries;
        p->alloc = a;
        p->closed = closed;
        m.post(std::move(p));
    }
    std::vector<long long> vals(mb);
    for (int j = 0; j < mb; ++j) vals[j] = j + 1;
    post_global_cardinality(m, allocs, vals, counts, closed);
    return allocs;
}

ContingencyVars post_contingency(Model& m,
                                 const std::vector<std::pair<VarId, VarId>>& pairs,
                                 const BinStructure& rowBins, const BinStructure& colBins) {
    rowBins.validate();
    colBins.validate();
    const int m1 = rowBins.bins(), m2 = colBins.bins();
    const int n = static_cast<int>(pairs.size());
    ContingencyVars cv;
    cv.cells.assign(m1, std::vector<VarId>(m2));
    // Per-pair cell membership booleans; cell counts are their sums.
    std::vector<std::vector<std::vector<VarId>>> bs(m1, std::vector<std::vector<VarId>>(m2));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < m1; ++i) {
            for (int j = 0; j < m2; ++j) {
                VarId b = m.add_int("_cell" + std::to_string(m.var_count()), 0, 1);
                bs[i][j].push_back(b);
                auto p = std::make_unique<CellMember>();
                p->x1 = pairs[k].first;
                p->x2 = pairs[k].second;
                p->rlo = rowBins.boundaries[i];
                p->rhi = rowBins.boundaries[i + 1];
                p->clo = colBins.boundaries[j];
                p->chi = colBins.boundaries[j + 1];
                p->bvar = b;
                m.post(std::move(p));
            }
        }
    }
    for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) {
            VarId c = m.add_int("_c" + std::to_string(i) + "_" + std::to_string(j), 0, n);
            cv.cells[i][j] = c;
            std::vector<int> kids;
            std::vector<double> coef;
            for (VarId b : bs[i][j]) {
                kids.push_back(m.nvar(b));
                coef.push_back(1.0);
            }
            kids.push_back(m.nvar(c));
            coef.push_back(-1.0);
            m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
        }
    }
    auto marginal = [&](const std::string& name, const std::vector<VarId>& cells) {
        VarId v = m.add_int(name, 0, n);
        std::vector<int> kids;
        std::vector<double> coef;
        for (VarId c : cells) {
            kids.push_back(m.nvar(c));
            coef.push_back(1.0);
        }
        kids.push_back(m.nvar(v));
        coef.push_back(-1.0);
        m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
        return v;
    };
    for (int i = 0; i < m1; ++i) {
        std::vector<VarId> row;
        for (int j = 0; j < m2; ++j) row.push_back(cv.cells[i][j]);
        cv.row_marginals.push_back(marginal("_h" + std::to_string(i), row));
    }
    for (int j = 0; j < m2; ++j) {
        std::vector<VarId> col;
        for (int i = 0; i < m1; ++i) col.push_back(cv.cells[i][j]);
        cv.col_marginals.push_back(marginal("_w" + std::to_string(j), col));
    }
    return cv;
}

} // namespace statcp
