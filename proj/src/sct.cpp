#include "statcp/sct.hpp"

#include "statcp/dist.hpp"
#include "statcp/matrixinv.hpp"
#include "statcp/propagate.hpp"
#include "statcp/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace statcp {

void post_t_test(Model& m, const std::vector<VarId>& X, VarId mu, const TestSpec& spec) {
    const int n = static_cast<int>(X.size());
    if (n < 2) throw std::invalid_argument("t-test needs n >= 2");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw std::invalid_argument("alpha out of (0,1)");
    VarId mean = make_mean_var(m, X, "_tmean" + std::to_string(m.var_count()));
    Interval h;
    {
        h = Interval::empty();
        for (VarId x : X) h = h.hull(m.initial_domain(x).hull());
    }
    VarId se = m.add_real("_tse" + std::to_string(m.var_count()), 0.0, h.width() + 1.0);
    post_statistic(m, StatisticKind::StdErr, X, se);
    DistSpec t = DistSpec::student_t(n - 1);
    switch (spec.tail) {
    case Tail::Eq: {
        double ts = quantile(t, 1.0 - spec.alpha / 2.0);
        // mu <= mean + ts*se  and  mu >= mean - ts*se
        m.post_rel(m.nsum({m.nvar(mu), m.nvar(mean), m.nvar(se)}, {1.0, -1.0, -ts}), RelOp::Le, 0.0);
        m.post_rel(m.nsum({m.nvar(mean), m.nvar(mu), m.nvar(se)}, {1.0, -1.0, -ts}), RelOp::Le, 0.0);
        break;
    }
    case Tail::Ge: { // alternative: population mean > mu
        double ts = quantile(t, 1.0 - spec.alpha);
        m.post_rel(m.nsum({m.nvar(mean), m.nvar(mu), m.nvar(se)}, {1.0, -1.0, -ts}), RelOp::Le, 0.0);
        break;
    }
    case Tail::Le: {
        double ts = quantile(t, 1.0 - spec.alpha);
        m.post_rel(m.nsum({m.nvar(mu), m.nvar(mean), m.nvar(se)}, {1.0, -1.0, -ts}), RelOp::Le, 0.0);
        break;
    }
    case Tail::Ne:
        throw std::invalid_argument("t-test: the reject-region tail is not expressible as a conjunction");
    }
}

GofVars post_chi2_gof(Model& m, const std::vector<VarId>& X, const BinStructure& bins,
                      const std::vector<VarId>& targets, VarId s,
                      const std::optional<TestSpec>& spec, bool closed_bins) {
    const int mb = bins.bins();
    const int n = static_cast<int>(X.size());
    if (static_cast<int>(targets.size()) != mb)
        throw std::invalid_argument("chi2_gof: |targets| != number of bins");
    GofVars out;
    for (int j = 0; j < mb; ++j)
        out.counts.push_back(m.add_int("_gofc" + std::to_string(m.var_count()), 0, n));
    out.allocs = post_bin_counts(m, X, bins, out.counts, closed_bins);
    std::vector<int> kids;
    std::vector<double> coef;
    for (int j = 0; j < mb; ++j) {
        m.post_rel(m.nvar(targets[j]), RelOp::Ge, kGofTargetMin);
        int diff = m.nsum({m.nvar(out.counts[j]), m.nvar(targets[j])}, {1.0, -1.0});
        kids.push_back(m.ndiv(m.nsqr(diff), m.nvar(targets[j])));
        coef.push_back(1.0);
    }
    kids.push_back(m.nvar(s));
    coef.push_back(-1.0);
    m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
    m.post_rel(m.nvar(s), RelOp::Ge, 0.0);
    if (spec) {
        double q = quantile(DistSpec::chi_squared(mb - 1), 1.0 - spec->alpha);
        m.post_rel(m.nvar(s), RelOp::Le, q);
    }
    return out;
}

// --- independence statistic ---

void Chi2IndepStat::propagate(PropContext& ctx) const {
    const int m1 = static_cast<int>(cells.size());
    const int m2 = static_cast<int>(cells[0].size());
    Interval total(0.0);
    const Interval nn(static_cast<double>(n));
    for (int i = 0; i < m1; ++i) {
        Interval hi = ctx.hull(rows[i]);
        for (int j = 0; j < m2; ++j) {
            Interval wj = ctx.hull(cols[j]);
            Interval cij = ctx.hull(cells[i][j]);
            Interval term;
            // Marginals are integral, so "nonzero" means ">= 1"; branching on
            // that keeps E bounded away from 0 instead of trusting the
            // outward-rounded product of a pinned zero.
            if (hi.hi <= 0.0 || wj.hi <= 0.0) {
                // expected count surely zero: term is 0, and the observed
                // count must be 0 too
                if (cij.lo > 0.0) {
                    ctx.fail();
                    return;
                }
                term = Interval(0.0);
            } else {
                Interval one(1.0, Interval::inf());
                Interval E = hi.intersect(one) * wj.intersect(one) / nn;
                term = sqr(cij - E) / E;
                term = term.intersect(Interval(0.0, Interval::inf()));
                if (hi.lo <= 0.0 || wj.lo <= 0.0)
                    term = term.hull(Interval(0.0)); // zero-E limit
            }
            total = total + term;
        }
    }
    ctx.tighten(s, total);
}

void Chi2IndepStat::collect_vars(std::vector<VarId>& out) const {
    for (const auto& row : cells) out.insert(out.end(), row.begin(), row.end());
    out.insert(out.end(), rows.begin(), rows.end());
    out.insert(out.end(), cols.begin(), cols.end());
    out.push_back(s);
}

ContingencyVars post_chi2_independence(Model& m,
                                       const std::vector<std::pair<VarId, VarId>>& pairs,
                                       const BinStructure& rowBins, const BinStructure& colBins,
                                       VarId s, const std::optional<TestSpec>& spec) {
    ContingencyVars cv = post_contingency(m, pairs, rowBins, colBins);
    auto p = std::make_unique<Chi2IndepStat>();
    p->cells = cv.cells;
    p->rows = cv.row_marginals;
    p->cols = cv.col_marginals;
    p->n = static_cast<int>(pairs.size());
    p->s = s;
    m.post(std::move(p));
    m.post_rel(m.nvar(s), RelOp::Ge, 0.0);
    if (spec) {
        int df = (rowBins.bins() - 1) * (colBins.bins() - 1);
        double q = quantile(DistSpec::chi_squared(df), 1.0 - spec->alpha);
        m.post_rel(m.nvar(s), RelOp::Le, q);
    }
    return cv;
}

void post_f_ratio(Model& m, const std::vector<VarId>& X1, const std::vector<VarId>& X2, VarId s,
                  const std::optional<TestSpec>& spec) {
    const int n1 = static_cast<int>(X1.size()), n2 = static_cast<int>(X2.size());
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("f_ratio needs n1, n2 >= 2");
    VarId v1 = make_variance_var(m, X1, "_fv1" + std::to_string(m.var_count()));
    VarId v2 = make_variance_var(m, X2, "_fv2" + std::to_string(m.var_count()));
    // s * v2 = v1 (multiplied-through form of s = v1/v2)
    m.post_rel(m.nsum({m.nmul(m.nvar(s), m.nvar(v2)), m.nvar(v1)}, {1.0, -1.0}), RelOp::Eq, 0.0);
    m.post_rel(m.nvar(s), RelOp::Ge, 0.0);
    if (spec) {
        DistSpec f = DistSpec::fisher_f(n1 - 1, n2 - 1);
        switch (spec->tail) {
        case Tail::Eq:
        case Tail::Ne:
            m.post_rel(m.nvar(s), RelOp::Ge, quantile(f, spec->alpha / 2.0));
            m.post_rel(m.nvar(s), RelOp::Le, quantile(f, 1.0 - spec->alpha / 2.0));
            break;
        case Tail::Ge: // alternative: v1 > v2
            m.post_rel(m.nvar(s), RelOp::Le, quantile(f, 1.0 - spec->alpha));
            break;
        case Tail::Le:
            m.post_rel(m.nvar(s), RelOp::Ge, quantile(f, spec->alpha));
            break;
        }
    }
}

namespace {

HotellingVars post_hotelling_core(Model& m, const std::vector<std::vector<VarId>>& X,
                                  const std::vector<VarId>& mu,
                                  const std::vector<std::vector<VarId>>& M, VarId s) {
    const int n = static_cast<int>(X.size());
    const int p = static_cast<int>(mu.size());
    HotellingVars hv;
    hv.cov = M;
    // column means
    for (int j = 0; j < p; ++j) {
        std::vector<VarId> col;
        col.reserve(n);
        for (int k = 0; k < n; ++k) col.push_back(X[k][j]);
        hv.xbar.push_back(make_mean_var(m, col, "_xbar" + std::to_string(m.var_count())));
    }
    // inverse entries
    hv.cov_inv.assign(p, std::vector<VarId>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            hv.cov_inv[i][j] = m.add_real("_binv" + std::to_string(m.var_count()), -1e9, 1e9);
    post_matrix_inversion(m, M, hv.cov_inv);
    // s = n * sum_ij d_i B_ij d_j with d_i = xbar_i - mu_i
    std::vector<int> dnode(p);
    for (int i = 0; i < p; ++i) dnode[i] = m.nsum({m.nvar(hv.xbar[i]), m.nvar(mu[i])}, {1.0, -1.0});
    std::vector<int> kids;
    std::vector<double> coef;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            kids.push_back(m.nmul(m.nmul(dnode[i], dnode[j]), m.nvar(hv.cov_inv[i][j])));
            coef.push_back(static_cast<double>(n));
        }
    }
    kids.push_back(m.nvar(s));
    coef.push_back(-1.0);
    m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
    return hv;
}

void check_hotelling_shapes(const std::vector<std::vector<VarId>>& X, const std::vector<VarId>& mu) {
    const int p = static_cast<int>(mu.size());
    if (p < 1 || p > kMatrixNMax) throw std::invalid_argument("hotelling: p out of range");
    if (X.size() < 2) throw std::invalid_argument("hotelling: n >= 2 required");
    for (const auto& row : X)
        if (static_cast<int>(row.size()) != p) throw std::invalid_argument("hotelling: ragged tuples");
}

} // namespace

HotellingVars post_hotelling_chi2(Model& m, const std::vector<std::vector<VarId>>& X,
                                  const std::vector<VarId>& mu,
                                  const std::vector<std::vector<VarId>>& Sigma, VarId s,
                                  const std::optional<TestSpec>& spec) {
    check_hotelling_shapes(X, mu);
    HotellingVars hv = post_hotelling_core(m, X, mu, Sigma, s);
    m.post_rel(m.nvar(s), RelOp::Ge, 0.0);
    if (spec) {
        double q = quantile(DistSpec::chi_squared(static_cast<double>(mu.size())), 1.0 - spec->alpha);
        m.post_rel(m.nvar(s), RelOp::Le, q);
    }
    return hv;
}

HotellingVars post_hotelling_t2(Model& m, const std::vector<std::vector<VarId>>& X,
                                const std::vector<VarId>& mu, VarId s,
                                const std::optional<TestSpec>& spec) {
    check_hotelling_shapes(X, mu);
    const int n = static_cast<int>(X.size());
    const int p = static_cast<int>(mu.size());
    if (n < p + 1) throw std::invalid_argument("hotelling t2: n >= p+1 required");
    // sample covariance matrix from the data columns
    std::vector<std::vector<VarId>> cols(p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < n; ++k) cols[j].push_back(X[k][j]);
    std::vector<std::vector<VarId>> S(p, std::vector<VarId>(p));
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            Interval hi = Interval::empty(), hj = Interval::empty();
            for (int k = 0; k < n; ++k) {
                hi = hi.hull(m.initial_domain(X[k][i]).hull());
                hj = hj.hull(m.initial_domain(X[k][j]).hull());
            }
            double bound = hi.width() * hj.width() + 1.0;
            VarId sij = m.add_real("_S" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                       std::to_string(m.var_count()),
                                   i == j ? 0.0 : -bound, bound);
            post_statistic(m, StatisticKind::Covariance, cols[i], cols[j], sij);
            S[i][j] = sij;
            S[j][i] = sij; // symmetric by construction
        }
    }
    HotellingVars hv = post_hotelling_core(m, X, mu, S, s);
    m.post_rel(m.nvar(s), RelOp::Ge, 0.0);
    if (spec) {
        double q = quantile(DistSpec::hotelling_t2(p, n - 1), 1.0 - spec->alpha);
        m.post_rel(m.nvar(s), RelOp::Le, q);
    }
    return hv;
}

} // namespace statcp
