#include "statcp/models.hpp"

#include "statcp/dist.hpp"
#include "statcp/matrixinv.hpp"
#include "statcp/sct.hpp"
#include "statcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace statcp {

VarId BuiltModel::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw std::invalid_argument("unknown parameter: " + name);
    return it->second;
}

namespace {

constexpr double kStatMax = 1e6;

Interval bound_of(const ModelParams& p, const std::string& name, double lo, double hi) {
    auto it = p.bounds.find(name);
    if (it != p.bounds.end()) {
        if (!(it->second.first <= it->second.second))
            throw std::invalid_argument("bad bounds for " + name);
        return Interval(it->second.first, it->second.second);
    }
    return Interval(lo, hi);
}

void check_alpha(const ModelParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw std::invalid_argument("alpha out of (0,1)");
}

// Posts extra equalities, sets the objective (default: minimize the
// statistic) and finalizes.
void finish(BuiltModel& bm, const ModelParams& params) {
    Model& m = bm.model;
    for (const auto& [x, y] : params.equalities)
        m.post_rel(m.nsum({m.nvar(bm.param(x)), m.nvar(bm.param(y))}, {1.0, -1.0}), RelOp::Eq);
    if (params.objective)
        m.set_objective(params.objective->minimize, bm.param(params.objective->param));
    else if (bm.s >= 0)
        m.set_objective(true, bm.s);
    m.finalize();
}

// Phi(b / sigma) as a monotone function of sigma (standard normal CDF);
// constant 1/2 at b = 0 is handled by the callers.
FnDef normal_boundary_fn(double b, double slo, double shi) {
    DistSpec n01 = DistSpec::normal(0.0, 1.0);
    FnDef f;
    f.name = "phi_ratio";
    f.f = [b, n01](double s) { return cdf(n01, b / s); };
    f.inv = [b, n01](double y) {
        y = std::clamp(y, 1e-12, 1.0 - 1e-12);
        double z = quantile(n01, y);
        if ((b > 0.0 && z <= 0.0) || (b < 0.0 && z >= 0.0))
            return std::numeric_limits<double>::quiet_NaN(); // sigma -> infinity side
        return b / z;
    };
    f.increasing = b < 0.0; // b/sigma moves toward 0 as sigma grows
    f.domain = Interval(slo, shi);
    f.range = b > 0.0 ? Interval(0.5, 1.0) : Interval(0.0, 0.5);
    return f;
}

// P(X < b) for Poisson(lambda) as a function of the rate; strictly
// decreasing in lambda.
FnDef poisson_boundary_fn(int b, double llo, double lhi) {
    FnDef f;
    f.name = "pois_below";
    f.f = [b](double lam) { return poisson_below(b, lam); };
    f.inv = [b, llo, lhi](double y) { return poisson_below_inv(b, y, llo, lhi); };
    f.increasing = false;
    f.domain = Interval(llo, lhi);
    f.range = Interval(0.0, 1.0);
    return f;
}

// e_t = v_t - a*t - b for t = 1..T; returns the error variables.
std::vector<VarId> post_linear_errors(Model& m, const std::vector<double>& v, VarId a, VarId b) {
    const Interval ad = m.initial_domain(a).hull(), bd = m.initial_domain(b).hull();
    std::vector<VarId> errs;
    for (size_t i = 0; i < v.size(); ++i) {
        double t = static_cast<double>(i + 1);
        double lo = v[i] - ad.hi * t - bd.hi, hi = v[i] - ad.lo * t - bd.lo;
        VarId e = m.add_real("e" + std::to_string(i + 1), lo, hi);
        m.post_var_eq(e, m.nsum({m.nvar(a), m.nvar(b)}, {-t, -1.0}, v[i]));
        errs.push_back(e);
    }
    return errs;
}

bool exactly_affine(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    double a = v[1] - v[0], b = v[0] - a;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != a * static_cast<double>(i + 1) + b) return false;
    return true;
}

} // namespace

BuiltModel build_linear_fit(const Dataset& data, const ModelParams& params) {
    check_alpha(params);
    const auto& v = data.variates;
    const int T = static_cast<int>(v.size());
    if (T < 2) throw std::invalid_argument("linear fit needs T >= 2");
    if (!params.bins) throw std::invalid_argument("linear fit needs a bin structure");
    params.bins->validate();

    BuiltModel bm;
    Model& m = bm.model;
    Interval ab = bound_of(params, "a", -10, 10), bb = bound_of(params, "b", -50, 50),
             sb = bound_of(params, "sigma", 0.1, 50);
    if (sb.lo <= 0.0) throw std::invalid_argument("sigma lower bound must be positive");
    VarId a = m.add_real("a", ab.lo, ab.hi), b = m.add_real("b", bb.lo, bb.hi);
    VarId sigma = m.add_real("sigma", sb.lo, sb.hi);
    m.mark_search_var(a);
    m.mark_search_var(b);
    m.mark_search_var(sigma);
    std::vector<VarId> errs = post_linear_errors(m, v, a, b);

    // tau_i = T * (Phi(b_{i+1}/sigma) - Phi(b_i/sigma))
    const auto& bounds = params.bins->boundaries;
    std::vector<int> cdfNode(bounds.size());
    for (size_t i = 0; i < bounds.size(); ++i)
        cdfNode[i] = bounds[i] == 0.0
                         ? m.nconst(0.5)
                         : m.nfn(normal_boundary_fn(bounds[i], sb.lo, sb.hi), m.nvar(sigma));
    std::vector<VarId> taus;
    for (int i = 0; i < params.bins->bins(); ++i) {
        VarId tau = m.add_real("tau" + std::to_string(i + 1), 0.0, static_cast<double>(T));
        m.post_var_eq(tau, m.nsum({cdfNode[i + 1], cdfNode[i]},
                                  {static_cast<double>(T), -static_cast<double>(T)}));
        taus.push_back(tau);
    }

    VarId s = m.add_real("s", 0.0, kStatMax);
    post_chi2_gof(m, errs, *params.bins, taus, s, TestSpec{params.alpha});
    bm.s = s;
    bm.params = {{"a", a}, {"b", b}, {"sigma", sigma}, {"s", s}};
    finish(bm, params);
    return bm;
}

BuiltModel build_linear_fit_appendix(const Dataset& data, const ModelParams& params,
                                     LinearVariant variant) {
    check_alpha(params);
    const auto& v = data.variates;
    const int T = static_cast<int>(v.size());
    if (T < 2) throw std::invalid_argument("linear fit needs T >= 2");

    BuiltModel bm;
    Model& m = bm.model;
    Interval ab = bound_of(params, "a", -10, 10), bb = bound_of(params, "b", -50, 50);
    VarId a = m.add_real("a", ab.lo, ab.hi), b = m.add_real("b", bb.lo, bb.hi);
    m.mark_search_var(a);
    m.mark_search_var(b);
    std::vector<VarId> errs = post_linear_errors(m, v, a, b);
    VarId s = m.add_real("s", 0.0, kStatMax);

    if (variant == LinearVariant::KnownSigma) {
        if (!(params.sigma > 0.0))
            throw std::invalid_argument("known-sigma variant needs params.sigma > 0");
        int df = T;
        if (params.df_policy == DfPolicy::Fitted) {
            if (T <= 3) throw std::invalid_argument("fitted df policy needs T > 3");
            df = T - 3;
        }
        // s = sum e_t^2 / sigma^2, a quadratic-form statistic with known
        // diagonal covariance
        std::vector<int> kids;
        std::vector<double> coef;
        const double w = 1.0 / (params.sigma * params.sigma);
        for (VarId e : errs) {
            kids.push_back(m.nsqr(m.nvar(e)));
            coef.push_back(w);
        }
        m.post_var_eq(s, m.nsum(std::move(kids), std::move(coef)));
        double q = quantile(DistSpec::chi_squared(df), 1.0 - params.alpha);
        m.post_rel(m.nvar(s), RelOp::Le, q);
    } else {
        if (exactly_affine(v))
            throw std::invalid_argument(
                "data lies exactly on a line: sample error variance is degenerate");
        // univariate t-squared on the errors against mean zero
        std::vector<std::vector<VarId>> X;
        for (VarId e : errs) X.push_back({e});
        std::vector<VarId> mu = {m.add_fixed("mu0", 0.0)};
        post_hotelling_t2(m, X, mu, s, TestSpec{params.alpha});
    }
    bm.s = s;
    bm.params = {{"a", a}, {"b", b}, {"s", s}};
    finish(bm, params);
    return bm;
}

BuiltModel build_ar1(const Dataset& data, const ModelParams& params) {
    check_alpha(params);
    const auto& x = data.series;
    const int T = static_cast<int>(x.size());
    if (T < 2) throw std::invalid_argument("ar1 needs T >= 2");
    if (!params.bins) throw std::invalid_argument("ar1 needs a bin structure");
    params.bins->validate();
    for (double bd : params.bins->boundaries)
        if (bd < 0.0 || bd != std::floor(bd))
            throw std::invalid_argument("ar1 bin boundaries must be nonnegative integers");

    BuiltModel bm;
    Model& m = bm.model;
    Interval cb = bound_of(params, "c", 0, 20), beb = bound_of(params, "beta", 0, 1),
             lb = bound_of(params, "lambda", 0.1, 30);
    if (lb.lo <= 0.0) throw std::invalid_argument("lambda lower bound must be positive");
    VarId c = m.add_real("c", cb.lo, cb.hi), beta = m.add_real("beta", beb.lo, beb.hi);
    VarId lambda = m.add_real("lambda", lb.lo, lb.hi);
    m.mark_search_var(c);
    m.mark_search_var(beta);
    m.mark_search_var(lambda);

    // e_t = x_t - c - beta * x_{t-1}, with x_0 = 0
    std::vector<VarId> errs;
    for (int t = 1; t <= T; ++t) {
        double prev = t == 1 ? 0.0 : x[t - 2];
        double lo = x[t - 1] - cb.hi - std::max(beb.lo * prev, beb.hi * prev);
        double hi = x[t - 1] - cb.lo - std::min(beb.lo * prev, beb.hi * prev);
        VarId e = m.add_real("e" + std::to_string(t), lo, hi);
        m.post_var_eq(e, m.nsum({m.nvar(c), m.nvar(beta)}, {-1.0, -prev}, x[t - 1]));
        errs.push_back(e);
    }

    // tau_i = T * (P(X < b_{i+1}) - P(X < b_i)) under Poisson(lambda); the
    // left-limit convention gives bin [k, k+1) exactly pmf(k).
    const auto& bounds = params.bins->boundaries;
    std::vector<int> cdfNode(bounds.size());
    for (size_t i = 0; i < bounds.size(); ++i) {
        int bd = static_cast<int>(std::llround(bounds[i]));
        cdfNode[i] = bd == 0 ? m.nconst(0.0)
                             : m.nfn(poisson_boundary_fn(bd, lb.lo, lb.hi), m.nvar(lambda));
    }
    std::vector<VarId> taus;
    for (int i = 0; i < params.bins->bins(); ++i) {
        VarId tau = m.add_real("tau" + std::to_string(i + 1), 0.0, static_cast<double>(T));
        m.post_var_eq(tau, m.nsum({cdfNode[i + 1], cdfNode[i]},
                                  {static_cast<double>(T), -static_cast<double>(T)}));
        taus.push_back(tau);
    }

    VarId s = m.add_real("s", 0.0, kStatMax);
    post_chi2_gof(m, errs, *params.bins, taus, s, TestSpec{params.alpha});
    bm.s = s;
    bm.params = {{"c", c}, {"beta", beta}, {"lambda", lambda}, {"s", s}};
    finish(bm, params);
    return bm;
}

BuiltModel build_ar1_independence(const Dataset& data1, const Dataset& data2,
                                  const ModelParams& params) {
    check_alpha(params);
    const auto& x1 = data1.series;
    const auto& x2 = data2.series;
    if (x1.size() != x2.size() || x1.size() < 2)
        throw std::invalid_argument("two equally long series with T >= 2 required");
    if (!params.bins || !params.bins2)
        throw std::invalid_argument("independence model needs two bin structures");
    params.bins->validate();
    params.bins2->validate();
    const int T = static_cast<int>(x1.size());

    BuiltModel bm;
    Model& m = bm.model;
    auto make_process = [&](const std::vector<double>& x, const std::string& suffix) {
        Interval cb = bound_of(params, "c" + suffix, 0, 20);
        Interval beb = bound_of(params, "beta" + suffix, 0, 1);
        VarId c = m.add_real("c" + suffix, cb.lo, cb.hi);
        VarId beta = m.add_real("beta" + suffix, beb.lo, beb.hi);
        m.mark_search_var(c);
        m.mark_search_var(beta);
        std::vector<VarId> errs;
        for (int t = 1; t <= T; ++t) {
            double prev = t == 1 ? 0.0 : x[t - 2];
            double lo = x[t - 1] - cb.hi - std::max(beb.lo * prev, beb.hi * prev);
            double hi = x[t - 1] - cb.lo - std::min(beb.lo * prev, beb.hi * prev);
            VarId e = m.add_real("e" + suffix + "_" + std::to_string(t), lo, hi);
            m.post_var_eq(e, m.nsum({m.nvar(c), m.nvar(beta)}, {-1.0, -prev}, x[t - 1]));
            errs.push_back(e);
        }
        return std::make_tuple(c, beta, errs);
    };
    auto [c1, beta1, e1] = make_process(x1, "1");
    auto [c2, beta2, e2] = make_process(x2, "2");

    std::vector<std::pair<VarId, VarId>> pairs;
    for (int t = 0; t < T; ++t) pairs.push_back({e1[t], e2[t]});
    VarId s = m.add_real("s", 0.0, kStatMax);
    post_chi2_independence(m, pairs, *params.bins, *params.bins2, s, TestSpec{params.alpha});
    bm.s = s;
    bm.params = {{"c1", c1}, {"beta1", beta1}, {"c2", c2}, {"beta2", beta2}, {"s", s}};
    finish(bm, params);
    return bm;
}

BuiltModel build_anova(const Dataset& data, const ModelParams& params) {
    check_alpha(params);
    const auto& groups = data.groups;
    const int mg = static_cast<int>(groups.size());
    if (mg < 2) throw std::invalid_argument("anova needs >= 2 groups");
    const int n = static_cast<int>(groups[0].size());
    if (n < 2) throw std::invalid_argument("anova needs >= 2 variates per group");
    bool any_spread = false;
    for (const auto& g : groups) {
        if (static_cast<int>(g.size()) != n)
            throw std::invalid_argument("anova needs equally sized groups");
        for (double v : g) any_spread = any_spread || v != g[0];
    }
    if (!any_spread)
        throw std::invalid_argument("all groups constant: within-group variance is degenerate");

    BuiltModel bm;
    Model& m = bm.model;
    std::vector<std::vector<VarId>> obs(mg);
    for (int i = 0; i < mg; ++i)
        for (int j = 0; j < n; ++j)
            obs[i].push_back(m.add_fixed("o" + std::to_string(i) + "_" + std::to_string(j),
                                         groups[i][j]));

    std::vector<VarId> means, withins;
    for (int i = 0; i < mg; ++i) {
        means.push_back(make_mean_var(m, obs[i], "ybar" + std::to_string(i + 1)));
        withins.push_back(make_variance_var(m, obs[i], "sw" + std::to_string(i + 1)));
    }
    VarId svar = make_variance_var(m, means, "s_means");
    Interval svd = m.initial_domain(svar).hull();
    VarId sbar_b = m.add_real("sb", 0.0, n * svd.hi);
    m.post_var_eq(sbar_b, m.nsum({m.nvar(svar)}, {static_cast<double>(n)}));
    VarId sbar_w = make_mean_var(m, withins, "sw");
    bm.params["sb"] = sbar_b;
    bm.params["sw"] = sbar_w;

    double fq = quantile(DistSpec::fisher_f(mg - 1, mg * (n - 1)), 1.0 - params.alpha);
    m.post_rel(m.nsum({m.nvar(sbar_b), m.nvar(sbar_w)}, {1.0, -fq}), RelOp::Le);

    VarId f = m.add_real("f", 0.0, kStatMax);
    m.post_rel(m.nsum({m.nmul(m.nvar(f), m.nvar(sbar_w)), m.nvar(sbar_b)}, {1.0, -1.0}),
               RelOp::Eq);
    bm.params["f"] = f;
    finish(bm, params);
    return bm;
}

BuiltModel build_multivariate_mean(const Dataset& data, const ModelParams& params) {
    check_alpha(params);
    const auto& groups = data.groups;
    const int p = static_cast<int>(groups.size());
    if (p < 1 || p > kMatrixNMax) throw std::invalid_argument("needs 1..4 groups");
    const int n = static_cast<int>(groups[0].size());
    if (n < p + 1) throw std::invalid_argument("needs n >= p+1 variates per group");
    for (const auto& g : groups)
        if (static_cast<int>(g.size()) != n)
            throw std::invalid_argument("needs equally sized groups");

    BuiltModel bm;
    Model& m = bm.model;
    std::vector<VarId> mu;
    for (int i = 0; i < p; ++i) {
        auto [mnIt, mxIt] = std::minmax_element(groups[i].begin(), groups[i].end());
        double r = *mxIt - *mnIt;
        if (r == 0.0) r = 1.0;
        Interval mb = bound_of(params, "mu" + std::to_string(i + 1), *mnIt - 3 * r, *mxIt + 3 * r);
        mu.push_back(m.add_real("mu" + std::to_string(i + 1), mb.lo, mb.hi));
        m.mark_search_var(mu.back());
        bm.params["mu" + std::to_string(i + 1)] = mu.back();
    }
    std::vector<std::vector<VarId>> X(n, std::vector<VarId>(p));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < p; ++i)
            X[j][i] = m.add_fixed("o" + std::to_string(i) + "_" + std::to_string(j), groups[i][j]);

    VarId s = m.add_real("s", 0.0, kStatMax);
    post_hotelling_t2(m, X, mu, s, TestSpec{params.alpha});
    bm.s = s;
    bm.params["s"] = s;
    finish(bm, params);
    return bm;
}

BuiltModel build_multinomial_ci(const Dataset& data, const ModelParams& params,
                                MultinomialVariant variant) {
    check_alpha(params);
    const auto& rows = data.onehot;
    const int N = static_cast<int>(rows.size());
    if (N < 2) throw std::invalid_argument("needs N >= 2 observations");
    const int k = static_cast<int>(rows[0].size());
    if (k < 2 || k - 1 > kMatrixNMax) throw std::invalid_argument("needs 2..5 categories");
    std::vector<long long> counts(k, 0);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != k) throw std::invalid_argument("ragged one-hot rows");
        int sum = 0;
        for (int j = 0; j < k; ++j) {
            if (r[j] != 0 && r[j] != 1) throw std::invalid_argument("one-hot entries must be 0/1");
            sum += r[j];
            counts[j] += r[j];
        }
        if (sum != 1) throw std::invalid_argument("each row must select exactly one category");
    }
    if (variant == MultinomialVariant::T2Sample)
        for (int j = 0; j + 1 < k; ++j)
            if (counts[j] == 0 || counts[j] == N)
                throw std::invalid_argument("category " + std::to_string(j + 1) +
                                            " has a constant indicator column; the sample "
                                            "covariance matrix is singular");

    BuiltModel bm;
    Model& m = bm.model;
    const int pdim = k - 1; // last category column dropped
    std::vector<VarId> pv;
    for (int j = 0; j < k; ++j) {
        Interval pb = bound_of(params, "p" + std::to_string(j + 1), 1e-6, 1.0 - 1e-6);
        pv.push_back(m.add_real("p" + std::to_string(j + 1), pb.lo, pb.hi));
        bm.params["p" + std::to_string(j + 1)] = pv.back();
        if (j < pdim) m.mark_search_var(pv.back());
    }
    {
        std::vector<int> kids;
        for (VarId v : pv) kids.push_back(m.nvar(v));
        m.post_rel(m.nsum(std::move(kids), std::vector<double>(k, 1.0)), RelOp::Eq, 1.0);
    }
    std::vector<std::vector<VarId>> X(N, std::vector<VarId>(pdim));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < pdim; ++j)
            X[i][j] = m.add_fixed("x" + std::to_string(i) + "_" + std::to_string(j),
                                  static_cast<double>(rows[i][j]));
    std::vector<VarId> mu(pv.begin(), pv.begin() + pdim);

    VarId s = m.add_real("s", 0.0, kStatMax);
    if (variant == MultinomialVariant::Chi2Known) {
        // Sigma_jj = p_j (1 - p_j), Sigma_ij = -p_i p_j
        std::vector<std::vector<VarId>> Sigma(pdim, std::vector<VarId>(pdim));
        for (int i = 0; i < pdim; ++i) {
            for (int j = i; j < pdim; ++j) {
                VarId sij = m.add_real("sig" + std::to_string(i) + "_" + std::to_string(j),
                                       i == j ? 0.0 : -0.25, 0.25);
                if (i == j)
                    m.post_var_eq(sij, m.nsum({m.nvar(pv[i]), m.nsqr(m.nvar(pv[i]))}, {1.0, -1.0}));
                else
                    m.post_var_eq(sij, m.nsum({m.nmul(m.nvar(pv[i]), m.nvar(pv[j]))}, {-1.0}));
                Sigma[i][j] = sij;
                Sigma[j][i] = sij;
            }
        }
        post_hotelling_chi2(m, X, mu, Sigma, s, TestSpec{params.alpha});
    } else {
        post_hotelling_t2(m, X, mu, s, TestSpec{params.alpha});
    }
    bm.s = s;
    bm.params["s"] = s;
    finish(bm, params);
    return bm;
}

std::vector<Interval> quesenberry_hurst_ci(const std::vector<long long>& counts, double alpha) {
    const int k = static_cast<int>(counts.size());
    if (k < 2) throw std::invalid_argument("needs >= 2 categories");
    long long N = 0;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("negative count");
        N += c;
    }
    if (N <= 0) throw std::invalid_argument("empty sample");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha out of (0,1)");
    const double Q = quantile(DistSpec::chi_squared(k - 1), 1.0 - alpha);
    std::vector<Interval> out;
    for (long long c : counts) {
        double A = static_cast<double>(N) + Q;
        double B = -(2.0 * c + Q);
        double C = static_cast<double>(c) * c / N;
        double disc = std::max(B * B - 4.0 * A * C, 0.0);
        double lo = (-B - std::sqrt(disc)) / (2.0 * A);
        double hi = (-B + std::sqrt(disc)) / (2.0 * A);
        out.push_back(Interval(std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)));
    }
    return out;
}

} // namespace statcp
