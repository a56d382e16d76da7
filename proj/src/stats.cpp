#include "statcp/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace statcp {

namespace {

Interval hull_of(const Model& m, const std::vector<VarId>& X) {
    Interval h = Interval::empty();
    for (VarId v : X) h = h.hull(m.initial_domain(v).hull());
    return h;
}

int centered_node(Model& m, VarId x, VarId mu) { return m.nsum({m.nvar(x), m.nvar(mu)}, {1.0, -1.0}); }

} // namespace

VarId make_mean_var(Model& m, const std::vector<VarId>& X, const std::string& name) {
    Interval h = hull_of(m, X);
    VarId mu = m.add_real(name, h.lo, h.hi);
    std::vector<int> kids;
    std::vector<double> coef;
    for (VarId x : X) {
        kids.push_back(m.nvar(x));
        coef.push_back(1.0);
    }
    kids.push_back(m.nvar(mu));
    coef.push_back(-static_cast<double>(X.size()));
    m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
    return mu;
}

VarId make_variance_var(Model& m, const std::vector<VarId>& X, const std::string& name) {
    const int n = static_cast<int>(X.size());
    if (n < 2) throw std::invalid_argument("variance needs n >= 2");
    Interval h = hull_of(m, X);
    double w = h.width();
    VarId v = m.add_real(name, 0.0, w * w + 1.0);
    VarId mu = make_mean_var(m, X, name + "_mu");
    std::vector<int> kids;
    std::vector<double> coef;
    for (VarId x : X) {
        kids.push_back(m.nsqr(centered_node(m, x, mu)));
        coef.push_back(1.0);
    }
    kids.push_back(m.nvar(v));
    coef.push_back(-static_cast<double>(n - 1));
    m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
    return v;
}

void post_statistic(Model& m, StatisticKind kind, const std::vector<VarId>& X, VarId r) {
    const int n = static_cast<int>(X.size());
    switch (kind) {
    case StatisticKind::Mean: {
        if (n < 1) throw std::invalid_argument("mean needs n >= 1");
        std::vector<int> kids;
        std::vector<double> coef;
        for (VarId x : X) {
            kids.push_back(m.nvar(x));
            coef.push_back(1.0);
        }
        kids.push_back(m.nvar(r));
        coef.push_back(-static_cast<double>(n));
        m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
        break;
    }
    case StatisticKind::Variance: {
        VarId v = make_variance_var(m, X, "_var" + std::to_string(m.var_count()));
        m.post_rel(m.nsum({m.nvar(v), m.nvar(r)}, {1.0, -1.0}), RelOp::Eq, 0.0);
        break;
    }
    case StatisticKind::StdDev: {
        VarId v = make_variance_var(m, X, "_var" + std::to_string(m.var_count()));
        m.post_rel(m.nvar(r), RelOp::Ge, 0.0);
        m.post_rel(m.nsum({m.nsqr(m.nvar(r)), m.nvar(v)}, {1.0, -1.0}), RelOp::Eq, 0.0);
        break;
    }
    case StatisticKind::StdErr: {
        if (n < 2) throw std::invalid_argument("stderr needs n >= 2");
        Interval h = hull_of(m, X);
        double w = h.width();
        VarId sd = m.add_real("_sd" + std::to_string(m.var_count()), 0.0, w + 1.0);
        post_statistic(m, StatisticKind::StdDev, X, sd);
        // r * sqrt(n) = sd
        m.post_rel(m.nsum({m.nvar(r), m.nvar(sd)}, {std::sqrt(static_cast<double>(n)), -1.0}),
                   RelOp::Eq, 0.0);
        break;
    }
    case StatisticKind::Covariance:
        throw std::invalid_argument("covariance needs two variable lists");
    }
}

void post_statistic(Model& m, StatisticKind kind, const std::vector<VarId>& X,
                    const std::vector<VarId>& Y, VarId r) {
    if (kind != StatisticKind::Covariance) {
        post_statistic(m, kind, X, r);
        return;
    }
    const int n = static_cast<int>(X.size());
    if (n < 2 || Y.size() != X.size())
        throw std::invalid_argument("covariance needs two equal lists with n >= 2");
    VarId mx = make_mean_var(m, X, "_mx" + std::to_string(m.var_count()));
    VarId my = make_mean_var(m, Y, "_my" + std::to_string(m.var_count()));
    std::vector<int> kids;
    std::vector<double> coef;
    for (int i = 0; i < n; ++i) {
        kids.push_back(m.nmul(centered_node(m, X[i], mx), centered_node(m, Y[i], my)));
        coef.push_back(1.0);
    }
    kids.push_back(m.nvar(r));
    coef.push_back(-static_cast<double>(n - 1));
    m.post_rel(m.nsum(std::move(kids), std::move(coef)), RelOp::Eq, 0.0);
}

} // namespace statcp
