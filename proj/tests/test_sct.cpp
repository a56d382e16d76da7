#include "doctest.h"
#include "statcp/dist.hpp"
#include "statcp/sct.hpp"
#include "statcp/solver.hpp"

#include <random>

using namespace statcp;

namespace {

Model make_ttest_model(const std::vector<double>& data, double mulo, double muhi, VarId& mu,
                       double alpha = 0.05) {
    Model m;
    std::vector<VarId> xs;
    for (size_t i = 0; i < data.size(); ++i)
        xs.push_back(m.add_fixed("x" + std::to_string(i), data[i]));
    mu = m.add_real("mu", mulo, muhi);
    post_t_test(m, xs, mu, TestSpec{alpha, Tail::Eq});
    return m;
}

} // namespace

TEST_CASE("t-test fail-to-reject band on a symmetric two-point sample") {
    // 8 x 3 and 8 x 7: mean 5, sample sd 8/sqrt(15), se = 2/sqrt(15).
    // Band halfwidth = t_15(0.975) * se with t_15(0.975) = 2.131449546 (tables).
    std::vector<double> data;
    for (int i = 0; i < 8; ++i) {
        data.push_back(3.0);
        data.push_back(7.0);
    }
    const double se = 2.0 / std::sqrt(15.0);
    const double hw = 2.131449546 * se;
    VarId mu;
    Model m = make_ttest_model(data, 0.0, 10.0, mu);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[mu].box.lo == doctest::Approx(5.0 - hw).epsilon(1e-4));
    CHECK(doms[mu].box.hi == doctest::Approx(5.0 + hw).epsilon(1e-4));

    // points inside / outside the band
    {
        VarId mu2;
        Model in = make_ttest_model(data, 5.0 + hw - 0.01, 5.0 + hw - 0.01, mu2);
        in.finalize();
        auto d = in.initial_domains();
        CHECK(propagate(in, d) == PropOutcome::Fixpoint);
    }
    {
        VarId mu2;
        Model outm = make_ttest_model(data, 5.0 + hw + 0.01, 5.0 + hw + 0.01, mu2);
        outm.finalize();
        auto d = outm.initial_domains();
        CHECK(propagate(outm, d) == PropOutcome::Fail);
    }

    // translation: shifting the data shifts the band
    std::vector<double> shifted = data;
    for (auto& v : shifted) v += 2.5;
    VarId mu3;
    Model ms = make_ttest_model(shifted, 0.0, 12.0, mu3);
    ms.finalize();
    auto ds = ms.initial_domains();
    REQUIRE(propagate(ms, ds) == PropOutcome::Fixpoint);
    CHECK(ds[mu3].box.lo == doctest::Approx(7.5 - hw).epsilon(1e-4));
    CHECK(ds[mu3].box.hi == doctest::Approx(7.5 + hw).epsilon(1e-4));
}

TEST_CASE("t-test with zero sample deviation collapses the band to the mean") {
    std::vector<double> data(5, 4.0);
    {
        VarId mu;
        Model m = make_ttest_model(data, 4.0, 4.0, mu);
        m.finalize();
        auto d = m.initial_domains();
        CHECK(propagate(m, d) == PropOutcome::Fixpoint);
    }
    {
        VarId mu;
        Model m = make_ttest_model(data, 4.01, 4.01, mu);
        m.finalize();
        auto d = m.initial_domains();
        CHECK(propagate(m, d) == PropOutcome::Fail);
    }
}

TEST_CASE("goodness-of-fit statistic on the 24-point worked examples") {
    auto run = [](const std::vector<long long>& data) {
        Model m;
        std::vector<VarId> xs, ts;
        for (size_t i = 0; i < data.size(); ++i)
            xs.push_back(m.add_int("x" + std::to_string(i), data[i], data[i]));
        for (double t : {2.0, 4.0, 10.0, 4.0, 2.0, 2.0})
            ts.push_back(m.add_fixed("t" + std::to_string(ts.size()), t));
        VarId s = m.add_real("s", 0.0, 1000.0);
        post_chi2_gof(m, xs, BinStructure{{0, 5, 10, 15, 20, 25, 30}}, ts, s);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        Interval h = doms[s].hull();
        CHECK(h.width() <= 1e-6);
        return h.mid();
    };
    CHECK(run({13, 7, 6, 12, 10, 14, 8, 19, 5, 3, 20, 12, 18, 11, 11, 17, 12, 2, 12, 28, 6, 25, 21, 1}) ==
          doctest::Approx(1.10).epsilon(1e-2));
    CHECK(run({26, 9, 6, 12, 16, 10, 8, 28, 5, 21, 0, 12, 1, 12, 11, 10, 17, 19, 24, 11, 16, 19, 13, 11}) ==
          doctest::Approx(0.35).epsilon(1e-2));
}

TEST_CASE("independence statistic on a diagonal 2x2 table") {
    // 10 pairs in cell (1,1), 10 in cell (2,2): E = 5 everywhere, s = 20.
    Model m;
    std::vector<std::pair<VarId, VarId>> pairs;
    for (int k = 0; k < 10; ++k)
        pairs.push_back({m.add_fixed("x", 0.5), m.add_fixed("y", 0.5)});
    for (int k = 0; k < 10; ++k)
        pairs.push_back({m.add_fixed("x", 1.5), m.add_fixed("y", 1.5)});
    BinStructure b{{0.0, 1.0, 2.0}};
    VarId s = m.add_real("s", 0.0, 1000.0);
    post_chi2_independence(m, pairs, b, b, s);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[s].hull().mid() == doctest::Approx(20.0).epsilon(1e-6));
}

TEST_CASE("independence test form rejects a maximally dependent table") {
    Model m;
    std::vector<std::pair<VarId, VarId>> pairs;
    for (int k = 0; k < 10; ++k)
        pairs.push_back({m.add_fixed("x", 0.5), m.add_fixed("y", 0.5)});
    for (int k = 0; k < 10; ++k)
        pairs.push_back({m.add_fixed("x", 1.5), m.add_fixed("y", 1.5)});
    BinStructure b{{0.0, 1.0, 2.0}};
    VarId s = m.add_real("s", 0.0, 1000.0);
    post_chi2_independence(m, pairs, b, b, s, TestSpec{0.05, Tail::Eq});
    m.finalize();
    auto doms = m.initial_domains();
    CHECK(propagate(m, doms) == PropOutcome::Fail); // s = 20 > chi2_1(0.95) = 3.84
}

TEST_CASE("independence statistic vs direct formula on random ground tables") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> U(-0.5, 4.5);
    BinStructure rows{{0.0, 2.0, 4.0}}, colsb{{0.0, 1.5, 3.0, 4.5}};
    for (int it = 0; it < 200; ++it) {
        int n = 6 + static_cast<int>(rng() % 10);
        std::vector<std::pair<double, double>> data(n);
        for (auto& p : data) p = {U(rng), U(rng)};
        long long cells[2][3] = {}, hmar[2] = {}, wmar[3] = {};
        for (auto& p : data) {
            int i = rows.locate(p.first), j = colsb.locate(p.second);
            if (i > 0 && j > 0) {
                ++cells[i - 1][j - 1];
                ++hmar[i - 1];
                ++wmar[j - 1];
            }
        }
        double ground = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                double E = static_cast<double>(hmar[i]) * wmar[j] / n;
                if (E > 0.0) ground += (cells[i][j] - E) * (cells[i][j] - E) / E;
            }
        Model m;
        std::vector<std::pair<VarId, VarId>> pairs;
        for (int k = 0; k < n; ++k)
            pairs.push_back({m.add_fixed("x" + std::to_string(k), data[k].first),
                             m.add_fixed("y" + std::to_string(k), data[k].second)});
        VarId s = m.add_real("s", 0.0, 1e6);
        post_chi2_independence(m, pairs, rows, colsb, s);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        CHECK(doms[s].hull().mid() == doctest::Approx(ground).epsilon(1e-6));
    }
}

TEST_CASE("variance ratio pins to 1 for identical samples and 4 under halving") {
    std::vector<double> base = {1.0, 4.0, 2.0, 8.0, 5.0, 7.0};
    auto run = [&](double scale2) {
        Model m;
        std::vector<VarId> x1, x2;
        for (size_t i = 0; i < base.size(); ++i) {
            x1.push_back(m.add_fixed("a" + std::to_string(i), base[i]));
            x2.push_back(m.add_fixed("b" + std::to_string(i), base[i] * scale2));
        }
        VarId s = m.add_real("s", 0.0, 1000.0);
        post_f_ratio(m, x1, x2, s);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        return doms[s].hull().mid();
    };
    CHECK(run(1.0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(run(0.5) == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("quadratic-form statistic vanishes at the sample mean") {
    std::vector<std::vector<double>> data = {
        {1.0, 2.0}, {3.0, 5.0}, {2.0, 3.0}, {4.0, 4.0}, {0.0, 1.0}};
    double mx = 0.0, my = 0.0;
    for (auto& r : data) {
        mx += r[0];
        my += r[1];
    }
    mx /= data.size();
    my /= data.size();
    Model m;
    std::vector<std::vector<VarId>> X;
    for (size_t k = 0; k < data.size(); ++k)
        X.push_back({m.add_fixed("x" + std::to_string(k), data[k][0]),
                     m.add_fixed("y" + std::to_string(k), data[k][1])});
    std::vector<VarId> mu = {m.add_fixed("mu1", mx), m.add_fixed("mu2", my)};
    VarId s = m.add_real("s", 0.0, 1000.0);
    post_hotelling_t2(m, X, mu, s);
    m.finalize();
    for (auto& row : X) (void)row;
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[s].hull().hi <= 1e-4);
}

TEST_CASE("p=1 quadratic form equals the squared t statistic") {
    std::vector<double> data = {2.0, 5.0, 1.0, 7.0, 4.0};
    const double mu0 = 2.5;
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= data.size();
    double var = 0.0;
    for (double v : data) var += (v - mean) * (v - mean);
    var /= (data.size() - 1);
    double t2 = data.size() * (mean - mu0) * (mean - mu0) / var;
    Model m;
    std::vector<std::vector<VarId>> X;
    for (size_t k = 0; k < data.size(); ++k)
        X.push_back({m.add_fixed("x" + std::to_string(k), data[k])});
    std::vector<VarId> mu = {m.add_fixed("mu", mu0)};
    VarId s = m.add_real("s", 0.0, 1000.0);
    post_hotelling_t2(m, X, mu, s);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[s].hull().mid() == doctest::Approx(t2).epsilon(1e-6));
}

TEST_CASE("known-covariance quadratic form on an identity covariance") {
    // With Sigma = I, s = n * |xbar - mu|^2.
    std::vector<std::vector<double>> data = {{1.0, 0.0}, {3.0, 2.0}, {2.0, 1.0}};
    Model m;
    std::vector<std::vector<VarId>> X;
    for (size_t k = 0; k < data.size(); ++k)
        X.push_back({m.add_fixed("x" + std::to_string(k), data[k][0]),
                     m.add_fixed("y" + std::to_string(k), data[k][1])});
    std::vector<VarId> mu = {m.add_fixed("mu1", 1.0), m.add_fixed("mu2", 0.5)};
    std::vector<std::vector<VarId>> Sigma = {
        {m.add_fixed("s11", 1.0), m.add_fixed("s12", 0.0)},
        {m.add_fixed("s21", 0.0), m.add_fixed("s22", 1.0)}};
    VarId s = m.add_real("s", 0.0, 1000.0);
    post_hotelling_chi2(m, X, mu, Sigma, s);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    // xbar = (2, 1): s = 3 * (1 + 0.25) = 3.75
    CHECK(doms[s].hull().mid() == doctest::Approx(3.75).epsilon(1e-6));
}

TEST_CASE("argument validation") {
    Model m;
    VarId x = m.add_fixed("x", 1.0);
    VarId mu = m.add_real("mu", 0, 1);
    CHECK_THROWS(post_t_test(m, {x}, mu, TestSpec{0.05, Tail::Eq}));
    VarId y = m.add_fixed("y", 2.0);
    CHECK_THROWS(post_t_test(m, {x, y}, mu, TestSpec{1.5, Tail::Eq}));
    CHECK_THROWS(post_t_test(m, {x, y}, mu, TestSpec{0.05, Tail::Ne}));
}
