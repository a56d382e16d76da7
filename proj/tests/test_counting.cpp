#include "doctest.h"
#include "statcp/counting.hpp"
#include "statcp/solver.hpp"

#include <random>

using namespace statcp;

namespace {

std::vector<long long> tally(const std::vector<long long>& xs, const std::vector<long long>& vals) {
    std::vector<long long> c(vals.size(), 0);
    for (long long x : xs)
        for (size_t j = 0; j < vals.size(); ++j)
            if (x == vals[j]) ++c[j];
    return c;
}

std::vector<long long> bin_tally(const std::vector<double>& xs, const BinStructure& bins) {
    std::vector<long long> c(bins.bins(), 0);
    for (double x : xs) {
        int j = bins.locate(x);
        if (j > 0) ++c[j - 1];
    }
    return c;
}

} // namespace

TEST_CASE("gcc ground examples") {
    {
        Model m;
        std::vector<VarId> xs = {m.add_int("a", 1, 1), m.add_int("b", 1, 1), m.add_int("c", 2, 2)};
        std::vector<VarId> cs = {m.add_int("c1", 0, 3), m.add_int("c2", 0, 3)};
        post_global_cardinality(m, xs, {1, 2}, cs, false);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        CHECK(doms[cs[0]].set == std::vector<long long>{2});
        CHECK(doms[cs[1]].set == std::vector<long long>{1});
    }
    {
        Model m;
        std::vector<VarId> xs = {m.add_int("a", 1, 1), m.add_int("b", 3, 3), m.add_int("c", 3, 3)};
        std::vector<VarId> cs = {m.add_int("c1", 0, 3), m.add_int("c2", 0, 3)};
        post_global_cardinality(m, xs, {1, 2}, cs, false);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        CHECK(doms[cs[0]].set == std::vector<long long>{1});
        CHECK(doms[cs[1]].set == std::vector<long long>{0});
    }
}

TEST_CASE("gcc randomized ground assignments vs direct tally") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        std::vector<long long> xs(8);
        for (auto& x : xs) x = static_cast<long long>(rng() % 6);
        std::vector<long long> vals = {0, 1, 2, 3, 4, 5};
        auto c = tally(xs, vals);
        Model m;
        std::vector<VarId> xv, cv;
        for (size_t i = 0; i < xs.size(); ++i) xv.push_back(m.add_int("x" + std::to_string(i), xs[i], xs[i]));
        for (size_t j = 0; j < vals.size(); ++j) cv.push_back(m.add_int("c" + std::to_string(j), 0, 8));
        post_global_cardinality(m, xv, vals, cv, true);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        for (size_t j = 0; j < vals.size(); ++j) CHECK(doms[cv[j]].set == std::vector<long long>{c[j]});
    }
}

TEST_CASE("bin_counts worked example {7,2,1}") {
    std::vector<long long> data = {1, 1, 5, 3, 1, 2, 1, 1, 3, 1};
    BinStructure bins{{1.0, 3.0, 4.0, 6.0}};
    Model m;
    std::vector<VarId> xs, cs;
    for (size_t i = 0; i < data.size(); ++i) xs.push_back(m.add_int("x" + std::to_string(i), data[i], data[i]));
    for (int j = 0; j < 3; ++j) cs.push_back(m.add_int("c" + std::to_string(j), 0, 10));
    post_bin_counts(m, xs, bins, cs);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[cs[0]].set == std::vector<long long>{7});
    CHECK(doms[cs[1]].set == std::vector<long long>{2});
    CHECK(doms[cs[2]].set == std::vector<long long>{1});
}

TEST_CASE("bin_counts all values at the first boundary") {
    const int n = 6;
    BinStructure bins{{0.0, 1.0, 2.0}};
    Model m;
    std::vector<VarId> xs, cs;
    for (int i = 0; i < n; ++i) xs.push_back(m.add_fixed("x" + std::to_string(i), 0.0));
    for (int j = 0; j < 2; ++j) cs.push_back(m.add_int("c" + std::to_string(j), 0, n));
    post_bin_counts(m, xs, bins, cs);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[cs[0]].set == std::vector<long long>{n});
    CHECK(doms[cs[1]].set == std::vector<long long>{0});
}

TEST_CASE("bin_counts randomized real data vs direct binning") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-2.0, 12.0);
    BinStructure bins{{0.0, 2.5, 5.0, 7.5, 10.0}};
    for (int it = 0; it < 500; ++it) {
        std::vector<double> data(10);
        for (auto& d : data) d = U(rng);
        auto c = bin_tally(data, bins);
        Model m;
        std::vector<VarId> xs, cs;
        for (size_t i = 0; i < data.size(); ++i) xs.push_back(m.add_fixed("x" + std::to_string(i), data[i]));
        for (int j = 0; j < bins.bins(); ++j) cs.push_back(m.add_int("c" + std::to_string(j), 0, 10));
        post_bin_counts(m, xs, bins, cs);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        for (int j = 0; j < bins.bins(); ++j) CHECK(doms[cs[j]].set == std::vector<long long>{c[j]});
    }
}

TEST_CASE("contingency worked example (2x2 with pairs <1,2>,<3,1>,<3,2>)") {
    Model m;
    std::vector<std::pair<VarId, VarId>> pairs = {
        {m.add_fixed("x1", 1.0), m.add_fixed("y1", 2.0)},
        {m.add_fixed("x2", 3.0), m.add_fixed("y2", 1.0)},
        {m.add_fixed("x3", 3.0), m.add_fixed("y3", 2.0)},
    };
    BinStructure rows{{1.0, 3.0, 4.0}}, colsb{{1.0, 2.0, 4.0}};
    ContingencyVars cv = post_contingency(m, pairs, rows, colsb);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    long long expect[2][2] = {{0, 1}, {1, 1}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(doms[cv.cells[i][j]].set == std::vector<long long>{expect[i][j]});
    CHECK(doms[cv.row_marginals[0]].set == std::vector<long long>{1});
    CHECK(doms[cv.row_marginals[1]].set == std::vector<long long>{2});
    CHECK(doms[cv.col_marginals[0]].set == std::vector<long long>{1});
    CHECK(doms[cv.col_marginals[1]].set == std::vector<long long>{2});
}

TEST_CASE("contingency single pair in cell (1,1)") {
    Model m;
    std::vector<std::pair<VarId, VarId>> pairs = {{m.add_fixed("x", 0.5), m.add_fixed("y", 0.5)}};
    BinStructure rows{{0.0, 1.0, 2.0}}, colsb{{0.0, 1.0, 2.0}};
    ContingencyVars cv = post_contingency(m, pairs, rows, colsb);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[cv.cells[0][0]].set == std::vector<long long>{1});
    CHECK(doms[cv.cells[0][1]].set == std::vector<long long>{0});
    CHECK(doms[cv.cells[1][0]].set == std::vector<long long>{0});
    CHECK(doms[cv.row_marginals[0]].set == std::vector<long long>{1});
    CHECK(doms[cv.col_marginals[0]].set == std::vector<long long>{1});
}

TEST_CASE("contingency randomized vs 2-D tally; marginal consistency; permutation invariance") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(-1.0, 5.0);
    BinStructure rows{{0.0, 2.0, 4.0}}, colsb{{0.0, 1.5, 3.0, 4.5}};
    for (int it = 0; it < 200; ++it) {
        std::vector<std::pair<double, double>> data(6);
        for (auto& p : data) p = {U(rng), U(rng)};
        long long cells[2][3] = {};
        for (auto& p : data) {
            int i = rows.locate(p.first), j = colsb.locate(p.second);
            if (i > 0 && j > 0) ++cells[i - 1][j - 1];
        }
        Model m;
        std::vector<std::pair<VarId, VarId>> pairs;
        for (size_t k = 0; k < data.size(); ++k)
            pairs.push_back({m.add_fixed("x" + std::to_string(k), data[k].first),
                             m.add_fixed("y" + std::to_string(k), data[k].second)});
        ContingencyVars cv = post_contingency(m, pairs, rows, colsb);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        long long total = 0, hsum = 0, wsum = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(doms[cv.cells[i][j]].set == std::vector<long long>{cells[i][j]});
                total += cells[i][j];
            }
        for (VarId h : cv.row_marginals) hsum += doms[h].set.front();
        for (VarId w : cv.col_marginals) wsum += doms[w].set.front();
        CHECK(hsum == total);
        CHECK(wsum == total);
        CHECK(total <= static_cast<long long>(data.size()));
        // permutation invariance: shuffled pair list gives the same counts
        if (it % 20 == 0) {
            std::shuffle(data.begin(), data.end(), rng);
            Model m2;
            std::vector<std::pair<VarId, VarId>> p2;
            for (size_t k = 0; k < data.size(); ++k)
                p2.push_back({m2.add_fixed("x" + std::to_string(k), data[k].first),
                              m2.add_fixed("y" + std::to_string(k), data[k].second)});
            ContingencyVars cv2 = post_contingency(m2, p2, rows, colsb);
            m2.finalize();
            auto d2 = m2.initial_domains();
            REQUIRE(propagate(m2, d2) == PropOutcome::Fixpoint);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(d2[cv2.cells[i][j]].set == doms[cv.cells[i][j]].set);
        }
    }
}
