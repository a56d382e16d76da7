#include "doctest.h"
#include "statcp/solver.hpp"

#include <random>

using namespace statcp;

TEST_CASE("linear equality bound propagation") {
    Model m;
    VarId x = m.add_real("x", 0, 10), y = m.add_real("y", 0, 10);
    m.post_rel(m.nsum({m.nvar(x), m.nvar(y)}, {1.0, 1.0}), RelOp::Eq, 3.0);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[x].box.lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(doms[x].box.hi == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(doms[y].box.hi == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("finite domain emptied fails") {
    Model m;
    VarId x = m.add_int("x", 1, 3);
    m.post_rel(m.nvar(x), RelOp::Ge, 4.0);
    m.finalize();
    auto doms = m.initial_domains();
    CHECK(propagate(m, doms) == PropOutcome::Fail);
}

TEST_CASE("x*x=4 with x>=0 against grid oracle") {
    Model m;
    VarId x = m.add_real("x", -2, 2);
    m.post_rel(m.nsqr(m.nvar(x)), RelOp::Eq, 4.0);
    m.post_rel(m.nvar(x), RelOp::Ge, 0.0);
    m.finalize();
    auto doms = m.initial_domains();
    REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
    CHECK(doms[x].box.contains(2.0));
    CHECK(doms[x].box.lo >= -1e-8); // tau_feas slack on the sign constraint
    // grid oracle: surviving points must be inside the propagated box
    for (double v = -2.0; v <= 2.0; v += 1e-4) {
        bool ok = std::fabs(v * v - 4.0) <= 1e-6 && v >= 0.0;
        if (ok) CHECK(doms[x].box.contains(v));
    }
}

TEST_CASE("trivially contradictory finite model infeasible") {
    Model m;
    VarId x = m.add_int("x", 0, 1);
    m.post_rel(m.nvar(x), RelOp::Eq, 1.0);
    m.post_rel(m.nvar(x), RelOp::Eq, 0.0);
    m.finalize();
    auto out = solve_satisfaction(m, {});
    CHECK(out.kind == OutcomeKind::Infeasible);
}

TEST_CASE("optimize trivial and toy instances with known optima") {
    SearchConfig cfg;
    {
        Model m;
        VarId x = m.add_real("x", 2, 5);
        m.set_objective(true, x);
        m.finalize();
        auto out = optimize(m, cfg);
        REQUIRE(out.feasible());
        CHECK(out.solution->value(x) == doctest::Approx(2.0).epsilon(1e-3));
        auto obj = *out.solution->objective_value;
        CHECK(obj.hi - obj.lo <= cfg.eps_obj + 1e-9);
        CHECK(obj.lo <= 2.0);
        CHECK(obj.hi >= 2.0 - cfg.eps_obj);
    }
    {
        // min (x-1.3)^2, optimum 0 at x=1.3
        Model m;
        VarId x = m.add_real("x", -10, 10);
        VarId o = m.add_real("o", 0, 400);
        m.post_var_eq(o, m.nsqr(m.nsum({m.nvar(x)}, {1.0}, -1.3)));
        m.set_objective(true, o);
        m.mark_search_var(x);
        m.finalize();
        auto out = optimize(m, cfg);
        REQUIRE(out.feasible());
        CHECK(out.solution->value(x) == doctest::Approx(1.3).epsilon(1e-2));
        auto obj = *out.solution->objective_value;
        CHECK(obj.lo <= 0.0 + 1e-12);
        CHECK(obj.hi <= cfg.eps_obj + 1e-9);
    }
    {
        // max 2x+1 over [-3,4] -> 9
        Model m;
        VarId x = m.add_real("x", -3, 4);
        VarId o = m.add_real("o", -100, 100);
        m.post_var_eq(o, m.nsum({m.nvar(x)}, {2.0}, 1.0));
        m.set_objective(false, o);
        m.mark_search_var(x);
        m.finalize();
        auto out = optimize(m, cfg);
        REQUIRE(out.feasible());
        auto obj = *out.solution->objective_value;
        CHECK(obj.hi >= 9.0 - cfg.eps_obj);
        CHECK(obj.lo <= 9.0 + 1e-9);
        CHECK(obj.hi - obj.lo <= cfg.eps_obj + 1e-9);
    }
}

TEST_CASE("reified comparison channels both ways") {
    {
        Model m;
        VarId x = m.add_real("x", 0, 10);
        VarId b = m.add_int("b", 0, 1);
        m.post(std::make_unique<ReifiedRel>(m.nvar(x), RelOp::Le, 3.0, b));
        m.post_rel(m.nvar(x), RelOp::Ge, 5.0);
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        CHECK(doms[b].set == std::vector<long long>{0});
    }
    {
        Model m;
        VarId x = m.add_real("x", 0, 10);
        VarId b = m.add_int("b", 1, 1);
        m.post(std::make_unique<ReifiedRel>(m.nvar(x), RelOp::Le, 3.0, b));
        m.finalize();
        auto doms = m.initial_domains();
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        CHECK(doms[x].box.hi <= 3.0 + 1e-6);
    }
}

TEST_CASE("malformed models rejected before search") {
    {
        Model m;
        m.add_real("x", 0, 1);
        Node bogus; // reference a var id that does not exist
        VarId ok = m.add_real("y", 0, 1);
        (void)ok;
        (void)bogus;
        int n = m.nvar(1);
        m.post_rel(n, RelOp::Eq, 0.0);
        CHECK_NOTHROW(m.finalize());
    }
    {
        Model m;
        m.add_real("x", 0, Interval::inf());
        CHECK_THROWS(m.finalize()); // unbounded real domain
    }
}

// Randomized soundness / contraction / idempotence (small edition of the
// acceptance property; the acceptance binary runs 1000).
TEST_CASE("planted feasible points survive propagation and search") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int it = 0; it < 100; ++it) {
        Model m;
        int nv = 2 + static_cast<int>(rng() % 3);
        std::vector<VarId> xs;
        std::vector<double> pt;
        for (int i = 0; i < nv; ++i) {
            xs.push_back(m.add_real("x" + std::to_string(i), -5, 5));
            pt.push_back(U(rng));
        }
        int nc = 1 + static_cast<int>(rng() % 4);
        for (int c = 0; c < nc; ++c) {
            // random linear or quadratic expression through the planted point
            std::vector<int> kids;
            std::vector<double> coef;
            double val = 0.0;
            for (int i = 0; i < nv; ++i) {
                double a = U(rng);
                bool quad = rng() % 2;
                if (quad) {
                    kids.push_back(m.nsqr(m.nvar(xs[i])));
                    val += a * pt[i] * pt[i];
                } else {
                    kids.push_back(m.nvar(xs[i]));
                    val += a * pt[i];
                }
                coef.push_back(a);
            }
            int node = m.nsum(std::move(kids), std::move(coef));
            switch (rng() % 3) {
            case 0: m.post_rel(node, RelOp::Eq, val); break;
            case 1: m.post_rel(node, RelOp::Le, val + 0.3); break;
            default: m.post_rel(node, RelOp::Ge, val - 0.3); break;
            }
        }
        m.finalize();
        auto doms = m.initial_domains();
        auto before = doms;
        REQUIRE(propagate(m, doms) == PropOutcome::Fixpoint);
        for (int i = 0; i < nv; ++i) {
            CHECK(doms[xs[i]].box.contains(pt[i]));               // soundness
            CHECK(before[xs[i]].box.contains(doms[xs[i]].box));   // contraction
        }
        auto again = doms;
        REQUIRE(propagate(m, again) == PropOutcome::Fixpoint);
        for (int i = 0; i < nv; ++i) CHECK(again[xs[i]].box == doms[xs[i]].box); // idempotence
        SearchConfig cfg;
        cfg.eps = 1e-4;
        auto out = solve_satisfaction(m, cfg);
        CHECK(out.kind != OutcomeKind::Infeasible);
    }
}
