#include "doctest.h"
#include "statcp/dist.hpp"

#include <cmath>
#include <random>

using namespace statcp;

namespace {

// Independent oracle: composite-Simpson integration of the closed-form
// density (a different evaluation route than the incomplete-function
// implementations under test).
double simpson(double (*pdf)(double, const DistSpec&), const DistSpec& d, double a, double b,
               int n) {
    double h = (b - a) / n, s = pdf(a, d) + pdf(b, d);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(a + i * h, d);
    return s * h / 3.0;
}

double normal_pdf(double x, const DistSpec& d) {
    double z = (x - d.p1) / d.p2;
    return std::exp(-0.5 * z * z) / (d.p2 * std::sqrt(2.0 * M_PI));
}
double t_pdf(double x, const DistSpec& d) {
    double nu = d.p1;
    return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
           std::sqrt(nu * M_PI) * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0));
}
double chi2_pdf(double x, const DistSpec& d) {
    if (x <= 0.0) return 0.0;
    double k = d.p1;
    return std::exp((0.5 * k - 1.0) * std::log(x) - 0.5 * x - std::lgamma(0.5 * k) -
                    0.5 * k * std::log(2.0));
}
double f_pdf(double x, const DistSpec& d) {
    if (x <= 0.0) return 0.0;
    double a = d.p1, b = d.p2;
    double lb = std::lgamma(0.5 * (a + b)) - std::lgamma(0.5 * a) - std::lgamma(0.5 * b);
    return std::exp(lb + 0.5 * a * std::log(a / b) + (0.5 * a - 1.0) * std::log(x) -
                    0.5 * (a + b) * std::log(1.0 + a * x / b));
}

} // namespace

TEST_CASE("normal cdf pinned values") {
    DistSpec n01 = DistSpec::normal(0.0, 1.0);
    CHECK(cdf(n01, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cdf(n01, 1.959964) == doctest::Approx(0.975).epsilon(1e-6));
    // oracle: integrate the density
    double o = 0.5 + simpson(normal_pdf, n01, 0.0, 1.959964, 4000);
    CHECK(cdf(n01, 1.959964) == doctest::Approx(o).epsilon(1e-9));
}

TEST_CASE("poisson cdf exact finite sum") {
    DistSpec p5 = DistSpec::poisson(5.0);
    double exact = std::exp(-5.0) * (1.0 + 5.0 + 12.5);
    CHECK(cdf(p5, 2.0) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(cdf(p5, 2.0) == doctest::Approx(0.124652).epsilon(1e-5));
    CHECK(cdf(p5, 2.9) == doctest::Approx(exact).epsilon(1e-12)); // floor semantics
    CHECK(cdf(p5, -0.5) == 0.0);
}

TEST_CASE("quantile pinned values vs oracles") {
    CHECK(quantile(DistSpec::student_t(19), 0.975) == doctest::Approx(2.09302).epsilon(5e-5));
    CHECK(quantile(DistSpec::chi_squared(5), 0.95) == doctest::Approx(11.0705).epsilon(1e-5));
    CHECK(quantile(DistSpec::chi_squared(2), 0.90) ==
          doctest::Approx(-2.0 * std::log(0.1)).epsilon(1e-9));
    CHECK(quantile(DistSpec::fisher_f(2, 15), 0.95) == doctest::Approx(3.6823).epsilon(3e-4));
    // T2_{3,5}(0.95) = 5 * F_{3,3}(0.95) by the F transform
    double f33 = quantile(DistSpec::fisher_f(3, 3), 0.95);
    CHECK(quantile(DistSpec::hotelling_t2(3, 5), 0.95) == doctest::Approx(5.0 * f33).epsilon(1e-9));
    CHECK(quantile(DistSpec::hotelling_t2(3, 5), 0.95) == doctest::Approx(46.383).epsilon(3e-4));

    // bisect the Simpson oracle for an implementation-independent check
    DistSpec c5 = DistSpec::chi_squared(5);
    double lo = 0.0, hi = 60.0;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (lo + hi);
        (simpson(chi2_pdf, c5, 1e-12, m, 20000) < 0.95 ? lo : hi) = m;
    }
    CHECK(quantile(c5, 0.95) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
    DistSpec f215 = DistSpec::fisher_f(2, 15);
    lo = 0.0;
    hi = 50.0;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (lo + hi);
        (simpson(f_pdf, f215, 1e-12, m, 20000) < 0.95 ? lo : hi) = m;
    }
    CHECK(quantile(f215, 0.95) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-5));
    DistSpec t19 = DistSpec::student_t(19);
    lo = 0.0;
    hi = 10.0;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (lo + hi);
        (0.5 + simpson(t_pdf, t19, 0.0, m, 20000) < 0.975 ? lo : hi) = m;
    }
    CHECK(quantile(t19, 0.975) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
}

TEST_CASE("round trip, monotonicity, symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.005, 0.995);
    DistSpec ds[] = {DistSpec::normal(1.0, 2.0), DistSpec::student_t(7),
                     DistSpec::chi_squared(4), DistSpec::fisher_f(3, 12),
                     DistSpec::hotelling_t2(2, 9)};
    for (const auto& d : ds) {
        for (int i = 0; i < 1000; ++i) {
            double p = U(rng);
            double x = quantile(d, p);
            CHECK(cdf(d, x) == doctest::Approx(p).epsilon(1e-9));
            CHECK(quantile(d, cdf(d, x)) == doctest::Approx(x).epsilon(1e-6));
        }
        double prev = -1e300;
        for (double p = 0.05; p < 1.0; p += 0.05) {
            double q = quantile(d, p);
            CHECK(q > prev);
            prev = q;
        }
    }
    DistSpec t9 = DistSpec::student_t(9);
    for (double p : {0.6, 0.8, 0.95, 0.99})
        CHECK(quantile(t9, p) == doctest::Approx(-quantile(t9, 1.0 - p)).epsilon(1e-9));
}

TEST_CASE("interval extension encloses pointwise cdf") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-6.0, 20.0);
    DistSpec ds[] = {DistSpec::normal(0.0, 3.0), DistSpec::chi_squared(6), DistSpec::poisson(4.0)};
    for (const auto& d : ds) {
        for (int i = 0; i < 300; ++i) {
            double a = U(rng), b = U(rng);
            Interval I(std::min(a, b), std::max(a, b));
            Interval C = cdf(d, I);
            std::uniform_real_distribution<double> UI(I.lo, I.hi);
            for (int k = 0; k < 5; ++k) CHECK(C.contains(cdf(d, UI(rng))));
        }
    }
}

TEST_CASE("poisson tail in the rate parameter") {
    // P(X < 3 | lambda) decreasing in lambda, matches the integer cdf
    CHECK(poisson_below(3, 5.0) == doctest::Approx(cdf(DistSpec::poisson(5.0), 2.0)).epsilon(1e-12));
    CHECK(poisson_below(0, 5.0) == 0.0);
    double p = poisson_below(3, 5.0);
    double lam = poisson_below_inv(3, p, 0.01, 30.0);
    CHECK(lam == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(poisson_below(3, 2.0) > poisson_below(3, 7.0));
}

TEST_CASE("invalid parameters rejected") {
    CHECK_THROWS(DistSpec::normal(0.0, 0.0));
    CHECK_THROWS(DistSpec::poisson(-1.0));
    CHECK_THROWS(DistSpec::hotelling_t2(3, 2));
    CHECK_THROWS(quantile(DistSpec::normal(0, 1), 0.0));
    CHECK_THROWS(quantile(DistSpec::normal(0, 1), 1.0));
}
