#include "statcp/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace statcp {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kFpMin = 1e-300;

// Series expansion of P(a,x), good for x < a+1.
double gser(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), good for x >= a+1 (modified Lentz).
double gcf(double a, double x) {
    double b = x + 1.0 - a, c = 1.0 / kFpMin, d = 1.0 / b, h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double betacf(double a, double b, double x) {
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

// HotellingT2(p, m) relates to F by T2 = p*m/(m-p+1) * F(p, m-p+1).
double t2_scale(const DistSpec& d) { return d.p1 * d.p2 / (d.p2 - d.p1 + 1.0); }

} // namespace

double gammp(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammp: bad arguments");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gser(a, x) : 1.0 - gcf(a, x);
}

double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gser(a, x) : gcf(a, x);
}

double ibeta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0)
        throw std::invalid_argument("ibeta: bad arguments");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

DistSpec DistSpec::normal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("Normal: sigma must be positive");
    return {DistTag::Normal, mu, sigma};
}
DistSpec DistSpec::student_t(double nu) {
    if (!(nu >= 1.0)) throw std::invalid_argument("StudentT: nu must be >= 1");
    return {DistTag::StudentT, nu, 0.0};
}
DistSpec DistSpec::chi_squared(double k) {
    if (!(k >= 1.0)) throw std::invalid_argument("ChiSquared: k must be >= 1");
    return {DistTag::ChiSquared, k, 0.0};
}
DistSpec DistSpec::fisher_f(double d1, double d2) {
    if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw std::invalid_argument("FisherF: df must be >= 1");
    return {DistTag::FisherF, d1, d2};
}
DistSpec DistSpec::hotelling_t2(double p, double m) {
    if (!(p >= 1.0) || !(m >= p)) throw std::invalid_argument("HotellingT2: need m >= p >= 1");
    return {DistTag::HotellingT2, p, m};
}
DistSpec DistSpec::poisson(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("Poisson: lambda must be positive");
    return {DistTag::Poisson, lambda, 0.0};
}

double cdf(const DistSpec& d, double x) {
    switch (d.tag) {
    case DistTag::Normal:
        return 0.5 * std::erfc(-(x - d.p1) / (d.p2 * std::sqrt(2.0)));
    case DistTag::StudentT: {
        double nu = d.p1;
        if (x == 0.0) return 0.5;
        double ib = ibeta(0.5 * nu, 0.5, nu / (nu + x * x));
        return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
    }
    case DistTag::ChiSquared:
        return x <= 0.0 ? 0.0 : gammp(0.5 * d.p1, 0.5 * x);
    case DistTag::FisherF: {
        if (x <= 0.0) return 0.0;
        double d1 = d.p1, d2 = d.p2;
        return ibeta(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2));
    }
    case DistTag::HotellingT2:
        return cdf(DistSpec::fisher_f(d.p1, d.p2 - d.p1 + 1.0), x / t2_scale(d));
    case DistTag::Poisson: {
        double k = std::floor(x);
        if (k < 0.0) return 0.0;
        return gammq(k + 1.0, d.p1); // P(X <= k) = Q(k+1, lambda)
    }
    }
    return 0.0;
}

Interval cdf(const DistSpec& d, const Interval& x) {
    if (x.is_empty()) return Interval::empty();
    double lo = x.lo == -Interval::inf() ? 0.0 : cdf(d, x.lo);
    double hi = x.hi == Interval::inf() ? 1.0 : cdf(d, x.hi);
    // The CDF is nondecreasing; widen for evaluation error and clip to [0,1].
    return outward(lo - 1e-9, hi + 1e-9).intersect(Interval(0.0, 1.0));
}

double quantile(const DistSpec& d, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must be in (0,1)");
    if (d.tag == DistTag::Poisson) {
        double k = 0.0;
        while (cdf(d, k) < p) k += 1.0;
        return k;
    }
    // Bracket the root, then bisect. CDFs are cheap and monotone; bisection to
    // ~1e-14 relative keeps the round-trip property well under 1e-9.
    double lo, hi;
    switch (d.tag) {
    case DistTag::Normal:
        lo = d.p1 - d.p2;
        hi = d.p1 + d.p2;
        while (cdf(d, lo) > p) lo = d.p1 - 2.0 * (d.p1 - lo);
        while (cdf(d, hi) < p) hi = d.p1 + 2.0 * (hi - d.p1);
        break;
    case DistTag::StudentT:
        lo = -1.0;
        hi = 1.0;
        while (cdf(d, lo) > p) lo *= 2.0;
        while (cdf(d, hi) < p) hi *= 2.0;
        break;
    default:
        lo = 0.0;
        hi = std::max(1.0, d.p1);
        while (cdf(d, hi) < p) hi *= 2.0;
        break;
    }
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        (cdf(d, m) < p ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

double poisson_below(int b, double lambda) {
    if (b <= 0) return 0.0;
    return gammq(static_cast<double>(b), lambda); // P(X <= b-1)
}

double poisson_below_inv(int b, double prob, double lam_lo, double lam_hi) {
    if (b <= 0) return prob <= 0.0 ? lam_lo : lam_hi;
    double lo = lam_lo, hi = lam_hi;
    if (poisson_below(b, lo) <= prob) return lo; // decreasing in lambda
    if (poisson_below(b, hi) >= prob) return hi;
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        (poisson_below(b, m) > prob ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace statcp
