#pragma once

#include "statcp/interval.hpp"

namespace statcp {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gammp(double a, double x);
double gammq(double a, double x);
// Regularized incomplete beta function I_x(a,b).
double ibeta(double a, double b, double x);

enum class DistTag { Normal, StudentT, ChiSquared, FisherF, HotellingT2, Poisson };

struct DistSpec {
    DistTag tag;
    double p1 = 0.0; // Normal mu | StudentT nu | ChiSquared k | F d1 | T2 p | Poisson lambda
    double p2 = 1.0; // Normal sigma | F d2 | T2 m

    static DistSpec normal(double mu, double sigma);
    static DistSpec student_t(double nu);
    static DistSpec chi_squared(double k);
    static DistSpec fisher_f(double d1, double d2);
    static DistSpec hotelling_t2(double p, double m); // m >= p >= 1
    static DistSpec poisson(double lambda);
};

// CDF evaluated at x. Poisson is P(X <= floor(x)) for x >= -1.
double cdf(const DistSpec& d, double x);
// Monotone interval image of the CDF over x.
Interval cdf(const DistSpec& d, const Interval& x);
// Inverse CDF; p must lie in (0,1). For Poisson returns the smallest integer k
// with cdf(k) >= p.
double quantile(const DistSpec& d, double p);

// Poisson tail probabilities as a function of the (real-valued) rate, with the
// count threshold fixed: P(X < b | lambda) for integer b >= 0. Strictly
// decreasing in lambda. These are what the AR(1) model's bin targets use, so
// the rate can stay a decision variable.
double poisson_below(int b, double lambda);
// Inverse in lambda over [lam_lo, lam_hi]; clamps when prob is out of range.
double poisson_below_inv(int b, double prob, double lam_lo, double lam_hi);

} // namespace statcp
