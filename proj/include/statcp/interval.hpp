#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace statcp {

// Closed interval over the extended reals. The empty interval is the
// distinguished sentinel [+inf, -inf]; no other lo > hi state is legal.
// Arithmetic is outward-rounded: every operation returns an enclosure of the
// exact real image (one ulp of slack on each finite bound).
struct Interval {
    double lo;
    double hi;

    Interval() : lo(-inf()), hi(inf()) {}
    Interval(double v) : lo(v), hi(v) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    static constexpr double inf() { return std::numeric_limits<double>::infinity(); }
    static Interval empty() { return Interval(inf(), -inf()); }
    static Interval entire() { return Interval(-inf(), inf()); }

    bool is_empty() const { return lo > hi; }
    bool is_point() const { return lo == hi; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return o.is_empty() || (lo <= o.lo && o.hi <= hi); }
    bool intersects(const Interval& o) const {
        return !is_empty() && !o.is_empty() && lo <= o.hi && o.lo <= hi;
    }
    double width() const { return is_empty() ? 0.0 : hi - lo; }
    double mid() const {
        if (is_empty()) return std::numeric_limits<double>::quiet_NaN();
        if (lo == -inf() && hi == inf()) return 0.0;
        if (lo == -inf()) return std::min(hi, -1e308);
        if (hi == inf()) return std::max(lo, 1e308);
        double m = 0.5 * (lo + hi);
        if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
        return m;
    }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }

    Interval intersect(const Interval& o) const {
        if (is_empty() || o.is_empty()) return empty();
        double l = std::max(lo, o.lo), h = std::min(hi, o.hi);
        if (l > h) return empty();
        return Interval(l, h);
    }
    Interval hull(const Interval& o) const {
        if (is_empty()) return o;
        if (o.is_empty()) return *this;
        return Interval(std::min(lo, o.lo), std::max(hi, o.hi));
    }

    bool operator==(const Interval& o) const {
        if (is_empty() && o.is_empty()) return true;
        return lo == o.lo && hi == o.hi;
    }
};

// Outward rounding: nudge each finite bound one ulp outward. Cheaper than
// toggling the FPU rounding mode and sound for our tolerance regime.
inline double prev_d(double x) {
    return std::isfinite(x) ? std::nextafter(x, -Interval::inf()) : x;
}
inline double next_d(double x) {
    return std::isfinite(x) ? std::nextafter(x, Interval::inf()) : x;
}
inline Interval outward(double lo, double hi) { return Interval(prev_d(lo), next_d(hi)); }

inline Interval operator+(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return outward(a.lo + b.lo, a.hi + b.hi);
}
inline Interval operator-(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    return outward(a.lo - b.hi, a.hi - b.lo);
}
inline Interval operator-(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    return Interval(-a.hi, -a.lo);
}

Interval operator*(const Interval& a, const Interval& b);
// Division that returns the hull of the true quotient set; division by an
// interval containing zero widens to the enclosing hull (possibly entire).
Interval operator/(const Interval& a, const Interval& b);
// Relational division for backward propagation: x such that x*b ⊆ a, returned
// as up to the hull of two half-lines. When b straddles zero the result may be
// entire; callers intersect with the current domain.
Interval div_rel(const Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);     // intersects domain with [0, inf)
Interval abs(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);      // intersects domain with (0, inf)

std::string to_string(const Interval& a);

} // namespace statcp
