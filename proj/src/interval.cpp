#include "statcp/interval.hpp"

#include <cstdio>

namespace statcp {

namespace {
// 0 * inf arises routinely when one operand is a point zero and the other is
// unbounded; the exact image is then {0} (resp. a half-line), so treat the
// product as 0 instead of NaN.
double mul_ed(double a, double b) {
    if ((a == 0.0 && std::isinf(b)) || (b == 0.0 && std::isinf(a))) return 0.0;
    return a * b;
}
} // namespace

Interval operator*(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    double c1 = mul_ed(a.lo, b.lo), c2 = mul_ed(a.lo, b.hi);
    double c3 = mul_ed(a.hi, b.lo), c4 = mul_ed(a.hi, b.hi);
    return outward(std::min(std::min(c1, c2), std::min(c3, c4)),
                   std::max(std::max(c1, c2), std::max(c3, c4)));
}

Interval operator/(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return Interval::empty();
    if (b.lo <= 0.0 && b.hi >= 0.0) {
        if (b.lo == 0.0 && b.hi == 0.0) return Interval::empty();
        if (a.lo == 0.0 && a.hi == 0.0) return Interval(0.0, 0.0);
        // Denominator straddles zero: quotient is unbounded on the side(s)
        // the numerator reaches; hull is returned.
        if (b.lo == 0.0) {
            if (a.lo >= 0.0) return outward(a.lo / b.hi, Interval::inf());
            if (a.hi <= 0.0) return outward(-Interval::inf(), a.hi / b.hi);
            return Interval::entire();
        }
        if (b.hi == 0.0) {
            if (a.lo >= 0.0) return outward(-Interval::inf(), a.lo / b.lo);
            if (a.hi <= 0.0) return outward(a.hi / b.lo, Interval::inf());
            return Interval::entire();
        }
        return Interval::entire();
    }
    double c1 = a.lo / b.lo, c2 = a.lo / b.hi, c3 = a.hi / b.lo, c4 = a.hi / b.hi;
    return outward(std::min(std::min(c1, c2), std::min(c3, c4)),
                   std::max(std::max(c1, c2), std::max(c3, c4)));
}

Interval div_rel(const Interval& a, const Interval& b) { return a / b; }

Interval sqr(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    double l = a.lo * a.lo, h = a.hi * a.hi;
    if (a.contains(0.0)) return outward(0.0, std::max(l, h));
    return outward(std::min(l, h), std::max(l, h));
}

Interval sqrt(const Interval& a) {
    Interval c = a.intersect(Interval(0.0, Interval::inf()));
    if (c.is_empty()) return Interval::empty();
    return outward(std::sqrt(c.lo), std::sqrt(c.hi));
}

Interval abs(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return Interval(0.0, std::max(-a.lo, a.hi));
}

Interval exp(const Interval& a) {
    if (a.is_empty()) return Interval::empty();
    return outward(std::exp(a.lo), std::exp(a.hi));
}

Interval log(const Interval& a) {
    Interval c = a.intersect(Interval(0.0, Interval::inf()));
    if (c.is_empty()) return Interval::empty();
    double l = c.lo == 0.0 ? -Interval::inf() : std::log(c.lo);
    return outward(l, std::log(c.hi));
}

std::string to_string(const Interval& a) {
    if (a.is_empty()) return "[empty]";
    char buf[80];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo, a.hi);
    return buf;
}

} // namespace statcp
