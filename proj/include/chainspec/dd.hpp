// dd.hpp — double-double arithmetic for cancellation-sensitive residual checks.
// Error-free transformations (TwoSum, Dekker product via FMA) give ~31 decimal
// digits, enough to verify harmonicity of functions whose values span many
// orders of magnitude.
#pragma once
#include <cmath>

namespace chainspec {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

// a + b with exact rounding error
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return dd{s, err};
}

// a * b with exact rounding error (requires FMA)
inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return dd{p, err};
}

inline dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    dd r = two_sum(s.hi, lo);
    return r;
}

inline dd dd_add(dd a, double b) { return dd_add(a, dd{b}); }

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd{-b.hi, -b.lo}); }

inline dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, double b) { return dd_mul(a, dd{b}); }

inline dd dd_div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    double q3 = r.hi / b.hi;
    dd q = two_sum(q1, q2);
    q.lo += q3;
    return two_sum(q.hi, q.lo);
}

inline dd dd_div(dd a, double b) { return dd_div(a, dd{b}); }

// Compensated (Kahan) accumulator for long nonnegative series.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

} // namespace chainspec
