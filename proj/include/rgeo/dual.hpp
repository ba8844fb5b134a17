#pragma once
#include <cmath>

namespace rgeo {

// Order-2 forward-mode scalar: carries a value, two directional derivatives
// and the mixed second derivative.  Seeding d1 = e_i, d2 = e_j on the inputs
// of a C^2 evaluation yields f, df/di, df/dj, d2f/didj exactly (no step-size
// tuning).  d1 == d2 seeding gives the pure second derivative.
struct Dual2 {
    double v = 0.0;   // value
    double d1 = 0.0;  // first directional derivative
    double d2 = 0.0;  // second directional derivative
    double dd = 0.0;  // mixed second derivative

    Dual2() = default;
    Dual2(double value) : v(value) {}
    Dual2(double value, double g1, double g2, double g12)
        : v(value), d1(g1), d2(g2), dd(g12) {}
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.dd + b.dd};
}
inline Dual2 operator-(const Dual2& a, const Dual2& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.dd - b.dd};
}
inline Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2, -a.dd}; }
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + a.v * b.d2,
            a.dd * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.dd};
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) {
    const double iv = 1.0 / b.v;
    const double q = a.v * iv;
    const double q1 = (a.d1 - q * b.d1) * iv;
    const double q2 = (a.d2 - q * b.d2) * iv;
    return {q, q1, q2, (a.dd - q1 * b.d2 - q2 * b.d1 - q * b.dd) * iv};
}
inline Dual2 operator+(const Dual2& a, double b) { return a + Dual2(b); }
inline Dual2 operator+(double a, const Dual2& b) { return Dual2(a) + b; }
inline Dual2 operator-(const Dual2& a, double b) { return a - Dual2(b); }
inline Dual2 operator-(double a, const Dual2& b) { return Dual2(a) - b; }
inline Dual2 operator*(const Dual2& a, double b) { return {a.v * b, a.d1 * b, a.d2 * b, a.dd * b}; }
inline Dual2 operator*(double a, const Dual2& b) { return b * a; }
inline Dual2 operator/(const Dual2& a, double b) { return a * (1.0 / b); }
inline Dual2 operator/(double a, const Dual2& b) { return Dual2(a) / b; }

inline Dual2& operator+=(Dual2& a, const Dual2& b) { a = a + b; return a; }
inline Dual2& operator-=(Dual2& a, const Dual2& b) { a = a - b; return a; }
inline Dual2& operator*=(Dual2& a, const Dual2& b) { a = a * b; return a; }
inline Dual2& operator/=(Dual2& a, const Dual2& b) { a = a / b; return a; }

inline bool operator<(const Dual2& a, const Dual2& b) { return a.v < b.v; }
inline bool operator>(const Dual2& a, const Dual2& b) { return a.v > b.v; }
inline bool operator<(const Dual2& a, double b) { return a.v < b; }
inline bool operator>(const Dual2& a, double b) { return a.v > b; }
inline bool operator<=(const Dual2& a, double b) { return a.v <= b; }
inline bool operator>=(const Dual2& a, double b) { return a.v >= b; }

// Chain rule lift of a scalar function given f(v), f'(v), f''(v).
inline Dual2 lift(const Dual2& a, double f, double fp, double fpp) {
    return {f, fp * a.d1, fp * a.d2, fp * a.dd + fpp * a.d1 * a.d2};
}

inline Dual2 sqrt(const Dual2& a) {
    const double s = std::sqrt(a.v);
    return lift(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Dual2 exp(const Dual2& a) {
    const double e = std::exp(a.v);
    return lift(a, e, e, e);
}
inline Dual2 log(const Dual2& a) {
    return lift(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline Dual2 sin(const Dual2& a) { return lift(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Dual2 cos(const Dual2& a) { return lift(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Dual2 asin(const Dual2& a) {
    const double t = 1.0 - a.v * a.v;
    const double d = 1.0 / std::sqrt(t);
    return lift(a, std::asin(a.v), d, a.v * d / t);
}
inline Dual2 acos(const Dual2& a) {
    const double t = 1.0 - a.v * a.v;
    const double d = -1.0 / std::sqrt(t);
    return lift(a, std::acos(a.v), d, a.v * d / t);
}
inline Dual2 atan(const Dual2& a) {
    const double t = 1.0 + a.v * a.v;
    return lift(a, std::atan(a.v), 1.0 / t, -2.0 * a.v / (t * t));
}
inline Dual2 pow(const Dual2& a, double p) {
    const double f = std::pow(a.v, p);
    return lift(a, f, p * f / a.v, p * (p - 1.0) * f / (a.v * a.v));
}

// asin(sqrt(u))^2, smooth across u = 0; used for squared distances on
// spheres where sqrt alone would break differentiability on the cut set.
inline Dual2 asin_sqrt_sq(const Dual2& u) {
    if (u.v < 1e-4) {
        // asin(sqrt u)^2 = u + u^2/3 + 8u^3/45 + 4u^4/35 + ...
        return u * (1.0 + u * (1.0 / 3.0 + u * (8.0 / 45.0 + u * (4.0 / 35.0))));
    }
    Dual2 t = asin(sqrt(u));
    return t * t;
}
// acos(w)^2, smooth across w = 1 (series in s = 1 - w).
inline Dual2 acos_sq_near_one(const Dual2& w) {
    Dual2 s = 1.0 - w;
    if (s.v < 1e-4) {
        // acos(1-s)^2 = 2s (1 + s/6 + 3s^2/80 + 5s^3/448 + ...)
        return 2.0 * s * (1.0 + s * (1.0 / 6.0 + s * (3.0 / 80.0 + s * (5.0 / 448.0))));
    }
    Dual2 t = acos(w);
    return t * t;
}

// double counterparts so templated closed-form code runs on both types
inline double asin_sqrt_sq(double u) {
    if (u < 1e-4) return u * (1.0 + u * (1.0 / 3.0 + u * (8.0 / 45.0 + u * (4.0 / 35.0))));
    double t = std::asin(std::sqrt(u));
    return t * t;
}
inline double acos_sq_near_one(double w) {
    double s = 1.0 - w;
    if (s < 1e-4) return 2.0 * s * (1.0 + s * (1.0 / 6.0 + s * (3.0 / 80.0 + s * (5.0 / 448.0))));
    double t = std::acos(w);
    return t * t;
}

inline double value(double x) { return x; }
inline double value(const Dual2& x) { return x.v; }

}  // namespace rgeo
