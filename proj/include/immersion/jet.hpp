#pragma once

#include <cmath>

namespace immersion {

/// Second-order forward-mode jet of a scalar function of (x, y).
///
/// Arithmetic on jets propagates value, gradient and Hessian in a single pass.
/// The mixed partial has a single slot, so symmetry holds by construction.
struct ScalarJet2 {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;

    static constexpr ScalarJet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static constexpr ScalarJet2 var_x(double x) { return {x, 1, 0, 0, 0, 0}; }
    static constexpr ScalarJet2 var_y(double y) { return {y, 0, 1, 0, 0, 0}; }

    bool is_constant() const { return dx == 0 && dy == 0 && dxx == 0 && dxy == 0 && dyy == 0; }
    bool is_finite() const {
        return std::isfinite(value) && std::isfinite(dx) && std::isfinite(dy) && std::isfinite(dxx) &&
               std::isfinite(dxy) && std::isfinite(dyy);
    }
};

/// Applies a scalar function given its value and first two derivatives at a.value.
constexpr ScalarJet2 chain(const ScalarJet2& a, double f, double df, double d2f) {
    return {f,
            df * a.dx,
            df * a.dy,
            d2f * a.dx * a.dx + df * a.dxx,
            d2f * a.dx * a.dy + df * a.dxy,
            d2f * a.dy * a.dy + df * a.dyy};
}

constexpr ScalarJet2 operator+(const ScalarJet2& a, const ScalarJet2& b) {
    return {a.value + b.value, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
}

constexpr ScalarJet2 operator-(const ScalarJet2& a, const ScalarJet2& b) {
    return {a.value - b.value, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
}

constexpr ScalarJet2 operator-(const ScalarJet2& a) { return {-a.value, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy}; }

constexpr ScalarJet2 operator*(const ScalarJet2& a, const ScalarJet2& b) {
    return {a.value * b.value,
            a.dx * b.value + a.value * b.dx,
            a.dy * b.value + a.value * b.dy,
            a.dxx * b.value + 2 * a.dx * b.dx + a.value * b.dxx,
            a.dxy * b.value + a.dx * b.dy + a.dy * b.dx + a.value * b.dxy,
            a.dyy * b.value + 2 * a.dy * b.dy + a.value * b.dyy};
}

constexpr ScalarJet2 operator*(double s, const ScalarJet2& a) {
    return {s * a.value, s * a.dx, s * a.dy, s * a.dxx, s * a.dxy, s * a.dyy};
}
constexpr ScalarJet2 operator*(const ScalarJet2& a, double s) { return s * a; }
constexpr ScalarJet2 operator+(const ScalarJet2& a, double s) { return a + ScalarJet2::constant(s); }
constexpr ScalarJet2 operator+(double s, const ScalarJet2& a) { return a + s; }
constexpr ScalarJet2 operator-(const ScalarJet2& a, double s) { return a + (-s); }
constexpr ScalarJet2 operator-(double s, const ScalarJet2& a) { return -a + s; }

/// Caller guarantees b.value != 0.
constexpr ScalarJet2 reciprocal(const ScalarJet2& b) {
    const double r = 1.0 / b.value;
    return chain(b, r, -r * r, 2 * r * r * r);
}

constexpr ScalarJet2 operator/(const ScalarJet2& a, const ScalarJet2& b) { return a * reciprocal(b); }
constexpr ScalarJet2 operator/(const ScalarJet2& a, double s) { return (1.0 / s) * a; }
constexpr ScalarJet2 operator/(double s, const ScalarJet2& b) { return s * reciprocal(b); }

inline ScalarJet2 sin(const ScalarJet2& a) {
    const double s = std::sin(a.value), c = std::cos(a.value);
    return chain(a, s, c, -s);
}
inline ScalarJet2 cos(const ScalarJet2& a) {
    const double s = std::sin(a.value), c = std::cos(a.value);
    return chain(a, c, -s, -c);
}
inline ScalarJet2 tan(const ScalarJet2& a) {
    const double t = std::tan(a.value);
    const double sec2 = 1 + t * t;
    return chain(a, t, sec2, 2 * t * sec2);
}
inline ScalarJet2 exp(const ScalarJet2& a) {
    const double e = std::exp(a.value);
    return chain(a, e, e, e);
}
/// Requires a.value > 0.
inline ScalarJet2 log(const ScalarJet2& a) {
    const double r = 1.0 / a.value;
    return chain(a, std::log(a.value), r, -r * r);
}
/// Requires a.value > 0.
inline ScalarJet2 sqrt(const ScalarJet2& a) {
    const double s = std::sqrt(a.value);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}
inline ScalarJet2 sinh(const ScalarJet2& a) {
    const double s = std::sinh(a.value), c = std::cosh(a.value);
    return chain(a, s, c, s);
}
inline ScalarJet2 cosh(const ScalarJet2& a) {
    const double s = std::sinh(a.value), c = std::cosh(a.value);
    return chain(a, c, s, c);
}
inline ScalarJet2 tanh(const ScalarJet2& a) {
    const double t = std::tanh(a.value);
    const double sech2 = 1 - t * t;
    return chain(a, t, sech2, -2 * t * sech2);
}
inline ScalarJet2 atan(const ScalarJet2& a) {
    const double q = 1.0 / (1 + a.value * a.value);
    return chain(a, std::atan(a.value), q, -2 * a.value * q * q);
}

/// Integer power, exact for any base (negative exponents need a nonzero base).
inline ScalarJet2 pow_int(const ScalarJet2& a, int n) {
    if (n == 0) return ScalarJet2::constant(1.0);
    const double t = a.value;
    const double f = std::pow(t, n);
    const double df = n * std::pow(t, n - 1);
    const double d2f = (n == 1) ? 0.0 : double(n) * (n - 1) * std::pow(t, n - 2);
    return chain(a, f, df, d2f);
}

/// General power a^b = exp(b log a). Requires a.value > 0.
inline ScalarJet2 pow(const ScalarJet2& a, const ScalarJet2& b) { return exp(b * log(a)); }

} // namespace immersion
