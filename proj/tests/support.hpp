#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <immersion/geometry.hpp>

namespace testing {

using immersion::SurfaceJet;
using immersion::Vec;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline Vec v4(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

// Hand-differentiated jets, independent of the catalogue code.

inline SurfaceJet clifford_jet(double u, double v) {
    const double s = 1 / std::sqrt(2.0);
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    return SurfaceJet(s * v4(cu, su, cv, sv), s * v4(-su, cu, 0, 0), s * v4(0, 0, -sv, cv), s * v4(-cu, -su, 0, 0),
                      v4(0, 0, 0, 0), s * v4(0, 0, -cv, -sv));
}

inline immersion::NormalFrame clifford_frame(double u, double v, bool with_derivs) {
    const double s = 1 / std::sqrt(2.0);
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    immersion::NormalFrame f;
    f.vectors = {s * v4(cu, su, cv, sv), s * v4(-cu, -su, cv, sv)};
    if (with_derivs)
        f.derivs = std::vector<std::array<Vec, 2>>{{s * v4(-su, cu, 0, 0), s * v4(0, 0, -sv, cv)},
                                                   {s * v4(su, -cu, 0, 0), s * v4(0, 0, -sv, cv)}};
    return f;
}

/// (x, y, (x²-y²)/2, xy)
inline SurfaceJet holomorphic_jet(double x, double y) {
    return SurfaceJet(v4(x, y, (x * x - y * y) / 2, x * y), v4(1, 0, x, y), v4(0, 1, -y, x), v4(0, 0, 1, 0),
                      v4(0, 0, 0, 1), v4(0, 0, -1, 0));
}

inline SurfaceJet plane_jet(double u, double v) {
    return SurfaceJet(v4(u, v, 0, 0), v4(1, 0, 0, 0), v4(0, 1, 0, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0), v4(0, 0, 0, 0));
}

/// Uniform point in the disc of radius r.
inline std::pair<double, double> disc_point(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> U(-1, 1);
    for (;;) {
        const double a = U(rng), b = U(rng);
        if (a * a + b * b <= 1) return {r * a, r * b};
    }
}

} // namespace testing
