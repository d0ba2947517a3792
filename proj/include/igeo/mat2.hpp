#pragma once

#include <array>
#include <cmath>

namespace igeo {

/// Minimal 2x2 real matrix. Everything in this library is block-local, so a
/// fixed-size type beats a general linear algebra dependency.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    constexpr double det() const { return a11 * a22 - a12 * a21; }
    constexpr double trace() const { return a11 + a22; }
    constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }

    constexpr Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    constexpr Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    constexpr Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }

    constexpr std::array<double, 2> apply(double x, double y) const {
        return {a11 * x + a12 * y, a21 * x + a22 * y};
    }

    double max_abs() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

} // namespace igeo
