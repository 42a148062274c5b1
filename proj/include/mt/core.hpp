#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    /// Rotation by +pi/2.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }

inline double dot(Vec2 a, Vec2 b) { return a.dot(b); }

/// Unit vector at polar angle phi.
inline Vec2 omega(double phi) { return {std::cos(phi), std::sin(phi)}; }
/// omega rotated by +pi/2.
inline Vec2 omega_perp(double phi) { return {-std::sin(phi), std::cos(phi)}; }

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    // fmod can return exactly 2*pi after the correction when a is a tiny
    // negative number.
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

/// Difference of two angles reduced to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d > kPi) d -= kTwoPi;
    if (d <= -kPi) d += kTwoPi;
    return d;
}

/// Column-major-free tiny 2x2 matrix; m[r][c].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

    static Mat2 identity() { return {}; }
    static Mat2 diag(double a, double b) {
        Mat2 r;
        r.m = {{{a, 0.0}, {0.0, b}}};
        return r;
    }
    /// Builds the matrix whose columns are c0, c1.
    static Mat2 from_columns(Vec2 c0, Vec2 c1) {
        Mat2 r;
        r.m = {{{c0.x, c1.x}, {c0.y, c1.y}}};
        return r;
    }

    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    Mat2 transpose() const {
        Mat2 r;
        r.m = {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}};
        return r;
    }

    Mat2 inverse() const {
        double d = det();
        if (d == 0.0) throw std::invalid_argument("Mat2::inverse: singular matrix");
        Mat2 r;
        r.m = {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
        return r;
    }

    Vec2 operator*(Vec2 v) const {
        return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
    }

    Mat2 operator*(double a) const {
        Mat2 r;
        r.m = {{{m[0][0] * a, m[0][1] * a}, {m[1][0] * a, m[1][1] * a}}};
        return r;
    }
};

/// Axis-aligned rectangle, half-open convention [lo, hi) on both axes.
struct Rect {
    Vec2 lo;
    Vec2 hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y;
    }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
};

}  // namespace mt
