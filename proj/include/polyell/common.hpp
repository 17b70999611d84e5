#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polyell {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double norm() const { return std::hypot(x, y); }
    Vec2 unit() const {
        const double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Rotation by angle phi applied to (x, y).
inline Vec2 rotate(double phi, const Vec2& v) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// acosh with a floating-point guard: arguments within 1e-12 below 1 are
/// treated as exactly 1 (the mu = 0 edge).
inline double guarded_acosh(double x) {
    if (x < 1.0) {
        if (x > 1.0 - 1e-12) return 0.0;
        throw std::domain_error("acosh argument below 1");
    }
    return std::acosh(x);
}

inline double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGeometry : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct WrongSide : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct ProtectedRegion : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct BoundaryPoint : Error { using Error::Error; };
struct SeparabilityFailure : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace polyell
