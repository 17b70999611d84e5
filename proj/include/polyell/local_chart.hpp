#pragma once

#include <cmath>
#include <limits>

#include "polyell/geometry.hpp"

namespace polyell {

/// Elliptic coordinates in one side chart. theta is normalized to [0, 2*pi);
/// right-polarity frames host theta in [0, pi], left-polarity in [pi, 2*pi].
struct LocalCoord {
    double mu = 0.0;
    double theta = 0.0;
};

/// Semi-axis bookkeeping of a point in one chart: ae = (r_pos + r_neg)/2 is
/// the elliptic major semi-axis, ah = (r_neg - r_pos)/2 = f*cos(theta) the
/// hyperbolic one.
struct SemiAxes {
    double ae = 0.0;
    double ah = 0.0;
    double r_pos = 0.0;  // distance to the +focus
    double r_neg = 0.0;  // distance to the -focus
};

inline Vec2 local_to_cartesian(const LocalFrame& frame, const LocalCoord& c) {
    const double A = frame.f * std::cosh(c.mu) * std::cos(c.theta);
    const double B = frame.f * std::sinh(c.mu) * std::sin(c.theta);
    return frame.to_global(Vec2{A, B});
}

inline SemiAxes semi_axes(const LocalFrame& frame, const Vec2& p) {
    SemiAxes s;
    s.r_pos = distance(p, frame.focus_pos());
    s.r_neg = distance(p, frame.focus_neg());
    s.ae = 0.5 * (s.r_pos + s.r_neg);
    s.ah = 0.5 * (s.r_neg - s.r_pos);
    return s;
}

/// Inverse of local_to_cartesian on the frame's half-plane. Points on the
/// focal line (|signed distance| < 1e-13*f) resolve theta in {0, pi} through
/// the cos(theta) = ah/f branch.
inline LocalCoord cartesian_to_local(const LocalFrame& frame, const Vec2& p) {
    const Vec2 loc = frame.to_local(p);
    const double f = frame.f;
    const double on_line_tol = 1e-13 * f;
    if (frame.polarity == Polarity::Right && loc.y < -on_line_tol)
        throw WrongSide("point lies in the left half-plane of a right-polarity frame");
    if (frame.polarity == Polarity::Left && loc.y > on_line_tol)
        throw WrongSide("point lies in the right half-plane of a left-polarity frame");

    const SemiAxes s = semi_axes(frame, p);
    LocalCoord c;
    c.mu = guarded_acosh(s.ae / f);
    const double sh = std::sinh(c.mu);
    double t;
    if (sh * f > 1e-10 * f) {
        t = std::atan2(std::abs(loc.y) / (f * sh), clamp_unit(s.ah / f));
    } else {
        t = std::acos(clamp_unit(s.ah / f));
    }
    c.theta = (frame.polarity == Polarity::Right) ? t : wrap_angle(kTwoPi - t);
    return c;
}

/// Dashed-ray equation in a local chart: the hyperbolic semi-axis at which
/// the ray meets the confocal ellipse of semi-axis ae. The ray's supporting
/// line must pass through one focus of the frame.
inline double ray_in_local(const LocalFrame& frame, const DashedRay& ray, double ae) {
    if (ae < frame.f * (1.0 - 1e-12)) throw OutOfDomain("ae below the frame's semifocal distance");
    const double f = frame.f;
    const Vec2 fp = frame.focus_pos();
    const Vec2 fn = frame.focus_neg();
    const double tol = 1e-9 * f;

    const bool on_pos = std::abs(cross(ray.direction, fp - ray.origin)) < tol;
    const bool on_neg = std::abs(cross(ray.direction, fn - ray.origin)) < tol;
    if (on_pos == on_neg)
        throw OutOfDomain("ray is not supported by exactly one focal line of this frame");
    const double sF = on_pos ? 1.0 : -1.0;
    // chi: cosine between the ray direction and the outward focal axis at
    // the supporting focus (away from the other focus).
    const Vec2 axis = (sF > 0.0) ? (fp - fn).unit() : (fn - fp).unit();
    const double chi = dot(ray.direction, axis);
    return sF * f * (f + ae * chi) / (ae + f * chi);
}

}  // namespace polyell
