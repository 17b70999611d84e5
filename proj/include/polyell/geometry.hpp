#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <vector>

#include "polyell/common.hpp"

namespace polyell {

enum class Polarity { Right, Left };  // Right hosts theta in [0,pi], Left in [pi,2pi]

/// Validated convex polygon (triangle or square) in canonical placement:
/// vertex 0 at the origin, vertex 1 at (2*f[0], 0), counterclockwise.
/// Side i joins vertex i and vertex i+1 and has semifocal distance f[i]
/// (side length 2*f[i]).
struct PolygonSpec {
    int n = 0;
    std::vector<double> f;       // semifocal distances, one per side
    std::vector<double> gamma;   // interior angles at the vertices
    std::vector<Vec2> vertices;  // counterclockwise
    std::string orientation = "ccw";

    const Vec2& vertex(int i) const { return vertices[((i % n) + n) % n]; }
    double side_f(int i) const { return f[((i % n) + n) % n]; }
    double angle(int i) const { return gamma[((i % n) + n) % n]; }

    Vec2 centroid() const {
        Vec2 c{0, 0};
        for (const auto& v : vertices) c = c + v;
        return c / static_cast<double>(n);
    }
};

/// One side's elliptic chart. The positive focus sits at the first vertex of
/// the side traversed counterclockwise; beta is the angle of the direction
/// midpoint -> positive focus (the negative direction of the focal segment).
struct LocalFrame {
    int i = 0;              // index of the vertex carrying the +focus
    int j = 0;              // index of the vertex carrying the -focus
    double beta = 0.0;      // rotation angle, in [0, 2*pi)
    Vec2 midpoint;
    double f = 0.0;         // semifocal distance
    Polarity polarity = Polarity::Right;

    Vec2 focus_pos() const { return midpoint + rotate(beta, Vec2{f, 0.0}); }
    Vec2 focus_neg() const { return midpoint + rotate(beta, Vec2{-f, 0.0}); }

    Vec2 to_global(const Vec2& local) const { return rotate(beta, local) + midpoint; }
    Vec2 to_local(const Vec2& global) const { return rotate(-beta, global - midpoint); }
};

/// Extension of side `side` beyond vertex `vertex`, pointing away from the
/// polygon. The 2n rays plus the n sides partition the plane into the
/// interior and 2n exterior regions.
struct DashedRay {
    int vertex = 0;
    int side = 0;
    Vec2 origin;
    Vec2 direction;  // unit

    /// Conventional 1-based label, e.g. "1_31".
    std::string label(int n) const {
        const int a = side + 1;
        const int b = (side + 1) % n + 1;
        return std::to_string(vertex + 1) + "_" + std::to_string(a) + std::to_string(b);
    }
};

namespace detail {

/// Interior angle opposite side a, for sides (a, b, c); stable for thin
/// triangles (half-angle form instead of the law of cosines).
inline double triangle_angle(double a, double b, double c) {
    const double s = 0.5 * (a + b + c);
    const double num = (s - b) * (s - c);
    const double den = s * (s - a);
    if (num < 0.0 || den <= 0.0) throw DegenerateGeometry("triangle inequality violated");
    return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

}  // namespace detail

inline PolygonSpec build_polygon(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    for (double fi : f)
        if (!(fi > 0.0) || !std::isfinite(fi))
            throw DegenerateGeometry("semifocal distances must be positive");

    PolygonSpec spec;
    spec.n = n;
    spec.f = f;

    if (n == 3) {
        const double a = 2.0 * f[0], b = 2.0 * f[1], c = 2.0 * f[2];
        if (!(a < b + c && b < c + a && c < a + b))
            throw DegenerateGeometry("triangle inequality violated");
        // gamma[i] is the angle at vertex i, opposite side i+1.
        spec.gamma = {detail::triangle_angle(b, c, a), detail::triangle_angle(c, a, b),
                      detail::triangle_angle(a, b, c)};
        spec.vertices = {Vec2{0.0, 0.0}, Vec2{2.0 * f[0], 0.0},
                         Vec2{2.0 * f[2] * std::cos(spec.gamma[0]),
                              2.0 * f[2] * std::sin(spec.gamma[0])}};
    } else if (n == 4) {
        for (double fi : f)
            if (std::abs(fi - f[0]) > 1e-14 * f[0])
                throw Unsupported("only the square is supported for n = 4");
        const double s = 2.0 * f[0];
        spec.gamma = {kPi / 2, kPi / 2, kPi / 2, kPi / 2};
        spec.vertices = {Vec2{0, 0}, Vec2{s, 0}, Vec2{s, s}, Vec2{0, s}};
    } else {
        throw Unsupported("side count must be 3 or 4");
    }
    return spec;
}

/// One right- and one left-polarity frame per side; frames[2*i] is the
/// right-polarity chart of side i.
inline std::vector<LocalFrame> side_frames(const PolygonSpec& spec) {
    std::vector<LocalFrame> out;
    out.reserve(2 * spec.n);
    for (int i = 0; i < spec.n; ++i) {
        const Vec2 a = spec.vertex(i);
        const Vec2 b = spec.vertex(i + 1);
        LocalFrame fr;
        fr.i = i;
        fr.j = (i + 1) % spec.n;
        fr.midpoint = (a + b) * 0.5;
        fr.f = spec.f[i];
        const Vec2 d = a - b;  // midpoint -> +focus direction
        fr.beta = wrap_angle(std::atan2(d.y, d.x));
        fr.polarity = Polarity::Right;
        out.push_back(fr);
        fr.polarity = Polarity::Left;
        out.push_back(fr);
    }
    return out;
}

/// Single chart of side i with the requested polarity.
inline LocalFrame side_frame(const PolygonSpec& spec, int i, Polarity pol = Polarity::Right) {
    const Vec2 a = spec.vertex(i);
    const Vec2 b = spec.vertex(i + 1);
    LocalFrame fr;
    fr.i = i % spec.n;
    fr.j = (i + 1) % spec.n;
    fr.midpoint = (a + b) * 0.5;
    fr.f = spec.side_f(i);
    const Vec2 d = a - b;
    fr.beta = wrap_angle(std::atan2(d.y, d.x));
    fr.polarity = pol;
    return fr;
}

/// Rays grouped by vertex: for vertex N the extension of the incoming side
/// (N-1) followed by the extension of the outgoing side N.
inline std::vector<DashedRay> dashed_rays(const PolygonSpec& spec) {
    std::vector<DashedRay> out;
    out.reserve(2 * spec.n);
    for (int v = 0; v < spec.n; ++v) {
        {
            DashedRay r;  // side v-1 runs (v-1) -> v; extend beyond v
            r.vertex = v;
            r.side = (v + spec.n - 1) % spec.n;
            r.origin = spec.vertex(v);
            r.direction = (spec.vertex(v) - spec.vertex(v - 1)).unit();
            out.push_back(r);
        }
        {
            DashedRay r;  // side v runs v -> (v+1); extend beyond v
            r.vertex = v;
            r.side = v;
            r.origin = spec.vertex(v);
            r.direction = (spec.vertex(v) - spec.vertex(v + 1)).unit();
            out.push_back(r);
        }
    }
    return out;
}

/// Signed "outside side i" test: positive on the exterior side of the line
/// through side i.
inline double outside_margin(const PolygonSpec& spec, int i, const Vec2& p) {
    const Vec2 a = spec.vertex(i);
    const Vec2 d = spec.vertex(i + 1) - a;
    return -cross(d, p - a);  // interior (ccw) has cross > 0
}

inline bool point_in_closed_polygon(const PolygonSpec& spec, const Vec2& p, double tol = 0.0) {
    for (int i = 0; i < spec.n; ++i)
        if (outside_margin(spec, i, p) > tol) return false;
    return true;
}

inline double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double t = dot(p - a, d) / dot(d, d);
    const double tc = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return distance(p, a + d * tc);
}

inline double distance_to_perimeter(const PolygonSpec& spec, const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.n; ++i)
        best = std::min(best, distance_to_segment(p, spec.vertex(i), spec.vertex(i + 1)));
    return best;
}

}  // namespace polyell
