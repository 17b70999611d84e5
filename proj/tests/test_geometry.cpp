#include <catch2/catch_amalgamated.hpp>

#include "polyell/geometry.hpp"

using namespace polyell;
using Catch::Approx;

namespace {
constexpr double deg = kPi / 180.0;
}

TEST_CASE("reference scalene triangle angles") {
    // sides 2.78, 5.19, 4.88
    const auto spec = build_polygon({1.39, 2.595, 2.44});
    REQUIRE(spec.gamma[0] == Approx(80.2 * deg).margin(0.05 * deg));
    REQUIRE(spec.gamma[1] == Approx(67.95 * deg).margin(0.05 * deg));
    REQUIRE(spec.gamma[2] == Approx(31.85 * deg).margin(0.05 * deg));
}

TEST_CASE("equilateral triangle") {
    const auto spec = build_polygon({1.3, 1.3, 1.3});
    for (int i = 0; i < 3; ++i) REQUIRE(spec.gamma[i] == Approx(60.0 * deg).margin(1e-12));
    REQUIRE(spec.vertex(1).x == Approx(2.6));
    REQUIRE(spec.vertex(2).x == Approx(1.3));
    REQUIRE(spec.vertex(2).y == Approx(2.6 * std::sin(60.0 * deg)));
}

TEST_CASE("degenerate and unsupported shapes are rejected") {
    REQUIRE_THROWS_AS(build_polygon({0.5, 0.5, 1.6}), DegenerateGeometry);
    REQUIRE_THROWS_AS(build_polygon({1.0, 1.0, 0.0}), DegenerateGeometry);
    REQUIRE_THROWS_AS(build_polygon({1.0, 1.0, 1.0, 2.0}), Unsupported);
    REQUIRE_THROWS_AS(build_polygon({1, 1, 1, 1, 1}), Unsupported);
}

TEST_CASE("angle sum and side reconstruction invariants") {
    for (auto f : {std::vector<double>{1.39, 2.595, 2.44}, {1.3, 1.3, 1.3},
                   {0.7, 1.9, 1.4}, {1.0, 1.0, 1e-6}}) {
        const auto spec = build_polygon(f);
        double sum = 0;
        for (double g : spec.gamma) sum += g;
        REQUIRE(std::abs(sum - (spec.n - 2) * kPi) < 1e-12);
        for (int i = 0; i < spec.n; ++i) {
            const double side = distance(spec.vertex(i), spec.vertex(i + 1));
            REQUIRE(std::abs(side - 2.0 * spec.f[i]) < 1e-12 * 2.0 * spec.f[i]);
        }
        // ccw orientation
        double area = 0;
        for (int i = 0; i < spec.n; ++i) area += cross(spec.vertex(i), spec.vertex(i + 1));
        REQUIRE(area > 0);
    }
}

TEST_CASE("square spec") {
    const auto spec = build_polygon({1.0, 1.0, 1.0, 1.0});
    REQUIRE(spec.n == 4);
    for (double g : spec.gamma) REQUIRE(g == Approx(kPi / 2));
    REQUIRE(spec.vertex(2).x == Approx(2.0));
    REQUIRE(spec.vertex(2).y == Approx(2.0));
}

TEST_CASE("scale equivariance with an exact binary factor") {
    const auto a = build_polygon({1.39, 2.595, 2.44});
    const auto b = build_polygon({2 * 1.39, 2 * 2.595, 2 * 2.44});
    for (int i = 0; i < 3; ++i) {
        REQUIRE(b.vertex(i).x == a.vertex(i).x * 2.0);
        REQUIRE(b.vertex(i).y == a.vertex(i).y * 2.0);
        REQUIRE(std::abs(b.gamma[i] - a.gamma[i]) < 1e-12);
    }
}

TEST_CASE("side frames: midpoints, rotation convention, polarity") {
    const auto spec = build_polygon({1.3, 1.3, 1.3});
    const auto frames = side_frames(spec);
    REQUIRE(frames.size() == 6);
    REQUIRE(frames[0].midpoint.x == Approx(1.3));
    REQUIRE(frames[0].midpoint.y == Approx(0.0).margin(1e-15));
    REQUIRE(frames[0].beta == Approx(kPi));  // negative side direction is -x
    REQUIRE(frames[0].polarity == Polarity::Right);
    REQUIRE(frames[1].polarity == Polarity::Left);
    // +focus at the ccw-first vertex
    REQUIRE(distance(frames[0].focus_pos(), spec.vertex(0)) < 1e-14);
    REQUIRE(distance(frames[0].focus_neg(), spec.vertex(1)) < 1e-14);

    const auto scalene = build_polygon({1.39, 2.595, 2.44});
    for (const auto& fr : side_frames(scalene)) {
        const Vec2 mid = (scalene.vertex(fr.i) + scalene.vertex(fr.j)) * 0.5;
        REQUIRE(distance(fr.midpoint, mid) < 1e-12);
    }
}

TEST_CASE("dashed rays partition the exterior") {
    const auto spec = build_polygon({1.3, 1.3, 1.3});
    const auto rays = dashed_rays(spec);
    REQUIRE(rays.size() == 6);
    for (const auto& r : rays) {
        // origin is a vertex, direction collinear with the side, pointing away
        REQUIRE(distance(r.origin, spec.vertex(r.vertex)) < 1e-14);
        const Vec2 a = spec.vertex(r.side), b = spec.vertex(r.side + 1);
        REQUIRE(std::abs(cross(r.direction, b - a)) < 1e-12);
        const Vec2 probe = r.origin + r.direction * 0.5;
        REQUIRE(!point_in_closed_polygon(spec, probe));
    }
    // equilateral: consecutive rays around the polygon alternate 60/120 degrees
    std::vector<double> dirs;
    for (const auto& r : rays) dirs.push_back(wrap_angle(std::atan2(r.direction.y, r.direction.x)));
    std::sort(dirs.begin(), dirs.end());
    for (size_t i = 0; i < dirs.size(); ++i) {
        const double gap = (i + 1 < dirs.size() ? dirs[i + 1] : dirs[0] + kTwoPi) - dirs[i];
        const bool ok60 = std::abs(gap - kPi / 3) < 1e-12;
        const bool ok120 = std::abs(gap - 2 * kPi / 3) < 1e-12;
        REQUIRE((ok60 || ok120));
    }

    REQUIRE(dashed_rays(build_polygon({1, 1, 1, 1})).size() == 8);
}

TEST_CASE("ray 1_31 makes the interior angle with side 12 at vertex 1") {
    const auto spec = build_polygon({1.39, 2.595, 2.44});
    const auto rays = dashed_rays(spec);
    const DashedRay* r131 = nullptr;
    for (const auto& r : rays)
        if (r.vertex == 0 && r.side == 2) r131 = &r;
    REQUIRE(r131 != nullptr);
    REQUIRE(r131->label(3) == "1_31");
    const Vec2 neg_side12 = (spec.vertex(0) - spec.vertex(1)).unit();
    const double ang = std::acos(clamp_unit(dot(r131->direction, neg_side12)));
    REQUIRE(ang == Approx(spec.gamma[0]).margin(1e-12));
}
