#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "polyell/metric.hpp"

using namespace polyell;
using Catch::Approx;

namespace {
const std::vector<double> kScaleneF{1.39, 2.595, 2.44};
const std::vector<double> kEquiF{1.3, 1.3, 1.3};
const std::vector<double> kSquareF{1.0, 1.0, 1.0, 1.0};
}  // namespace

TEST_CASE("scale factors in the wedge sector match the closed forms") {
    const auto spec = build_polygon(kScaleneF);
    const auto t = SectorTable::build(spec);
    const double f1 = spec.f[0], f2 = spec.f[1], f3 = spec.f[2];
    const double tv1 = t.theta_v1;
    const StackelFactors sf = stackel_factors(t, t.sector_index_by_id("A2b"));

    // H_theta^2 = (f1+f3)^2 cosh^2(mu) - f2^2 cos^2(theta - theta_v1)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> umu(0.1, 2.5), uth(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = umu(rng), th = tv1 + uth(rng);
        const double expect_t = (f1 + f3) * (f1 + f3) * std::cosh(mu) * std::cosh(mu) -
                                f2 * f2 * std::cos(th - tv1) * std::cos(th - tv1);
        const double got_t = sf.g1(th) * (sf.h1(mu) + sf.h2(th));
        REQUIRE(got_t == Approx(expect_t).epsilon(1e-12));
        // the radial factor carries sinh^2(mu) so that H_mu^2 matches the
        // actual Jacobian (the bare quotient form fails the classical limit)
        const double expect_m = (f1 + f3) * (f1 + f3) * std::sinh(mu) * std::sinh(mu) /
                                ((f1 + f3) * (f1 + f3) * std::cosh(mu) * std::cosh(mu) - f2 * f2) *
                                expect_t;
        const double got_m = sf.g2(mu) * (sf.h1(mu) + sf.h2(th));
        REQUIRE(got_m == Approx(expect_m).epsilon(1e-12));
    }
    // spot value from direct substitution at theta = theta_v1
    const double mu = 1.1;
    REQUIRE(sf.h1(mu) + sf.h2(tv1) ==
            Approx((f1 + f3) * (f1 + f3) * std::cosh(mu) * std::cosh(mu) - f2 * f2));
}

TEST_CASE("analytic and finite-difference Jacobians agree") {
    for (auto f : {kScaleneF, kSquareF}) {
        const auto t = SectorTable::build(build_polygon(f));
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> umu(0.05, 3.5), uth(0.0, kTwoPi);
        int done = 0;
        while (done < 1000) {
            const CommonCoord c{umu(rng), uth(rng)};
            MetricSample ma;
            try {
                ma = jacobian(t, c, DiffMode::Analytic);
            } catch (const BoundaryPoint&) {
                continue;
            }
            const MetricSample mf = jacobian(t, c, DiffMode::FiniteDifference);
            REQUIRE(ma.H_mu == Approx(mf.H_mu).epsilon(1e-6));
            REQUIRE(ma.H_theta == Approx(mf.H_theta).epsilon(1e-6));
            ++done;
        }
    }
}

TEST_CASE("orthogonality of the coordinate net") {
    for (auto f : {kScaleneF, kEquiF, kSquareF}) {
        const auto t = SectorTable::build(build_polygon(f));
        for (int i = 1; i <= 30; ++i) {
            const double mu = 4.0 * i / 30;
            for (int j = 0; j < 30; ++j) {
                const double th = kTwoPi * (j + 0.417) / 30;
                const MetricSample mf = jacobian(t, CommonCoord{mu, th},
                                                 DiffMode::FiniteDifference);
                REQUIRE(std::abs(mf.g12) / (mf.H_mu * mf.H_theta) < 1e-7);
                try {
                    const MetricSample ma = jacobian(t, CommonCoord{mu, th});
                    REQUIRE(std::abs(ma.g12) / (ma.H_mu * ma.H_theta) < 1e-10);
                } catch (const BoundaryPoint&) {
                }
            }
        }
    }
}

TEST_CASE("analytic mode rejects boundary points") {
    const auto t = SectorTable::build(build_polygon(kScaleneF));
    REQUIRE_THROWS_AS(jacobian(t, CommonCoord{1.0, t.base_boundaries()[1]}), BoundaryPoint);
    REQUIRE_THROWS_AS(jacobian(t, CommonCoord{0.0, 1.0}), OutOfDomain);
}

TEST_CASE("scale-factor profile: continuity and periodicity") {
    for (auto f : {kScaleneF, kEquiF}) {
        const auto t = SectorTable::build(build_polygon(f));
        const double mu = 1.1;
        const int n = 4096;
        std::vector<double> ht2(n);
        for (int i = 0; i < n; ++i) {
            const auto [hm, ht] = scale_factors(t, CommonCoord{mu, kTwoPi * i / n});
            ht2[i] = ht * ht;
        }
        // the profile is continuous: neighbor jumps vanish under refinement
        double scale = 0;
        for (double v : ht2) scale = std::max(scale, std::abs(v));
        for (int i = 0; i < n; ++i) {
            const double jump = std::abs(ht2[(i + 1) % n] - ht2[i]);
            REQUIRE(jump < 0.02 * scale);
        }
        // values at theta and theta + 2pi agree exactly
        const auto [hm0, ht0] = scale_factors(t, CommonCoord{mu, 0.123});
        const auto [hm1, ht1] = scale_factors(t, CommonCoord{mu, 0.123 + kTwoPi});
        REQUIRE(ht0 == Approx(ht1).epsilon(1e-12));
    }
    // equilateral: 2pi/3-periodic profile
    const auto t = SectorTable::build(build_polygon(kEquiF));
    for (int i = 0; i < 200; ++i) {
        const double th = kTwoPi * i / 200 + 0.004;
        const auto [a_m, a_t] = scale_factors(t, CommonCoord{1.1, wrap_angle(th)});
        const auto [b_m, b_t] = scale_factors(t, CommonCoord{1.1, wrap_angle(th + kTwoPi / 3)});
        REQUIRE(std::abs(a_t - b_t) < 1e-9 * std::max(1.0, a_t));
        REQUIRE(std::abs(a_m - b_m) < 1e-9 * std::max(1.0, a_m));
    }
}

TEST_CASE("scale factors are continuous across sector boundaries") {
    for (auto f : {kScaleneF, kSquareF}) {
        const auto t = SectorTable::build(build_polygon(f));
        for (double b : t.base_boundaries()) {
            for (double mu : {0.3, 1.1, 2.4}) {
                const auto [lm, lt] = scale_factors(t, CommonCoord{mu, wrap_angle(b - 1e-12)});
                const auto [rm, rt] = scale_factors(t, CommonCoord{mu, wrap_angle(b + 1e-12)});
                REQUIRE(std::abs(lt - rt) < 1e-9 * std::max(1.0, lt));
                REQUIRE(std::abs(lm - rm) < 1e-9 * std::max(1.0, lm));
            }
        }
    }
}

TEST_CASE("both scale factors share the separation bracket") {
    const auto t = SectorTable::build(build_polygon(kScaleneF));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int si = 0; si < static_cast<int>(t.sectors.size()); ++si) {
        const Sector& s = t.sectors[si];
        if (s.width() < 1e-9) continue;
        const StackelFactors sf = stackel_factors(t, si);
        for (int i = 0; i < 50; ++i) {
            const double th = wrap_angle(s.lo + s.width() * (0.05 + 0.9 * u(rng)));
            const auto range = sector_mu_range(t, si, th);
            const double lo = std::max(range.first, 0.05);
            const double hi = std::min(range.second, lo + 2.0);
            if (!(hi > lo + 0.05)) continue;
            const double mu = lo + (hi - lo) * u(rng);
            Vec2 dm, dt;
            t.partials(s, CommonCoord{mu, th}, dm, dt);
            const double bt = dot(dt, dt) / sf.g1(th);
            const double bm = dot(dm, dm) / sf.g2(mu);
            REQUIRE(std::abs(bt - bm) < 1e-10 * std::max(1.0, std::abs(bt)));
            REQUIRE(sf.g1(th) > 0);
            REQUIRE(sf.g2(mu) > 0);
            REQUIRE(sf.h1(mu) + sf.h2(th) > 0);
        }
    }
}

TEST_CASE("mixed-difference separability") {
    REQUIRE(separability_residual(SectorTable::build(build_polygon(kScaleneF)), 800) < 1e-8);
    REQUIRE(separability_residual(SectorTable::build(build_polygon(kSquareF)), 800) < 1e-8);
}

TEST_CASE("classical elliptic control: exact separability") {
    // S = H^2 = f^2 (cosh^2 mu - cos^2 theta) splits exactly
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> umu(0.05, 3.0), uth(0.0, kTwoPi);
    auto S = [](double mu, double th) {
        return 1.7 * 1.7 * (std::cosh(mu) * std::cosh(mu) - std::cos(th) * std::cos(th));
    };
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const double m1 = umu(rng), m2 = umu(rng), t1 = uth(rng), t2 = uth(rng);
        const double r = S(m1, t1) - S(m1, t2) - S(m2, t1) + S(m2, t2);
        worst = std::max(worst, std::abs(r) / S(m1, t1));
    }
    REQUIRE(worst < 1e-12);
}

TEST_CASE("Stackel factors approach the classical elliptic pair in the thin limit") {
    const auto t = SectorTable::build(build_polygon({1.0, 1.0, 1e-6}));
    const StackelFactors sf = stackel_factors(t, t.sector_index_by_id("A2b"));
    for (double mu : {0.3, 1.0, 2.0}) {
        for (double dth : {-0.5, 0.2, 0.9}) {
            const double th = t.theta_v1 + dth;
            const double classical = std::cosh(mu) * std::cosh(mu) -
                                     std::cos(th - t.theta_v1) * std::cos(th - t.theta_v1);
            // P -> 1, f2 -> 1: h1 + h2 -> cosh^2 - cos^2 up to O(f3)
            REQUIRE(sf.h1(mu) + sf.h2(th) == Approx(classical).epsilon(1e-4));
        }
    }
}

TEST_CASE("stackel_factors validates every sector") {
    for (auto f : {kScaleneF, kEquiF, kSquareF}) {
        const auto t = SectorTable::build(build_polygon(f));
        for (int si = 0; si < static_cast<int>(t.sectors.size()); ++si)
            REQUIRE_NOTHROW(stackel_factors(t, si));
    }
}
