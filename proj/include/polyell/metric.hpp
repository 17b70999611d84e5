#pragma once

#include <random>

#include "polyell/atlas.hpp"

namespace polyell {

enum class DiffMode { Analytic, FiniteDifference };

struct MetricSample {
    CommonCoord at;
    double dx_dmu = 0, dx_dtheta = 0, dy_dmu = 0, dy_dtheta = 0;
    double H_mu = 0, H_theta = 0;
    double g12 = 0;  // off-diagonal metric entry
};

namespace detail {

/// Distance from theta to the nearest angular sector boundary (wrapped).
inline double boundary_distance(const SectorTable& t, double theta) {
    const double th = wrap_angle(theta);
    double best = std::numeric_limits<double>::infinity();
    for (double b : t.base_boundaries()) {
        double d = std::abs(th - b);
        d = std::min(d, kTwoPi - d);
        best = std::min(best, d);
    }
    return best;
}

/// Distance in ae_c from the near/far switch radius at this angle
/// (+inf inside true sectors).
inline double switch_distance(const SectorTable& t, const CommonCoord& c) {
    const double ae_c = t.ae_from_mu(c.mu);
    const int si = t.sector_index(c.theta, ae_c);
    const Sector& s = t.sectors[si];
    if (s.kind == SectorKind::True) return std::numeric_limits<double>::infinity();
    const Sector* ns = &s;
    if (s.kind == SectorKind::Wedge) {
        // the governing ray curve is the one of the near sector at this angle
        const double th = wrap_angle(c.theta);
        ns = nullptr;
        for (int idx : t.base_sector_indices()) {
            const Sector& cand = t.sectors[idx];
            if (cand.far_partner == si && th >= cand.lo && th <= cand.hi) { ns = &cand; break; }
        }
        if (ns == nullptr) return std::numeric_limits<double>::infinity();
    }
    const double sw = t.switch_ae_c(*ns, c.theta);
    if (!std::isfinite(sw)) return std::numeric_limits<double>::infinity();
    return std::abs(ae_c - sw);
}

}  // namespace detail

inline MetricSample jacobian(const SectorTable& t, const CommonCoord& c,
                             DiffMode mode = DiffMode::Analytic) {
    if (!(c.mu > 0.0)) throw OutOfDomain("jacobian requires mu > 0");
    MetricSample m;
    m.at = c;
    if (mode == DiffMode::Analytic) {
        if (detail::boundary_distance(t, c.theta) < 1e-13 ||
            detail::switch_distance(t, c) < 1e-12 * t.P)
            throw BoundaryPoint("analytic derivative requested on a sector boundary");
        const Sector& s = t.sectors[t.sector_index(c.theta, t.ae_from_mu(c.mu))];
        Vec2 dm, dt;
        t.partials(s, c, dm, dt);
        m.dx_dmu = dm.x;
        m.dy_dmu = dm.y;
        m.dx_dtheta = dt.x;
        m.dy_dtheta = dt.y;
    } else {
        const double h = 1e-6 * std::max(1.0, c.mu);
        auto F = [&](double mu, double th) { return t.forward(CommonCoord{mu, th}); };
        const int center = t.sector_index(c.theta, t.ae_from_mu(c.mu));
        auto same = [&](double mu, double th) {
            return t.sector_index(th, t.ae_from_mu(mu)) == center;
        };
        // one-sided second-order stencils whenever the centered one would
        // straddle a sector boundary or a ray curve
        Vec2 dth;
        if (same(c.mu, c.theta + h) && same(c.mu, c.theta - h)) {
            dth = (F(c.mu, c.theta + h) - F(c.mu, c.theta - h)) / (2.0 * h);
        } else if (same(c.mu, c.theta + h)) {
            dth = (F(c.mu, c.theta) * (-3.0) + F(c.mu, c.theta + h) * 4.0 -
                   F(c.mu, c.theta + 2 * h)) / (2.0 * h);
        } else {
            dth = (F(c.mu, c.theta) * 3.0 - F(c.mu, c.theta - h) * 4.0 +
                   F(c.mu, c.theta - 2 * h)) / (2.0 * h);
        }
        Vec2 dmu;
        if (c.mu > 2 * h && same(c.mu + h, c.theta) && same(c.mu - h, c.theta)) {
            dmu = (F(c.mu + h, c.theta) - F(c.mu - h, c.theta)) / (2.0 * h);
        } else if (same(c.mu + h, c.theta) || c.mu <= 2 * h) {
            dmu = (F(c.mu, c.theta) * (-3.0) + F(c.mu + h, c.theta) * 4.0 -
                   F(c.mu + 2 * h, c.theta)) / (2.0 * h);
        } else {
            dmu = (F(c.mu, c.theta) * 3.0 - F(c.mu - h, c.theta) * 4.0 +
                   F(c.mu - 2 * h, c.theta)) / (2.0 * h);
        }
        m.dx_dmu = dmu.x;
        m.dy_dmu = dmu.y;
        m.dx_dtheta = dth.x;
        m.dy_dtheta = dth.y;
    }
    m.H_mu = std::hypot(m.dx_dmu, m.dy_dmu);
    m.H_theta = std::hypot(m.dx_dtheta, m.dy_dtheta);
    m.g12 = m.dx_dmu * m.dx_dtheta + m.dy_dmu * m.dy_dtheta;
    return m;
}

/// (H_mu, H_theta) from the per-sector closed forms; continuous across
/// boundaries.
inline std::pair<double, double> scale_factors(const SectorTable& t, const CommonCoord& c) {
    if (!(c.mu > 0.0)) throw OutOfDomain("scale factors require mu > 0");
    const Sector& s = t.sectors[t.sector_index(c.theta, t.ae_from_mu(c.mu))];
    Vec2 dm, dt;
    t.partials(s, c, dm, dt);
    return {dm.norm(), dt.norm()};
}

/// Per-sector factorization H_theta^2 = g1(theta) [h1(mu) + h2(theta)],
/// H_mu^2 = g2(mu) [h1(mu) + h2(theta)], in the gauge g1 = 1 on wedge and
/// true sectors with h1 = (P cosh(mu) + delta)^2.
struct StackelFactors {
    std::string sector_id;
    SectorKind kind = SectorKind::True;
    double P = 0;
    double f_loc = 0, c0 = 0, u = 0, v = 0, delta = 0;

    double g1(double theta) const {
        if (kind == SectorKind::True || kind == SectorKind::Wedge) return 1.0;
        const double C = (u + v * std::cos(theta - c0)) / f_loc;
        const double dC = -(v / f_loc) * std::sin(theta - c0);
        return dC * dC / std::max(1.0 - C * C, 1e-300);
    }

    double h2(double theta) const {
        double C;
        if (kind == SectorKind::True || kind == SectorKind::Wedge)
            C = std::cos(theta - c0);
        else
            C = (u + v * std::cos(theta - c0)) / f_loc;
        return -f_loc * f_loc * C * C;
    }

    double h1(double mu) const {
        const double ae = P * std::cosh(mu) + delta;
        return ae * ae;
    }

    double g2(double mu) const {
        const double ae = P * std::cosh(mu) + delta;
        if (degenerate_at_zero()) {
            return P * (std::cosh(mu) + 1.0) / (ae + f_loc);
        }
        const double sh = std::sinh(mu);
        return P * P * sh * sh / (ae * ae - f_loc * f_loc);
    }

    /// g2'(mu) / (2 g2(mu)); finite at mu = 0 in charts that degenerate onto
    /// their side, singular (~1/mu) in wedge charts.
    double half_dlog_g2(double mu) const {
        const double ae = P * std::cosh(mu) + delta;
        const double sh = std::sinh(mu);
        if (degenerate_at_zero())
            return 0.5 * sh * (1.0 / (std::cosh(mu) + 1.0) - P / (ae + f_loc));
        const double ch = std::cosh(mu);
        return ch / sh - ae * P * sh / (ae * ae - f_loc * f_loc);
    }

    bool degenerate_at_zero() const { return std::abs(delta + P - f_loc) < 1e-12 * P; }
};

inline StackelFactors stackel_factors(const SectorTable& t, int sector_index) {
    const Sector& s = t.sectors[sector_index];
    StackelFactors sf;
    sf.sector_id = s.id;
    sf.kind = s.kind;
    sf.P = t.P;
    sf.f_loc = s.f_loc;
    sf.c0 = s.c0;
    sf.u = s.u;
    sf.v = s.v;
    sf.delta = s.delta;

    // internal consistency gate: products must reproduce the Jacobian H^2
    const double th = wrap_angle(s.width() > 1e-9 ? s.lo + 0.37 * s.width() : s.lo);
    for (double mu : {0.4, 1.3}) {
        CommonCoord c{mu, th};
        Vec2 dm, dt;
        t.partials(s, c, dm, dt);
        const double H2t = dot(dt, dt), H2m = dot(dm, dm);
        const double hh = sf.h1(mu) + sf.h2(th);
        if (std::abs(sf.g1(th) * hh - H2t) > 1e-8 * std::max(1.0, H2t) ||
            std::abs(sf.g2(mu) * hh - H2m) > 1e-8 * std::max(1.0, H2m))
            throw SeparabilityFailure("Stackel products disagree with the Jacobian");
    }
    return sf;
}

inline StackelFactors stackel_factors(const SectorTable& t, const std::string& sector_id) {
    return stackel_factors(t, t.sector_index_by_id(sector_id));
}

/// Admissible mu-range of a sector at a given angle (the 2D region of its
/// closed form): (0, mu_switch) for compressed sectors, (mu_switch, inf) for
/// wedges, (0, inf) for true sectors.
inline std::pair<double, double> sector_mu_range(const SectorTable& t, int sector_index,
                                                 double theta) {
    const Sector& s = t.sectors[sector_index];
    const double inf = std::numeric_limits<double>::infinity();
    if (s.kind == SectorKind::True) return {0.0, inf};
    if (s.kind != SectorKind::Wedge) {
        const double sw = t.switch_ae_c(s, theta);
        return {0.0, std::isfinite(sw) ? t.mu_from_ae(std::max(sw, t.P)) : inf};
    }
    const double th = wrap_angle(theta);
    for (int idx : t.base_sector_indices()) {
        const Sector& cand = t.sectors[idx];
        if (cand.far_partner == sector_index && th >= cand.lo && th <= cand.hi) {
            const double sw = t.switch_ae_c(cand, th);
            return {std::isfinite(sw) ? t.mu_from_ae(std::max(sw, t.P)) : inf, inf};
        }
    }
    return {0.0, inf};
}

/// Max normalized mixed-difference residual of S = H_theta^2 / g1 over
/// random in-sector quadruples; S must split as h1(mu) + h2(theta).
inline double separability_residual(const SectorTable& t, int quadruples_per_sector = 800,
                                    unsigned seed = 20240601u) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    double worst = 0.0;
    for (int si = 0; si < static_cast<int>(t.sectors.size()); ++si) {
        const Sector& s = t.sectors[si];
        if (s.width() < 1e-9) continue;
        const StackelFactors sf = stackel_factors(t, si);
        const double m = 1e-3 * s.width();
        auto S = [&](double mu, double th) {
            CommonCoord c{mu, wrap_angle(th)};
            Vec2 dm, dt;
            t.partials(s, c, dm, dt);
            return dot(dt, dt) / sf.g1(wrap_angle(th));
        };
        int made = 0, tries = 0;
        while (made < quadruples_per_sector && tries < 20 * quadruples_per_sector) {
            ++tries;
            const double ta = s.lo + m + (s.width() - 2 * m) * un(rng);
            const double tb = s.lo + m + (s.width() - 2 * m) * un(rng);
            auto ra = sector_mu_range(t, si, wrap_angle(ta));
            auto rb = sector_mu_range(t, si, wrap_angle(tb));
            double lo = std::max({ra.first, rb.first, 0.02});
            double hi = std::min({ra.second, rb.second, 3.0});
            if (s.kind == SectorKind::Wedge) hi = std::min(lo + 1.5, 4.0);
            if (!(hi > lo + 0.05)) continue;
            const double m1 = lo + (hi - lo) * un(rng);
            const double m2 = lo + (hi - lo) * un(rng);
            const double s11 = S(m1, ta), s12 = S(m1, tb), s21 = S(m2, ta), s22 = S(m2, tb);
            const double scale = std::max({std::abs(s11), std::abs(s12), std::abs(s21),
                                           std::abs(s22), 1.0});
            worst = std::max(worst, std::abs(s11 - s12 - s21 + s22) / scale);
            ++made;
        }
    }
    return worst;
}

}  // namespace polyell
