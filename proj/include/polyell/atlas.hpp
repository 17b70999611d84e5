#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyell/local_chart.hpp"

namespace polyell {

/// Common polyelliptic coordinates. mu >= 0, theta in [0, 2*pi);
/// the common radial semi-axis is ae_c = P * cosh(mu) with P = f[0] + f[n-1]
/// (the two sides meeting at vertex 0). mu = 0 is the polygon perimeter and
/// theta = 0 the angular isoline through vertex 0.
struct CommonCoord {
    double mu = 0.0;
    double theta = 0.0;
};

enum class SectorKind { True, NearF, NearB, Wedge };

/// One closed-form coefficient entry of the atlas. Every sector evaluates
///   A = ae * cos(theta_loc),  B = sqrt(ae^2 - f_loc^2) * sin(theta_loc)
/// in its source frame, with ae = ae_c + delta and theta_loc either linear
/// (theta - c0; true and wedge sectors) or given through the boundary-
/// matching relation cos(theta_loc) = (u + v*cos(theta - c0)) / f_loc
/// (compressed sectors).
struct Sector {
    std::string id;
    SectorKind kind = SectorKind::True;
    LocalFrame frame;
    double delta = 0.0;  // radial chain offset: local ae = ae_c + delta
    double f_loc = 0.0;
    double c0 = 0.0;
    double u = 0.0, v = 0.0;  // compressed sectors only
    double gap0 = 0.0;          // ae(0) - f_loc, snapped to 0 for side charts
    double lo = 0.0, hi = 0.0;  // angular span (wedges wrap past 2*pi)
    int far_partner = -1;       // compressed -> wedge sector index
    // Bounding dashed ray of a compressed sector, expressed in the sector's
    // chart: ah = ray_sF * f * (f + ae*ray_chi) / (ae + f*ray_chi).
    DashedRay ray;
    double ray_sF = 0.0, ray_chi = 0.0;

    bool linear() const { return kind == SectorKind::True || kind == SectorKind::Wedge; }
    double width() const { return hi - lo; }

    /// cos(theta_loc) at a common angle (compressed sectors).
    double cosine(double theta) const { return (u + v * std::cos(theta - c0)) / f_loc; }
};

struct HyperbolaRange {
    double lo = 0.0, hi = 0.0;  // admissible ah/f of uncut hyperbolas
    double width() const { return hi - lo; }
};

/// Dashed-ray identifier: extension of `side` beyond `vertex`.
struct RayId {
    int vertex = 0;
    int side = 0;
};

class SectorTable {
public:
    PolygonSpec spec;
    double P = 0.0;        // f[0] + f[n-1]; ae_c = P cosh(mu)
    double theta_v1 = 0.0; // angle of the vertex-0 isoline in the wedge chart
    double phi1 = 0.0;     // width of the first compressed interval
    std::vector<Sector> sectors;

    static SectorTable build(const PolygonSpec& spec) {
        if (spec.n == 3) return build_triangle(spec);
        if (spec.n == 4) return build_square(spec);
        throw Unsupported("sector tables exist for the triangle and the square only");
    }

    // ---- radial coordinate -------------------------------------------------

    double ae_from_mu(double mu) const {
        if (mu < 0.0) throw OutOfDomain("mu must be non-negative");
        return P * std::cosh(mu);
    }

    double mu_from_ae(double ae_c) const {
        if (ae_c < P * (1.0 - 1e-12)) throw OutOfDomain("ae_c below its minimum f1+f3");
        return guarded_acosh(ae_c / P);
    }

    double local_ae_from_common(const Sector& s, double ae_c) const {
        if (ae_c < P * (1.0 - 1e-12)) throw OutOfDomain("ae_c below its minimum f1+f3");
        return ae_c + s.delta;
    }

    /// Common semi-axis at which a compressed sector meets its bounding ray
    /// (the near/far switch radius); +inf when the sector extends to infinity
    /// at this angle.
    double switch_ae_c(const Sector& s, double theta) const {
        const double C = clamp_unit(s.cosine(theta));
        const double den = C - s.ray_sF * s.ray_chi;
        const double num = s.f_loc * (s.ray_sF - C * s.ray_chi);
        if (den == 0.0) return std::numeric_limits<double>::infinity();
        const double ae_loc = num / den;
        if (ae_loc < s.f_loc) return std::numeric_limits<double>::infinity();
        return ae_loc - s.delta;
    }

    // ---- sector lookup -----------------------------------------------------

    /// Sector containing (theta, ae_c); theta is wrapped. Points exactly on
    /// an angular boundary resolve to the lower-theta interval; points
    /// exactly on a ray curve resolve to the near (strip) sector.
    int sector_index(double theta, double ae_c) const {
        const double th = wrap_angle(theta);
        const int si = base_sector_lookup(th);
        const Sector& s = sectors[si];
        if (s.kind == SectorKind::True) return si;
        if (ae_c <= switch_ae_c(s, th)) return si;
        return s.far_partner;
    }

    const Sector& sector_at(double theta, double ae_c) const {
        return sectors[sector_index(theta, ae_c)];
    }

    // ---- forward map -------------------------------------------------------

    /// sqrt(ae^2 - f_loc^2) in a cancellation-free form (exact 0 on the
    /// perimeter for charts that degenerate onto their side).
    double minor_radius(const Sector& s, double mu) const {
        const double sh2 = std::sinh(0.5 * mu);
        const double gap = s.gap0 + 2.0 * P * sh2 * sh2;
        const double ae = P * std::cosh(mu) + s.delta;
        return std::sqrt(std::max(0.0, gap * (ae + s.f_loc)));
    }

    /// (A, B) chart coefficients of one sector at (mu, theta).
    Vec2 coefficients(const Sector& s, double mu, double theta) const {
        const double ae = P * std::cosh(mu) + s.delta;
        const double q = minor_radius(s, mu);
        if (s.linear()) {
            const double a = theta - s.c0;
            return {ae * std::cos(a), q * std::sin(a)};
        }
        const double C = clamp_unit(s.cosine(theta));
        return {ae * C, q * std::sqrt(std::max(0.0, 1.0 - C * C))};
    }

    Vec2 forward_in(const Sector& s, const CommonCoord& c) const {
        if (c.mu < 0.0) throw OutOfDomain("mu must be non-negative");
        return s.frame.to_global(coefficients(s, c.mu, c.theta));
    }

    Vec2 forward(const CommonCoord& c) const {
        const double ae_c = ae_from_mu(c.mu);
        return forward_in(sectors[sector_index(c.theta, ae_c)], c);
    }

    /// Analytic partial derivatives of the forward map w.r.t. (mu, theta).
    /// Valid for mu > 0 strictly inside a sector.
    void partials(const Sector& s, const CommonCoord& c, Vec2& d_mu, Vec2& d_theta) const {
        const double ae = ae_from_mu(c.mu) + s.delta;
        const double dae = P * std::sinh(c.mu);
        const double q = minor_radius(s, c.mu);
        double dA_mu, dB_mu, dA_th, dB_th;
        if (s.linear()) {
            const double a = c.theta - s.c0;
            const double ca = std::cos(a), sa = std::sin(a);
            dA_mu = dae * ca;
            dB_mu = ae * dae * sa / q;
            dA_th = -ae * sa;
            dB_th = q * ca;
        } else {
            const double C = clamp_unit(s.cosine(c.theta));
            const double S = std::sqrt(std::max(0.0, 1.0 - C * C));
            const double dC = -(s.v / s.f_loc) * std::sin(c.theta - s.c0);
            dA_mu = dae * C;
            dB_mu = ae * dae * S / q;
            dA_th = ae * dC;
            dB_th = -q * C * dC / std::max(S, 1e-300);
        }
        d_mu = rotate(s.frame.beta, Vec2{dA_mu, dB_mu});
        d_theta = rotate(s.frame.beta, Vec2{dA_th, dB_th});
    }

    // ---- inverse map -------------------------------------------------------

    /// Closed-form inverse with a safeguarded Newton polish. Throws
    /// ProtectedRegion for points inside or on the polygon.
    std::pair<CommonCoord, int> inverse(const Vec2& p) const {
        if (point_in_closed_polygon(spec, p)) throw ProtectedRegion("point inside the polygon");

        const int n = spec.n;
        std::vector<bool> outside(n);
        for (int i = 0; i < n; ++i) outside[i] = outside_margin(spec, i, p) > 0.0;

        int sector_idx = -1;
        CommonCoord c;
        int wedge_vertex = -1;
        for (int v = 0; v < n; ++v)
            if (outside[(v + n - 1) % n] && outside[v]) { wedge_vertex = v; break; }

        if (wedge_vertex >= 0) {
            const int si = wedge_sector_[wedge_vertex];
            const Sector& s = sectors[si];
            const SemiAxes ax = semi_axes(s.frame, p);
            const double t = std::acos(clamp_unit(ax.ah / s.f_loc));
            c.theta = wrap_angle(s.c0 - t);
            c.mu = mu_from_ae(std::max(P, ax.ae - s.delta));
            sector_idx = si;
        } else {
            int side = -1;
            for (int i = 0; i < n; ++i)
                if (outside[i]) { side = i; break; }
            if (side < 0) throw ProtectedRegion("point inside the polygon");
            const auto& trio = strip_sectors_[side];  // {nearF, true, nearB}
            const Sector& any = sectors[trio[1]];
            const LocalCoord lc = cartesian_to_local(any.frame, p);
            const double g_lo = spec.angle(side);
            const double g_hi = kPi - spec.angle(side + 1);
            const Sector* s;
            if (lc.theta < g_lo)
                s = &sectors[sector_idx = trio[0]];
            else if (lc.theta > g_hi)
                s = &sectors[sector_idx = trio[2]];
            else
                s = &sectors[sector_idx = trio[1]];
            if (s->linear()) {
                c.theta = wrap_angle(lc.theta + s->c0);
            } else {
                const double arg = clamp_unit((s->f_loc * std::cos(lc.theta) - s->u) / s->v);
                c.theta = wrap_angle(s->c0 - std::acos(arg));
            }
            const SemiAxes ax = semi_axes(any.frame, p);
            c.mu = mu_from_ae(std::max(P, ax.ae - s->delta));
        }

        polish(c, p);
        return {c, sector_idx};
    }

    // ---- helpers for tests, solvers and rendering --------------------------

    const std::vector<double>& base_boundaries() const { return base_bounds_; }
    const std::vector<int>& base_sector_indices() const { return base_sector_; }
    const std::vector<double>& far_boundaries() const { return far_bounds_; }
    const std::vector<int>& far_sector_indices() const { return far_sector_; }
    const std::vector<int>& wedge_sector_indices() const { return wedge_sector_; }
    const std::vector<int>& true_sector_indices() const { return true_sector_; }
    /// theta values of the vertex isolines (vertex k at anchor[k]).
    const std::vector<double>& vertex_anchors() const { return anchors_; }

    int sector_index_by_id(const std::string& id) const {
        for (int i = 0; i < static_cast<int>(sectors.size()); ++i)
            if (sectors[i].id == id) return i;
        throw OutOfRange("unknown sector id: " + id);
    }

private:
    std::vector<double> base_bounds_;  // ascending, first 0, last 2*pi
    std::vector<int> base_sector_;     // near/true sector per base interval
    std::vector<double> far_bounds_;
    std::vector<int> far_sector_;
    std::vector<int> wedge_sector_;            // per vertex
    std::vector<std::array<int, 3>> strip_sectors_;  // per side: {nearF, true, nearB}
    std::vector<int> true_sector_;
    std::vector<double> anchors_;

    /// Near/true sector owning a wrapped angle. Exact hits on an interior
    /// boundary resolve to the lower interval, except that zero-width true
    /// sectors (square) own their boundary angle.
    int base_sector_lookup(double th) const {
        const auto tb = true_on_bound_.find(th);
        if (tb != true_on_bound_.end()) return tb->second;
        const auto it = std::upper_bound(base_bounds_.begin(), base_bounds_.end(), th);
        int k = static_cast<int>(it - base_bounds_.begin()) - 1;
        if (k > 0 && th == base_bounds_[k]) --k;
        if (k < 0) k = 0;
        const int m = static_cast<int>(base_sector_.size());
        if (k >= m) k = m - 1;
        return base_sector_[k];
    }

    std::map<double, int> true_on_bound_;  // boundary theta -> true sector (square)

    friend SectorTable build_sector_table(const PolygonSpec&);

    void set_ray_params(Sector& s) const {
        const double f = s.f_loc;
        const Vec2 fp = s.frame.focus_pos();
        const Vec2 fn = s.frame.focus_neg();
        const double tol = 1e-9 * f;
        const bool on_pos = std::abs(cross(s.ray.direction, fp - s.ray.origin)) < tol;
        s.ray_sF = on_pos ? 1.0 : -1.0;
        const Vec2 axis = on_pos ? (fp - fn).unit() : (fn - fp).unit();
        s.ray_chi = dot(s.ray.direction, axis);
    }

    DashedRay find_ray(const std::vector<DashedRay>& rays, int vertex, int side) const {
        for (const auto& r : rays)
            if (r.vertex == vertex && r.side == side) return r;
        throw OutOfRange("no such dashed ray");
    }

    static SectorTable build_triangle(const PolygonSpec& spec);
    static SectorTable build_square(const PolygonSpec& spec);

    void polish(CommonCoord& c, const Vec2& p) const {
        const double scale = std::max(P, p.norm());
        const double tol = 1e-12 * scale;
        double r = (forward(c) - p).norm();
        for (int it = 0; it < 50 && r > tol; ++it) {
            const Sector& s = sectors[sector_index(c.theta, ae_from_mu(c.mu))];
            Vec2 jm, jt;
            partials(s, c, jm, jt);
            const Vec2 res = p - forward_in(s, c);
            const double det = jm.x * jt.y - jt.x * jm.y;
            if (std::abs(det) < 1e-300) break;
            const double dmu = (res.x * jt.y - jt.x * res.y) / det;
            const double dth = (jm.x * res.y - res.x * jm.y) / det;
            double step = 1.0;
            bool improved = false;
            for (int back = 0; back < 5; ++back, step *= 0.5) {
                CommonCoord trial{std::max(0.0, c.mu + step * dmu),
                                  wrap_angle(c.theta + step * dth)};
                const double rt = (forward(trial) - p).norm();
                if (rt < r) {
                    c = trial;
                    r = rt;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (r > 1e-9 * scale)
            throw NoConvergence("inverse polish failed to reach tolerance");
    }
};

// ---- construction ----------------------------------------------------------

inline SectorTable SectorTable::build_triangle(const PolygonSpec& spec) {
    SectorTable t;
    t.spec = spec;
    const double f0 = spec.f[0], f1 = spec.f[1], f2 = spec.f[2];
    const double g0 = spec.gamma[0], g1 = spec.gamma[1], g2 = spec.gamma[2];
    t.P = f0 + f2;
    const double t1 = std::acos(clamp_unit((f2 - f0) / f1));
    const double t2 = std::acos(clamp_unit((f0 - f1) / f2));
    const double t3 = std::acos(clamp_unit((f1 - f2) / f0));
    t.theta_v1 = t1;
    t.phi1 = t1 - g2;

    const double B1 = t1 - g2;
    const double B2 = t1;
    const double A2 = t1 + g0 + g1 - t2;  // vertex-1 anchor
    const double B3 = t1 + g1;
    const double B4 = t1 + g0 + g1;
    const double A3 = t1 + kPi + g1 - t3;  // vertex-2 anchor
    const double B5 = t1 + kPi;
    const double B6 = t1 + kPi + g1;

    const auto rays = dashed_rays(spec);
    const LocalFrame s0R = side_frame(spec, 0), s1R = side_frame(spec, 1), s2R = side_frame(spec, 2);
    const LocalFrame s0L = side_frame(spec, 0, Polarity::Left);
    const LocalFrame s1L = side_frame(spec, 1, Polarity::Left);
    const LocalFrame s2L = side_frame(spec, 2, Polarity::Left);

    const double d_c1 = -f2;             // chart of side 0
    const double d_c2 = -f2 + f1 - f0;   // chart of side 1
    const double d_c3 = -f0;             // chart of side 2

    auto mk = [&](const char* id, SectorKind kind, const LocalFrame& fr, double delta,
                  double f_loc, double c0, double lo, double hi) {
        Sector s;
        s.id = id;
        s.kind = kind;
        s.frame = fr;
        s.delta = delta;
        s.f_loc = f_loc;
        s.c0 = c0;
        s.lo = lo;
        s.hi = hi;
        return s;
    };

    t.sectors.resize(12);
    t.sectors[0] = mk("A2b", SectorKind::Wedge, s1L, 0.0, f1, t1, B6, kTwoPi + B1);
    t.sectors[1] = mk("A2bF", SectorKind::NearF, s0R, d_c1, f0, t1, 0.0, B1);
    t.sectors[1].u = f2; t.sectors[1].v = -f1;
    t.sectors[1].far_partner = 0;
    t.sectors[1].ray = t.find_ray(rays, 0, 2);
    t.sectors[2] = mk("A1", SectorKind::True, s0R, d_c1, f0, t1 - g2 - g0, B1, B2);
    t.sectors[3] = mk("A3bB", SectorKind::NearB, s0R, d_c1, f0, B4, B2, A2);
    t.sectors[3].u = -f1; t.sectors[3].v = -f2;
    t.sectors[3].far_partner = 4;
    t.sectors[3].ray = t.find_ray(rays, 1, 1);
    t.sectors[4] = mk("A3b", SectorKind::Wedge, s2L, f1 - f2, f2, B4, B2, B3);
    t.sectors[5] = mk("A3bF", SectorKind::NearF, s1R, d_c2, f1, B4, A2, B3);
    t.sectors[5].u = f0; t.sectors[5].v = -f2;
    t.sectors[5].far_partner = 4;
    t.sectors[5].ray = t.find_ray(rays, 1, 0);
    t.sectors[6] = mk("A2", SectorKind::True, s1R, d_c2, f1, t1, B3, B4);
    t.sectors[7] = mk("A1bB", SectorKind::NearB, s1R, d_c2, f1, B6, B4, A3);
    t.sectors[7].u = -f2; t.sectors[7].v = -f0;
    t.sectors[7].far_partner = 8;
    t.sectors[7].ray = t.find_ray(rays, 2, 2);
    t.sectors[8] = mk("A1b", SectorKind::Wedge, s0L, f1 - f0, f0, B6, B4, B5);
    t.sectors[9] = mk("A1bF", SectorKind::NearF, s2R, d_c3, f2, B6, A3, B5);
    t.sectors[9].u = f1; t.sectors[9].v = -f0;
    t.sectors[9].far_partner = 8;
    t.sectors[9].ray = t.find_ray(rays, 2, 1);
    t.sectors[10] = mk("A3", SectorKind::True, s2R, d_c3, f2, t1 + kPi - g2, B5, B6);
    t.sectors[11] = mk("A2bB", SectorKind::NearB, s2R, d_c3, f2, t1 + kTwoPi, B6, kTwoPi);
    t.sectors[11].u = -f0; t.sectors[11].v = -f1;
    t.sectors[11].far_partner = 0;
    t.sectors[11].ray = t.find_ray(rays, 0, 0);

    for (auto& s : t.sectors) {
        if (s.kind == SectorKind::NearF || s.kind == SectorKind::NearB) t.set_ray_params(s);
        s.gap0 = s.delta + t.P - s.f_loc;
        if (std::abs(s.gap0) < 1e-12 * t.P) s.gap0 = 0.0;
    }

    t.base_bounds_ = {0.0, B1, B2, A2, B3, B4, A3, B5, B6, kTwoPi};
    t.base_sector_ = {1, 2, 3, 5, 6, 7, 9, 10, 11};
    t.far_bounds_ = {B1, B2, B3, B4, B5, B6};
    t.far_sector_ = {2, 4, 6, 8, 10, 0};  // [B1,B2]=A1 ... [B6,2pi+B1]=A2b (wraps)
    t.wedge_sector_ = {0, 4, 8};
    t.strip_sectors_ = {{1, 2, 3}, {5, 6, 7}, {9, 10, 11}};
    t.true_sector_ = {2, 6, 10};
    t.anchors_ = {0.0, A2, A3};
    return t;
}

inline SectorTable SectorTable::build_square(const PolygonSpec& spec) {
    SectorTable t;
    t.spec = spec;
    const double f = spec.f[0];
    t.P = 2.0 * f;
    const double fD = f * std::sqrt(2.0);
    t.theta_v1 = kPi / 2;
    t.phi1 = kPi / 4;

    const auto rays = dashed_rays(spec);
    const Vec2 center = spec.centroid();

    auto diag_frame = [&](int vertex) {
        LocalFrame fr;
        fr.i = (vertex + 1) % 4;
        fr.j = (vertex + 3) % 4;
        fr.midpoint = center;
        fr.f = fD;
        const Vec2 d = spec.vertex(vertex + 1) - center;
        fr.beta = wrap_angle(std::atan2(d.y, d.x));
        fr.polarity = Polarity::Left;
        return fr;
    };

    t.sectors.resize(16);
    t.wedge_sector_.assign(4, -1);
    t.strip_sectors_.resize(4);
    for (int q = 0; q < 4; ++q) {
        const double q0 = q * kPi / 2;
        const int iw = 4 * q, iF = 4 * q + 1, iT = 4 * q + 2, iB = 4 * q + 3;
        Sector& w = t.sectors[iw];
        w.id = "D" + std::to_string(q + 1);
        w.kind = SectorKind::Wedge;
        w.frame = diag_frame(q);
        w.delta = 0.0;
        w.f_loc = fD;
        w.c0 = q0 + kPi / 2;
        w.lo = q0 - kPi / 4;
        w.hi = q0 + kPi / 4;
        if (q == 0) { w.lo = kTwoPi - kPi / 4; w.hi = kTwoPi + kPi / 4; }

        Sector& sF = t.sectors[iF];
        sF.id = "S" + std::to_string(q + 1) + "F";
        sF.kind = SectorKind::NearF;
        sF.frame = side_frame(spec, q);
        sF.delta = -f;
        sF.f_loc = f;
        sF.c0 = q0 + kPi / 2;
        sF.u = f;
        sF.v = -fD;
        sF.lo = q0;
        sF.hi = q0 + kPi / 4;
        sF.far_partner = iw;
        sF.ray = t.find_ray(rays, q, (q + 3) % 4);

        Sector& sT = t.sectors[iT];
        sT.id = "T" + std::to_string(q + 1);
        sT.kind = SectorKind::True;
        sT.frame = sF.frame;
        sT.delta = -f;
        sT.f_loc = f;
        sT.c0 = q0 - kPi / 4;
        sT.lo = sT.hi = q0 + kPi / 4;

        Sector& sB = t.sectors[iB];
        sB.id = "S" + std::to_string(q + 1) + "B";
        sB.kind = SectorKind::NearB;
        sB.frame = sF.frame;
        sB.delta = -f;
        sB.f_loc = f;
        sB.c0 = q0 + kPi;
        sB.u = -f;
        sB.v = -fD;
        sB.lo = q0 + kPi / 4;
        sB.hi = q0 + kPi / 2;
        sB.far_partner = 4 * ((q + 1) % 4);
        sB.ray = t.find_ray(rays, (q + 1) % 4, (q + 1) % 4);

        t.wedge_sector_[q] = iw;
        t.strip_sectors_[q] = {iF, iT, iB};
        t.true_sector_.push_back(iT);
    }
    for (auto& s : t.sectors) {
        if (s.kind == SectorKind::NearF || s.kind == SectorKind::NearB) t.set_ray_params(s);
        s.gap0 = s.delta + t.P - s.f_loc;
        if (std::abs(s.gap0) < 1e-12 * t.P) s.gap0 = 0.0;
    }

    for (int q = 0; q < 4; ++q) {
        t.base_bounds_.push_back(q * kPi / 2);
        t.base_bounds_.push_back(q * kPi / 2 + kPi / 4);
        t.base_sector_.push_back(4 * q + 1);
        t.base_sector_.push_back(4 * q + 3);
        t.true_on_bound_[q * kPi / 2 + kPi / 4] = 4 * q + 2;
        t.far_bounds_.push_back(q * kPi / 2 + kPi / 4);
        t.far_sector_.push_back(4 * ((q + 1) % 4));
        t.anchors_.push_back(q * kPi / 2);
    }
    t.base_bounds_.push_back(kTwoPi);
    return t;
}

inline SectorTable build_sector_table(const PolygonSpec& spec) { return SectorTable::build(spec); }

// ---- standalone operations ---------------------------------------------------

inline std::vector<HyperbolaRange> hyperbola_ranges(const PolygonSpec& spec) {
    std::vector<HyperbolaRange> out(spec.n);
    for (int i = 0; i < spec.n; ++i)
        out[i] = {-std::cos(spec.angle(i + 1)), std::cos(spec.angle(i))};
    return out;
}

/// Angular matching across a dashed ray: the wedge-chart angle paired with a
/// strip-chart angle theta_local on the ray identified by `ray`.
inline double angle_transfer(const PolygonSpec& spec, const RayId& ray, double theta_local) {
    const int n = spec.n;
    const bool at_end = ray.vertex == (ray.side + 1) % n;
    const bool at_start = ray.vertex == ray.side % n;
    if (!at_end && !at_start) throw OutOfRange("ray label does not name a polygon ray");
    const double g = spec.angle(ray.vertex);
    const double slack = 1e-12;
    double rhs, f_s;
    if (at_end) {
        if (theta_local < -slack || theta_local > g + slack)
            throw OutOfRange("theta outside [0, gamma_N] for an end-extension ray");
        rhs = spec.f[ray.side];
        f_s = spec.side_f(ray.side + 1);
    } else {
        if (theta_local < kPi - g - slack || theta_local > kPi + slack)
            throw OutOfRange("theta outside [pi - gamma_N, pi] for a start-extension ray");
        rhs = -spec.f[ray.side];
        f_s = spec.side_f(ray.side - 1);
    }
    const double f_w = (n == 3) ? spec.side_f(ray.vertex + 1) : spec.f[0] * std::sqrt(2.0);
    const double arg = (rhs - f_s * std::cos(theta_local)) / f_w;
    if (std::abs(arg) > 1.0 + 1e-12)
        throw OutOfRange("no matching angle: invalid boundary/angle pairing");
    return std::acos(clamp_unit(arg));
}

}  // namespace polyell
