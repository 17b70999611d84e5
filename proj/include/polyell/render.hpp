#pragma once

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "polyell/atlas.hpp"
#include "polyell/config.hpp"
#include "polyell/metric.hpp"

namespace polyell {

namespace detail {

inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string num8(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

/// Flatten a parametric curve adaptively until the chord-sagitta error is
/// below tol.
inline void refine_curve(const std::function<Vec2(double)>& f, double t0, double t1,
                         const Vec2& p0, const Vec2& p1, double tol, int depth,
                         std::vector<std::pair<double, Vec2>>& out) {
    const double tm = 0.5 * (t0 + t1);
    const Vec2 pm = f(tm);
    const Vec2 mid = (p0 + p1) * 0.5;
    if (depth <= 0 || distance(pm, mid) < tol) {
        out.emplace_back(tm, pm);
        out.emplace_back(t1, p1);
        return;
    }
    refine_curve(f, t0, tm, p0, pm, tol, depth - 1, out);
    refine_curve(f, tm, t1, pm, p1, tol, depth - 1, out);
}

inline std::vector<std::pair<double, Vec2>> sample_curve(const std::function<Vec2(double)>& f,
                                                         double t0, double t1, int coarse,
                                                         double tol) {
    std::vector<std::pair<double, Vec2>> out;
    out.emplace_back(t0, f(t0));
    for (int i = 0; i < coarse; ++i) {
        const double a = t0 + (t1 - t0) * i / coarse;
        const double b = t0 + (t1 - t0) * (i + 1) / coarse;
        refine_curve(f, a, b, f(a), f(b), tol, 8, out);
    }
    return out;
}

}  // namespace detail

struct NetCurves {
    struct Curve {
        std::string kind;  // polygon | ray | mu_isoline | theta_isoline | interior_grid
        double param = 0.0;
        std::vector<Vec2> points;
        bool closed = false;
    };
    std::vector<Curve> curves;
};

inline NetCurves net_curves(const SectorTable& table, const RunConfig& cfg) {
    NetCurves net;
    const PolygonSpec& spec = table.spec;
    const double tol = 0.002 * table.P;  // chord-sagitta refinement target

    {
        NetCurves::Curve c;
        c.kind = "polygon";
        for (int i = 0; i < spec.n; ++i) c.points.push_back(spec.vertex(i));
        c.closed = true;
        net.curves.push_back(std::move(c));
    }

    std::vector<double> mus = cfg.mu_list;
    if (mus.empty())
        for (int i = 1; i <= cfg.mu_count; ++i)
            mus.push_back(cfg.mu_max * i / cfg.mu_count);

    double reach = 0.0;
    for (double m : mus) reach = std::max(reach, m);
    const double ray_len = table.ae_from_mu(reach) + table.P;

    for (const auto& r : dashed_rays(spec)) {
        NetCurves::Curve c;
        c.kind = "ray";
        c.points = {r.origin, r.origin + r.direction * ray_len};
        net.curves.push_back(std::move(c));
    }

    for (double m : mus) {
        NetCurves::Curve c;
        c.kind = "mu_isoline";
        c.param = m;
        auto f = [&](double th) { return table.forward(CommonCoord{m, wrap_angle(th)}); };
        for (auto& [t, p] : detail::sample_curve(f, 0.0, kTwoPi, 16 * spec.n, tol))
            c.points.push_back(p);
        c.closed = true;
        net.curves.push_back(std::move(c));
    }

    for (int i = 0; i < cfg.theta_count; ++i) {
        const double th = kTwoPi * i / cfg.theta_count;
        NetCurves::Curve c;
        c.kind = "theta_isoline";
        c.param = th;
        auto f = [&](double m) { return table.forward(CommonCoord{m, th}); };
        for (auto& [t, p] : detail::sample_curve(f, 0.0, reach, 12, tol)) c.points.push_back(p);
        net.curves.push_back(std::move(c));
    }

    if (spec.n == 4) {
        // decorative interior grid, no metric meaning
        const double s = 2.0 * spec.f[0];
        const int lines = 7;
        for (int i = 1; i <= lines; ++i) {
            const double x = s * i / (lines + 1);
            net.curves.push_back({"interior_grid", x, {Vec2{x, 0}, Vec2{x, s}}, false});
            net.curves.push_back({"interior_grid", x, {Vec2{0, x}, Vec2{s, x}}, false});
        }
    }
    return net;
}

inline std::string net_to_csv(const NetCurves& net) {
    std::ostringstream os;
    os << "curve,kind,param,x,y\n";
    int id = 0;
    for (const auto& c : net.curves) {
        for (const auto& p : c.points)
            os << id << ',' << c.kind << ',' << detail::num17(c.param) << ','
               << detail::num17(p.x) << ',' << detail::num17(p.y) << '\n';
        ++id;
    }
    return os.str();
}

inline std::string net_to_svg(const NetCurves& net) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& c : net.curves)
        for (const auto& p : c.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    const double pad = 0.03 * std::max(x1 - x0, y1 - y0);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << detail::num8(x0 - pad) << ' '
       << detail::num8(-(y1 + pad)) << ' ' << detail::num8(x1 - x0 + 2 * pad) << ' '
       << detail::num8(y1 - y0 + 2 * pad) << "\">\n";
    os << "<g fill=\"none\" stroke-width=\"" << detail::num8(0.004 * (x1 - x0)) << "\">\n";
    for (const auto& c : net.curves) {
        std::string style;
        if (c.kind == "polygon") style = "stroke=\"#000000\"";
        else if (c.kind == "ray") style = "stroke=\"#888888\" stroke-dasharray=\"0.12 0.08\"";
        else if (c.kind == "mu_isoline") style = "stroke=\"#1f77b4\"";
        else if (c.kind == "theta_isoline") style = "stroke=\"#d62728\"";
        else style = "stroke=\"#bbbbbb\"";
        os << "<path class=\"" << c.kind << "\" " << style << " d=\"";
        for (size_t i = 0; i < c.points.size(); ++i)
            os << (i == 0 ? 'M' : 'L') << detail::num8(c.points[i].x) << ' '
               << detail::num8(-c.points[i].y);
        if (c.closed) os << 'Z';
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

/// Rectangular diagnostic plot: horizontal axis log10(ae_c), vertical axis
/// theta_c. Angular isolines are horizontal lines; the dashed curves are the
/// near/far switch radii of the compressed sectors.
inline NetCurves rectplot_curves(const SectorTable& table, const RunConfig& cfg) {
    NetCurves net;
    const double ae_min = table.P;
    const double ae_max = table.ae_from_mu(cfg.mu_max > 0 ? cfg.mu_max : 2.0);

    for (int i = 0; i < cfg.theta_count; ++i) {
        const double th = kTwoPi * i / cfg.theta_count;
        NetCurves::Curve c;
        c.kind = "theta_isoline";
        c.param = th;
        c.points = {Vec2{std::log10(ae_min), th}, Vec2{std::log10(ae_max), th}};
        net.curves.push_back(std::move(c));
    }
    net.curves.push_back({"perimeter", 0.0,
                          {Vec2{std::log10(ae_min), 0.0}, Vec2{std::log10(ae_min), kTwoPi}},
                          false});
    for (int si : table.base_sector_indices()) {
        const Sector& s = table.sectors[si];
        if (s.kind == SectorKind::True) continue;
        NetCurves::Curve c;
        c.kind = "ray";
        c.param = si;
        const int samples = 64;
        for (int i = 0; i <= samples; ++i) {
            const double th = s.lo + (s.hi - s.lo) * i / samples;
            const double sw = table.switch_ae_c(s, th);
            if (!std::isfinite(sw) || sw > ae_max) continue;
            c.points.push_back(Vec2{std::log10(std::max(sw, ae_min)), th});
        }
        if (c.points.size() >= 2) net.curves.push_back(std::move(c));
    }
    for (double b : table.base_boundaries()) {
        net.curves.push_back({"sector_boundary", b,
                              {Vec2{std::log10(ae_min), b}, Vec2{std::log10(ae_max), b}},
                              false});
    }
    return net;
}

inline std::string metric_profile_csv(const SectorTable& table, double mu, int n) {
    std::ostringstream os;
    os << "theta_c,H_theta_sq,H_mu_sq,sector_id\n";
    for (int i = 0; i < n; ++i) {
        const double th = kTwoPi * i / n;
        const auto [hm, ht] = scale_factors(table, CommonCoord{mu, th});
        const Sector& s = table.sectors[table.sector_index(th, table.ae_from_mu(mu))];
        os << detail::num17(th) << ',' << detail::num17(ht * ht) << ',' << detail::num17(hm * hm)
           << ',' << s.id << '\n';
    }
    return os.str();
}

}  // namespace polyell
