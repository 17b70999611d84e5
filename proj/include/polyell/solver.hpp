#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "polyell/metric.hpp"

namespace polyell {

// ---------------------------------------------------------------------------
// Mathieu characteristic values (validation oracle): eigenvalues of the
// truncated Fourier-mode tridiagonal matrices of y'' + (a - 2q cos 2t) y = 0.
// ---------------------------------------------------------------------------

enum class MathieuParity { Even, Odd };  // a_n (cosine type) / b_n (sine type)

inline double mathieu_characteristic(double q, int order, MathieuParity parity,
                                     int truncation = 0) {
    if (std::abs(q) > 50.0) throw OutOfDomain("|q| <= 50 supported");
    if (order < 0 || (parity == MathieuParity::Odd && order == 0))
        throw OutOfRange("invalid Mathieu order");
    const int M = truncation > 0 ? truncation : std::max(40, order + 24 + static_cast<int>(std::abs(q)));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    int pick;
    if (parity == MathieuParity::Even && order % 2 == 0) {
        // basis cos(2m t), m = 0..M-1; the m = 0 coupling carries sqrt(2)
        for (int m = 0; m < M; ++m) A(m, m) = 4.0 * m * m;
        A(0, 1) = A(1, 0) = q * std::sqrt(2.0);
        for (int m = 1; m + 1 < M; ++m) A(m, m + 1) = A(m + 1, m) = q;
        pick = order / 2;
    } else if (parity == MathieuParity::Even) {
        // basis cos((2m+1) t)
        for (int m = 0; m < M; ++m) A(m, m) = (2.0 * m + 1) * (2.0 * m + 1);
        A(0, 0) += q;
        for (int m = 0; m + 1 < M; ++m) A(m, m + 1) = A(m + 1, m) = q;
        pick = (order - 1) / 2;
    } else if (order % 2 == 0) {
        // basis sin(2m t), m = 1..M
        for (int m = 0; m < M; ++m) A(m, m) = 4.0 * (m + 1) * (m + 1);
        for (int m = 0; m + 1 < M; ++m) A(m, m + 1) = A(m + 1, m) = q;
        pick = order / 2 - 1;
    } else {
        // basis sin((2m+1) t)
        for (int m = 0; m < M; ++m) A(m, m) = (2.0 * m + 1) * (2.0 * m + 1);
        A(0, 0) -= q;
        for (int m = 0; m + 1 < M; ++m) A(m, m + 1) = A(m + 1, m) = q;
        pick = (order - 1) / 2;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(pick);
}

// ---------------------------------------------------------------------------
// Angular eigenproblem: the separated equation on the wedge/true coefficient
// cover, -psi'' + k^2 f^2 cos^2(theta - c0) psi = lambda psi, periodic on
// [0, 2 pi). lambda is reported shifted by -k^2 f_w^2 / 2 so the degenerate
// triangle reproduces Mathieu characteristic values.
// ---------------------------------------------------------------------------

struct AngularSegment {
    double lo = 0, hi = 0;
    double f_loc = 0, c0 = 0;
};

inline std::vector<AngularSegment> angular_segments(const SectorTable& t) {
    std::vector<AngularSegment> segs;
    const auto& fb = t.far_boundaries();
    const auto& fs = t.far_sector_indices();
    const int m = static_cast<int>(fb.size());
    for (int k = 0; k < m; ++k) {
        const double lo = fb[k];
        const double hi = (k + 1 < m) ? fb[k + 1] : fb[0] + kTwoPi;
        const Sector& s = t.sectors[fs[k]];
        if (hi <= kTwoPi + 1e-15) {
            segs.push_back({lo, hi, s.f_loc, s.c0});
        } else {
            segs.push_back({lo, kTwoPi, s.f_loc, s.c0});
            segs.push_back({0.0, hi - kTwoPi, s.f_loc, s.c0});
        }
    }
    std::sort(segs.begin(), segs.end(),
              [](const AngularSegment& a, const AngularSegment& b) { return a.lo < b.lo; });
    return segs;
}

/// Reported-lambda gauge shift: lambda_report = lambda_equation - shift.
inline double lambda_gauge_shift(const SectorTable& t, double k) {
    const double fw = t.sectors[t.wedge_sector_indices()[0]].f_loc;
    return 0.5 * k * k * fw * fw;
}

namespace detail {

/// integral of k^2 f^2 cos^2(x - c0) over [a, b] within one segment
inline double potential_integral(double k, const AngularSegment& s, double a, double b) {
    auto prim = [&](double x) {
        const double y = x - s.c0;
        return 0.5 * y + 0.25 * std::sin(2.0 * y);
    };
    return k * k * s.f_loc * s.f_loc * (prim(b) - prim(a));
}

struct AngularOperator {
    std::vector<double> theta;   // N nodes in [0, 2 pi)
    std::vector<double> diag;    // stiffness diagonal (with potential)
    std::vector<double> off;     // off[i] couples node i and i+1 (cyclic)
    std::vector<double> weight;  // lumped mass diagonal
};

inline AngularOperator assemble_angular(const SectorTable& t, double k, int n_target) {
    const auto segs = angular_segments(t);
    AngularOperator op;
    const double h_goal = kTwoPi / n_target;
    for (const auto& s : segs) {
        const int cells = std::max(2, static_cast<int>(std::lround((s.hi - s.lo) / h_goal)));
        for (int i = 0; i < cells; ++i)
            op.theta.push_back(s.lo + (s.hi - s.lo) * i / cells);
    }
    const int N = static_cast<int>(op.theta.size());
    op.diag.assign(N, 0.0);
    op.off.assign(N, 0.0);
    op.weight.assign(N, 0.0);

    auto vint = [&](double a, double b) {
        // piecewise over segments; [a, b] may cross one boundary
        double total = 0.0;
        for (const auto& s : segs) {
            const double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
            if (hi > lo) total += potential_integral(k, s, lo, hi);
        }
        return total;
    };

    for (int i = 0; i < N; ++i) {
        const int ip = (i + 1) % N;
        const double hp = (ip == 0 ? kTwoPi : 0.0) + op.theta[ip] - op.theta[i];
        op.off[i] = -1.0 / hp;
    }
    for (int i = 0; i < N; ++i) {
        const int im = (i + N - 1) % N;
        const double hm = -op.off[im] > 0 ? 1.0 / -op.off[im] : 0.0;
        const int ip = (i + 1) % N;
        const double hp = 1.0 / -op.off[i];
        (void)ip;
        op.weight[i] = 0.5 * (hm + hp);
        double a = op.theta[i] - 0.5 * hm;
        double b = op.theta[i] + 0.5 * hp;
        double v = 0.0;
        if (a < 0.0) {
            v += vint(a + kTwoPi, kTwoPi);
            a = 0.0;
        }
        if (b > kTwoPi) {
            v += vint(0.0, b - kTwoPi);
            b = kTwoPi;
        }
        v += vint(a, b);
        op.diag[i] = 1.0 / hm + 1.0 / hp + v;
    }
    return op;
}

struct DenseAngularSolve {
    std::vector<double> lambda;
    Eigen::MatrixXd psi;  // column n = eigenfunction n on the grid
    std::vector<double> theta;
    std::vector<double> weight;
};

inline DenseAngularSolve solve_angular_dense(const SectorTable& t, double k, int n_target,
                                             int count) {
    const AngularOperator op = assemble_angular(t, k, n_target);
    const int N = static_cast<int>(op.theta.size());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int ip = (i + 1) % N;
        const double di = 1.0 / std::sqrt(op.weight[i]);
        const double dp = 1.0 / std::sqrt(op.weight[ip]);
        C(i, i) = op.diag[i] * di * di;
        C(i, ip) += op.off[i] * di * dp;
        C(ip, i) += op.off[i] * di * dp;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    DenseAngularSolve out;
    out.theta = op.theta;
    out.weight = op.weight;
    const int m = std::min(count, N);
    out.lambda.assign(m, 0.0);
    out.psi.resize(N, m);
    for (int n = 0; n < m; ++n) {
        out.lambda[n] = es.eigenvalues()(n);
        Eigen::VectorXd v = es.eigenvectors().col(n);
        for (int i = 0; i < N; ++i) v(i) /= std::sqrt(op.weight[i]);
        // normalize sum w psi^2 = 1; fix the sign deterministically
        double norm = 0.0;
        for (int i = 0; i < N; ++i) norm += op.weight[i] * v(i) * v(i);
        v /= std::sqrt(norm);
        int imax = 0;
        for (int i = 1; i < N; ++i)
            if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
        if (v(imax) < 0.0) v = -v;
        out.psi.col(n) = v;
    }
    return out;
}

/// Cyclic tridiagonal solve (Thomas + Sherman-Morrison). diag/off as in
/// AngularOperator; off[N-1] is the wrap coupling.
inline std::vector<double> solve_cyclic_tridiag(std::vector<double> d,
                                                const std::vector<double>& off,
                                                std::vector<double> rhs) {
    const int N = static_cast<int>(d.size());
    const double corner = off[N - 1];
    const double gamma = -d[0];
    d[0] -= gamma;
    d[N - 1] -= corner * corner / gamma;

    auto thomas = [&](std::vector<double> b) {
        std::vector<double> c(N - 1), dd = d, x(N);
        for (int i = 0; i + 1 < N; ++i) c[i] = off[i];
        for (int i = 1; i < N; ++i) {
            const double w = c[i - 1] / dd[i - 1];
            dd[i] -= w * c[i - 1];
            b[i] -= w * b[i - 1];
        }
        x[N - 1] = b[N - 1] / dd[N - 1];
        for (int i = N - 2; i >= 0; --i) x[i] = (b[i] - c[i] * x[i + 1]) / dd[i];
        return x;
    };

    std::vector<double> u(N, 0.0);
    u[0] = gamma;
    u[N - 1] = corner;
    const std::vector<double> x1 = thomas(rhs);
    const std::vector<double> x2 = thomas(u);
    const double vx1 = x1[0] + corner / gamma * x1[N - 1];
    const double vx2 = x2[0] + corner / gamma * x2[N - 1];
    std::vector<double> x(N);
    const double fac = vx1 / (1.0 + vx2);
    for (int i = 0; i < N; ++i) x[i] = x1[i] - fac * x2[i];
    return x;
}

}  // namespace detail

struct AngularEigenpair {
    int n = 0;
    double lambda = 0.0;           // reported (Mathieu-matched) gauge
    double lambda_equation = 0.0;  // eigenvalue of the separated equation
    double convergence = 0.0;      // relative drift between the two grids
    double k = 0.0;
    std::vector<double> theta;
    std::vector<double> psi;
};

inline AngularEigenpair refine_angular_eigenpair(const SectorTable& t, double k,
                                                 const AngularEigenpair& seed, int n_big);

/// First `count` eigenpairs of the periodic angular problem. A dense solve
/// at two resolutions locates the spectrum (Richardson-extrapolated); each
/// pair is then polished by shifted inverse iteration on a fine grid, and
/// the extrapolated/polished disagreement is the convergence estimate.
inline std::vector<AngularEigenpair> angular_spectrum(const SectorTable& t, double k, int count,
                                                      int n_target = 480,
                                                      double drift_tol = 1e-6,
                                                      int n_refine = 16000) {
    if (count < 1) throw OutOfRange("count must be >= 1");
    const auto coarse = detail::solve_angular_dense(t, k, n_target, count);
    const auto fine = detail::solve_angular_dense(t, k, 2 * n_target, count);
    const double shift = lambda_gauge_shift(t, k);
    std::vector<AngularEigenpair> out(count);
    for (int n = 0; n < count; ++n) {
        AngularEigenpair& e = out[n];
        e.n = n;
        e.k = k;
        const double l1 = coarse.lambda[n], l2 = fine.lambda[n];
        e.lambda_equation = (4.0 * l2 - l1) / 3.0;
        e.lambda = e.lambda_equation - shift;
        e.convergence = std::abs(l2 - l1) / (3.0 * std::max(1.0, std::abs(e.lambda_equation)));
        e.theta = fine.theta;
        e.psi.assign(fine.psi.col(n).data(), fine.psi.col(n).data() + fine.theta.size());
    }
    if (n_refine > 0) {
        for (int n = 0; n < count; ++n) {
            AngularEigenpair r = refine_angular_eigenpair(t, k, out[n], n_refine);
            r.convergence = std::abs(r.lambda_equation - out[n].lambda_equation) /
                            std::max(1.0, std::abs(r.lambda_equation));
            out[n] = std::move(r);
        }
        // re-orthonormalize under the grid weight (inverse iteration can mix
        // members of degenerate pairs)
        const detail::AngularOperator op = detail::assemble_angular(t, k, n_refine);
        auto wdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double s = 0.0;
            for (size_t i = 0; i < a.size(); ++i) s += op.weight[i] * a[i] * b[i];
            return s;
        };
        for (int n = 0; n < count; ++n) {
            for (int m = 0; m < n; ++m) {
                if (std::abs(out[n].lambda_equation - out[m].lambda_equation) >
                    1e-6 * std::max(1.0, std::abs(out[n].lambda_equation)))
                    continue;
                const double c = wdot(out[n].psi, out[m].psi);
                for (size_t i = 0; i < out[n].psi.size(); ++i)
                    out[n].psi[i] -= c * out[m].psi[i];
            }
            const double nn = std::sqrt(wdot(out[n].psi, out[n].psi));
            for (auto& v : out[n].psi) v /= nn;
        }
    }
    for (int n = 0; n < count; ++n)
        if (out[n].convergence > drift_tol)
            throw ConvergenceFailure("angular eigenvalue drift above tolerance");
    return out;
}

/// Refine one eigenpair on a large grid by shifted inverse iteration with the
/// cyclic tridiagonal factorization; returns the Rayleigh-quotient eigenvalue
/// in the equation gauge.
inline AngularEigenpair refine_angular_eigenpair(const SectorTable& t, double k,
                                                 const AngularEigenpair& seed, int n_big) {
    const detail::AngularOperator op = detail::assemble_angular(t, k, n_big);
    const int N = static_cast<int>(op.theta.size());
    const double sigma = seed.lambda_equation * (1.0 + 1e-10) + 1e-12;
    std::vector<double> d(N);
    for (int i = 0; i < N; ++i) d[i] = op.diag[i] - sigma * op.weight[i];

    std::vector<double> x(N, 1.0);
    // seed from the coarse eigenfunction to select the right eigenvector
    {
        const auto& st = seed.theta;
        const int M = static_cast<int>(st.size());
        for (int i = 0; i < N; ++i) {
            const double th = op.theta[i];
            int j = static_cast<int>(std::upper_bound(st.begin(), st.end(), th) - st.begin()) - 1;
            if (j < 0) j = 0;
            const int j1 = (j + 1) % M;
            const double t0 = st[j];
            const double t1 = (j1 == 0) ? st[0] + kTwoPi : st[j1];
            const double w = (t1 > t0) ? (th - t0) / (t1 - t0) : 0.0;
            x[i] = (1.0 - w) * seed.psi[j] + w * seed.psi[j1];
        }
    }

    auto apply_K = [&](const std::vector<double>& v) {
        std::vector<double> y(N);
        for (int i = 0; i < N; ++i) {
            const int ip = (i + 1) % N, im = (i + N - 1) % N;
            y[i] = op.diag[i] * v[i] + op.off[i] * v[ip] + op.off[im] * v[im];
        }
        return y;
    };

    double lambda = sigma;
    for (int it = 0; it < 12; ++it) {
        std::vector<double> rhs(N);
        for (int i = 0; i < N; ++i) rhs[i] = op.weight[i] * x[i];
        x = detail::solve_cyclic_tridiag(d, op.off, rhs);
        double nrm = 0.0;
        for (int i = 0; i < N; ++i) nrm += op.weight[i] * x[i] * x[i];
        nrm = std::sqrt(nrm);
        for (auto& xi : x) xi /= nrm;
        const auto Kx = apply_K(x);
        double num = 0.0;
        for (int i = 0; i < N; ++i) num += x[i] * Kx[i];
        const double next = num;  // denominator is 1 by normalization
        if (std::abs(next - lambda) < 1e-14 * std::max(1.0, std::abs(next)) && it > 1) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    int imax = 0;
    for (int i = 1; i < N; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0.0)
        for (auto& xi : x) xi = -xi;

    AngularEigenpair e;
    e.n = seed.n;
    e.k = k;
    e.lambda_equation = lambda;
    e.lambda = lambda - lambda_gauge_shift(t, k);
    e.convergence = seed.convergence;
    e.theta = op.theta;
    e.psi = x;
    return e;
}

// ---------------------------------------------------------------------------
// Radial equation: psi'' - (g2'/2g2) psi' - g2 (lambda - k^2 h1) psi = 0,
// integrated by fixed-step RK4 from mu = 0 in a chosen sector gauge.
// ---------------------------------------------------------------------------

enum class RadialBC { Dirichlet, Unit };  // psi(0)=0, psi'(0)=1  /  psi(0)=1, psi'(0)=0

struct RadialSolution {
    double k = 0, lambda = 0;  // lambda in the reported gauge
    RadialBC bc = RadialBC::Dirichlet;
    std::string sector_id;
    bool series_start = false;  // singular wedge-gauge start handled by series
    std::vector<double> mu, psi, dpsi;
};

inline RadialSolution radial_solution(const SectorTable& t, double k, double lambda,
                                      RadialBC bc, double mu_max, int steps,
                                      int sector_index = -1) {
    if (!(mu_max > 0.0) || steps < 2) throw OutOfDomain("invalid radial grid");
    if (sector_index < 0) sector_index = t.true_sector_indices()[0];
    const StackelFactors sf = stackel_factors(t, sector_index);
    const double lam_eq = lambda + lambda_gauge_shift(t, k);

    RadialSolution sol;
    sol.k = k;
    sol.lambda = lambda;
    sol.bc = bc;
    sol.sector_id = sf.sector_id;
    const double h = mu_max / steps;

    auto rhs = [&](double mu, double y0, double y1, double& d0, double& d1) {
        const double a = sf.half_dlog_g2(mu);
        const double b = sf.g2(mu) * (lam_eq - k * k * sf.h1(mu));
        d0 = y1;
        d1 = a * y1 + b * y0;
    };

    double y0, y1, mu0 = 0.0;
    sol.mu.push_back(0.0);
    if (sf.degenerate_at_zero()) {
        y0 = bc == RadialBC::Dirichlet ? 0.0 : 1.0;
        y1 = bc == RadialBC::Dirichlet ? 1.0 : 0.0;
        sol.psi.push_back(y0);
        sol.dpsi.push_back(y1);
    } else {
        // wedge gauge: g2'/2g2 ~ 1/mu at 0; start one step out with the
        // leading series (regular solutions behave as 1 and mu^2)
        sol.series_start = true;
        sol.psi.push_back(bc == RadialBC::Dirichlet ? 0.0 : 1.0);
        sol.dpsi.push_back(0.0);
        mu0 = h;
        if (bc == RadialBC::Dirichlet) {
            y0 = h * h;
            y1 = 2.0 * h;
        } else {
            y0 = 1.0;
            y1 = 0.0;
        }
        sol.mu.push_back(mu0);
        sol.psi.push_back(y0);
        sol.dpsi.push_back(y1);
    }

    for (double mu = mu0; mu < mu_max - 0.5 * h; mu += h) {
        double k10, k11, k20, k21, k30, k31, k40, k41;
        rhs(mu, y0, y1, k10, k11);
        rhs(mu + 0.5 * h, y0 + 0.5 * h * k10, y1 + 0.5 * h * k11, k20, k21);
        rhs(mu + 0.5 * h, y0 + 0.5 * h * k20, y1 + 0.5 * h * k21, k30, k31);
        rhs(mu + h, y0 + h * k30, y1 + h * k31, k40, k41);
        y0 += h / 6.0 * (k10 + 2 * k20 + 2 * k30 + k40);
        y1 += h / 6.0 * (k11 + 2 * k21 + 2 * k31 + k41);
        sol.mu.push_back(mu + h);
        sol.psi.push_back(y0);
        sol.dpsi.push_back(y1);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Natural cubic spline (for sampling eigenfunctions off their grid).
// ---------------------------------------------------------------------------

class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y) {
        const int n = static_cast<int>(x.size());
        m_.assign(n, 0.0);
        if (n < 3) return;
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
        b[0] = b[n - 1] = 1.0;
        for (int i = 1; i + 1 < n; ++i) {
            const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
            a[i] = hm / 6.0;
            b[i] = (hm + hp) / 3.0;
            c[i] = hp / 6.0;
            r[i] = (y[i + 1] - y[i]) / hp - (y[i] - y[i - 1]) / hm;
        }
        for (int i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (int i = n - 2; i >= 0; --i) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double xv) const {
        const int n = static_cast<int>(x_.size());
        int j = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), xv) - x_.begin()) - 1;
        if (j < 0) j = 0;
        if (j > n - 2) j = n - 2;
        const double h = x_[j + 1] - x_[j];
        const double A = (x_[j + 1] - xv) / h, B = (xv - x_[j]) / h;
        return A * y_[j] + B * y_[j + 1] +
               ((A * A * A - A) * m_[j] + (B * B * B - B) * m_[j + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

// ---------------------------------------------------------------------------
// Helmholtz recomposition check: finite-difference residual of the
// curvilinear operator applied to psi1(theta) * psi2(mu) on an in-sector
// grid, normalized by k^2 max|psi|.
// ---------------------------------------------------------------------------

inline double helmholtz_residual(const SectorTable& t, double k,
                                 const std::function<double(double)>& psi1,
                                 const std::function<double(double)>& psi2, double th_lo,
                                 double th_hi, double mu_lo, double mu_hi, int n_th,
                                 int n_mu) {
    const double hth = (th_hi - th_lo) / (n_th - 1);
    const double hmu = (mu_hi - mu_lo) / (n_mu - 1);

    auto H = [&](double mu, double th) { return scale_factors(t, CommonCoord{mu, th}); };
    auto psi = [&](double mu, double th) { return psi1(th) * psi2(mu); };

    double worst = 0.0, amp = 0.0;
    for (int j = 1; j + 1 < n_mu; ++j) {
        const double mu = mu_lo + j * hmu;
        for (int i = 1; i + 1 < n_th; ++i) {
            const double th = th_lo + i * hth;
            const auto [hm, ht] = H(mu, th);
            const auto [hmp, htp] = H(mu, th + 0.5 * hth);
            const auto [hmm, htm] = H(mu, th - 0.5 * hth);
            const auto [hmu_p, hth_p] = H(mu + 0.5 * hmu, th);
            const auto [hmu_m, hth_m] = H(mu - 0.5 * hmu, th);
            const double p0 = psi(mu, th);
            const double t_th = (hmp / htp) * (psi(mu, th + hth) - p0) -
                                (hmm / htm) * (p0 - psi(mu, th - hth));
            const double t_mu = (hth_p / hmu_p) * (psi(mu + hmu, th) - p0) -
                                (hth_m / hmu_m) * (p0 - psi(mu - hmu, th));
            const double L = (t_th / (hth * hth) + t_mu / (hmu * hmu)) / (hm * ht) +
                             k * k * p0;
            worst = std::max(worst, std::abs(L));
            amp = std::max(amp, std::abs(p0));
        }
    }
    const double denom = (k > 0.0 ? k * k : 1.0) * std::max(amp, 1e-300);
    return worst / denom;
}

}  // namespace polyell
