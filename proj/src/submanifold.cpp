#include "rgeo/submanifold.hpp"

#include <algorithm>
#include <random>
#include <cmath>

namespace rgeo {

namespace {

MatrixXd param_tangents(const SubmanifoldSpec& S, const VectorXd& theta) {
    const int k = S.k;
    if (k == 0) return MatrixXd(S.param(theta).size(), 0);
    VectorXd p0 = S.param(theta);
    MatrixXd T(p0.size(), k);
    const double h = 1e-6;
    for (int a = 0; a < k; ++a) {
        VectorXd tp = theta, tm = theta;
        tp[a] += h;
        tm[a] -= h;
        T.col(a) = (S.param(tp) - S.param(tm)) / (2.0 * h);
    }
    return T;
}

MatrixXd normal_frame_at(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& theta) {
    VectorXd p = S.param(theta);
    if (S.normal_frame) return S.normal_frame(theta);
    MatrixXd T = param_tangents(S, theta);
    MatrixXd g = m.metric_at(p);
    // g-orthonormalize the tangents, then complete to a frame
    MatrixXd Tq(p.size(), 0);
    for (int c = 0; c < T.cols(); ++c) {
        VectorXd w = g_orthogonalize(T.col(c), Tq, g);
        if (w.isZero(0)) continue;
        Tq.conservativeResize(p.size(), Tq.cols() + 1);
        Tq.col(Tq.cols() - 1) = w;
    }
    return g_orthonormal_complement(Tq, g);
}

struct ShootSolution {
    VectorXd theta, w;
    VectorXd footpoint, v0, x_end, v_end;
    double t = 0.0, resid = 0.0;
    bool ok = false;
};

// residual of exp_{p(theta)}(N(theta) w) - x, plus endpoint data
ShootSolution shoot(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                    const VectorXd& theta, const VectorXd& w) {
    ShootSolution out;
    out.theta = theta;
    out.w = w;
    out.footpoint = S.k ? S.param(theta) : S.param(VectorXd());
    double len = w.norm();
    out.t = len;
    MatrixXd N = normal_frame_at(m, S, theta);
    if (len < 1e-14) {
        out.x_end = out.footpoint;
        out.v_end = VectorXd::Zero(x.size());
        out.v0 = out.v_end;
        out.resid = (out.x_end - x).norm();
        out.ok = true;
        return out;
    }
    out.v0 = N * (w / len);
    GeodesicOptions go;
    go.rtol = 1e-12;
    go.atol = 1e-13;
    GeodesicPath p = geodesic(m, out.footpoint, out.v0, len, go);
    if (p.truncated) return out;
    out.x_end = p.x.back();
    out.v_end = p.v.back();
    out.resid = (out.x_end - x).norm();
    out.ok = true;
    return out;
}

ShootSolution newton_refine(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                            VectorXd theta, VectorXd w) {
    const int k = S.k, codim = static_cast<int>(w.size());
    const int dim = k + codim;
    ShootSolution cur = shoot(m, S, x, theta, w);
    if (!cur.ok) return cur;
    const double scale = std::max(1.0, x.norm());
    for (int it = 0; it < 30 && cur.resid > 1e-13 * scale; ++it) {
        // FD Jacobian of the endpoint w.r.t. (theta, w)
        MatrixXd Jac(dim, dim);
        const double h = 1e-6 * std::max(1.0, cur.t);
        for (int a = 0; a < dim; ++a) {
            VectorXd tp = theta, wp = w;
            if (a < k) tp[a] += h; else wp[a - k] += h;
            ShootSolution s = shoot(m, S, x, tp, wp);
            if (!s.ok) return cur;
            Jac.col(a) = (s.x_end - cur.x_end) / h;
        }
        VectorXd step = Jac.colPivHouseholderQr().solve(x - cur.x_end);
        double lam = 1.0;
        bool improved = false;
        for (int bt = 0; bt < 8; ++bt, lam *= 0.5) {
            VectorXd tn = theta, wn = w;
            for (int a = 0; a < k; ++a) tn[a] += lam * step[a];
            for (int a = 0; a < codim; ++a) wn[a] += lam * step[k + a];
            ShootSolution s = shoot(m, S, x, tn, wn);
            if (s.ok && s.resid < cur.resid) {
                cur = s;
                theta = tn;
                w = wn;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return cur;
}

DistResult newton_dist(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                       const VectorXd* warm) {
    const int n = m.dim;
    const int k = S.k, codim = n - k;
    const double scale = std::max(1.0, x.norm());

    std::vector<ShootSolution> sols;
    auto try_start = [&](const VectorXd& theta) {
        VectorXd p = S.k ? S.param(theta) : S.param(VectorXd());
        MatrixXd N = normal_frame_at(m, S, theta);
        MatrixXd g = m.metric_at(p);
        VectorXd d = x - p;
        VectorXd w(codim);
        for (int a = 0; a < codim; ++a) w[a] = d.dot(g * N.col(a));
        ShootSolution s = newton_refine(m, S, x, theta, w);
        if (s.ok && s.resid < 1e-9 * scale) sols.push_back(s);
    };

    if (warm && warm->size() == k && k > 0) try_start(*warm);
    if (sols.empty()) {
        if (k == 0) {
            try_start(VectorXd());
        } else {
            // 8^k grid starts, capped at 512 scrambled points
            long total = 1;
            for (int a = 0; a < k; ++a) total *= 8;
            if (total <= 512) {
                std::vector<int> idx(k, 0);
                for (long c = 0; c < total; ++c) {
                    VectorXd theta(k);
                    long r = c;
                    for (int a = 0; a < k; ++a) {
                        int i = static_cast<int>(r % 8);
                        r /= 8;
                        theta[a] = S.lo[a] + (S.hi[a] - S.lo[a]) * (i + 0.5) / 8.0;
                    }
                    try_start(theta);
                }
            } else {
                std::mt19937_64 rng(12345);
                std::uniform_real_distribution<double> U(0.0, 1.0);
                for (int c = 0; c < 512; ++c) {
                    VectorXd theta(k);
                    for (int a = 0; a < k; ++a) theta[a] = S.lo[a] + (S.hi[a] - S.lo[a]) * U(rng);
                    try_start(theta);
                }
            }
        }
    }
    if (sols.empty()) throw NumericalError("dist_to_submanifold: no shooting start converged");

    std::sort(sols.begin(), sols.end(),
              [](const ShootSolution& a, const ShootSolution& b) { return a.t < b.t; });
    const ShootSolution& best = sols.front();
    double tube = S.tube_radius > 0 ? S.tube_radius : std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < sols.size(); ++i) {
        bool distinct = (sols[i].footpoint - best.footpoint).norm() > 1e-3 * scale;
        if (distinct && sols[i].t - best.t < 1e-6 * (S.tube_radius > 0 ? S.tube_radius : 1.0))
            throw AmbiguousFootpointError("two footpoints at the same distance (outside valid tube)");
    }
    if (best.t > tube) throw DomainError("point outside the declared tube of S");

    DistResult r;
    r.t = best.t;
    r.theta = best.theta;
    r.footpoint = best.footpoint;
    r.v0 = best.v0;
    if (best.t < 1e-14) {
        r.X = VectorXd::Zero(n);
    } else {
        MatrixXd g = m.metric_at(x);
        double nrm = std::sqrt(best.v_end.dot(g * best.v_end));
        r.X = best.v_end / nrm;
    }
    return r;
}

VectorXd grad_dist_sq(const SubmanifoldSpec& S, const VectorXd& x) {
    const int n = static_cast<int>(x.size());
    VectorXd grad(n);
    if (S.dist_sq.eval_dual) {
        std::vector<Dual2> xd(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) xd[j] = Dual2(x[j], i == j ? 1.0 : 0.0, 0.0, 0.0);
            grad[i] = S.dist_sq.eval_dual(xd.data()).d1;
        }
    } else {
        const double h = 1e-6 * std::max(1.0, x.norm());
        VectorXd y = x;
        for (int i = 0; i < n; ++i) {
            y = x; y[i] += h; double up = S.dist_sq.eval(y.data());
            y = x; y[i] -= h; double dn = S.dist_sq.eval(y.data());
            grad[i] = (up - dn) / (2.0 * h);
        }
    }
    return grad;
}

DistResult exact_dist(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x) {
    DistResult r;
    double u = S.dist_sq.eval(x.data());
    r.t = std::sqrt(std::max(0.0, u));
    if (S.tube_radius > 0 && r.t > S.tube_radius)
        throw DomainError("point outside the declared tube of S");
    const int n = m.dim;
    if (r.t < 1e-12) {
        r.footpoint = x;
        r.X = VectorXd::Zero(n);
        r.v0 = r.X;
        return r;
    }
    MatrixXd g = m.metric_at(x);
    VectorXd grad_d = grad_dist_sq(S, x) / (2.0 * r.t);
    VectorXd X = g.ldlt().solve(grad_d);
    double nrm = std::sqrt(X.dot(g * X));
    r.X = X / nrm;
    GeodesicOptions go;
    go.rtol = 1e-12;
    GeodesicPath p = geodesic(m, x, -r.X, r.t, go);
    r.footpoint = S.footpoint_exact ? S.footpoint_exact(x) : p.x.back();
    r.v0 = -p.v.back();
    return r;
}

// invert param near a known on-submanifold point (least squares Newton)
VectorXd theta_from_point(const SubmanifoldSpec& S, const VectorXd& p) {
    if (S.k == 0) return VectorXd();
    // coarse grid, then Gauss-Newton on |param(theta) - p|
    VectorXd best;
    double bestd = std::numeric_limits<double>::infinity();
    const int grid = 16;
    std::vector<int> idx(S.k, 0);
    long total = 1;
    for (int a = 0; a < S.k; ++a) total *= grid;
    total = std::min<long>(total, 65536);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (long c = 0; c < total; ++c) {
        VectorXd theta(S.k);
        if (std::pow(static_cast<double>(grid), S.k) <= 65536.0) {
            long r = c;
            for (int a = 0; a < S.k; ++a) {
                theta[a] = S.lo[a] + (S.hi[a] - S.lo[a]) * ((r % grid) + 0.5) / grid;
                r /= grid;
            }
        } else {
            for (int a = 0; a < S.k; ++a) theta[a] = S.lo[a] + (S.hi[a] - S.lo[a]) * U(rng);
        }
        double d = (S.param(theta) - p).norm();
        if (d < bestd) { bestd = d; best = theta; }
    }
    for (int it = 0; it < 40; ++it) {
        VectorXd r = S.param(best) - p;
        if (r.norm() < 1e-12) break;
        MatrixXd T = param_tangents(S, best);
        VectorXd step = (T.transpose() * T).ldlt().solve(-T.transpose() * r);
        best += step;
        if (step.norm() < 1e-13) break;
    }
    return best;
}

}  // namespace

DistResult dist_to_submanifold(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                               DistMethod method, const VectorXd* warm) {
    if (!m.contains(x)) throw DomainError("dist_to_submanifold: x outside chart");
    if (method == DistMethod::Exact || (method == DistMethod::Auto && S.has_exact())) {
        if (!S.has_exact()) throw ConfigurationError("no exact distance available for S");
        return exact_dist(m, S, x);
    }
    return newton_dist(m, S, x, warm);
}

SubmanifoldSpec point_submanifold(const MetricModel& m, const VectorXd& p, double tube_radius) {
    SubmanifoldSpec S;
    S.k = 0;
    S.param = [p](const VectorXd&) { return p; };
    S.tube_radius = tube_radius;
    (void)m;
    return S;
}

TubeSplitting tube_splitting(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                             DistMethod method) {
    const int n = m.dim;
    DistResult d = dist_to_submanifold(m, S, x, method);
    if (d.t < 1e-12) throw DomainError("tube_splitting: x lies on S");
    VectorXd theta = d.theta.size() ? d.theta : theta_from_point(S, d.footpoint);
    if (d.v0.size() == 0 || d.v0.isZero(0)) {
        GeodesicOptions go;
        go.rtol = 1e-12;
        GeodesicPath pb = geodesic(m, x, -d.X, d.t, go);
        d.footpoint = pb.x.back();
        d.v0 = -pb.v.back();
        theta = theta_from_point(S, d.footpoint);
    }
    const VectorXd& p = d.footpoint;
    MatrixXd gp = m.metric_at(p);
    MatrixXd N = normal_frame_at(m, S, theta);
    MatrixXd T = param_tangents(S, theta);

    // V fields: J(0) = 0, J'(0) in nu(S) orthogonal to gamma'(0)
    std::vector<VectorXd> J0, Jp0;
    MatrixXd against(n, 1);
    against.col(0) = d.v0;
    for (int a = 0; a < N.cols(); ++a) {
        VectorXd w = g_orthogonalize(N.col(a), against, gp);
        if (w.isZero(0)) continue;
        against.conservativeResize(n, against.cols() + 1);
        against.col(against.cols() - 1) = w;
        J0.push_back(VectorXd::Zero(n));
        Jp0.push_back(w);
    }
    const int nv = static_cast<int>(J0.size());

    // H fields: J(0) = T_a, J'(0) = Sh_{gamma'(0)}(T_a)
    if (S.k > 0) {
        Tensor3 Gam = christoffel(m, p);
        // w-bar: coefficients of gamma'(0) in the normal frame
        VectorXd wbar(N.cols());
        for (int a = 0; a < N.cols(); ++a) wbar[a] = d.v0.dot(gp * N.col(a));
        const double h = 1e-6;
        for (int a = 0; a < S.k; ++a) {
            VectorXd tp = theta, tm = theta;
            tp[a] += h;
            tm[a] -= h;
            MatrixXd Np = normal_frame_at(m, S, tp), Nm = normal_frame_at(m, S, tm);
            VectorXd dZ = (Np * wbar - Nm * wbar) / (2.0 * h);
            VectorXd Z0 = N * wbar;
            VectorXd covZ = dZ;
            for (int kk = 0; kk < n; ++kk) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) acc += Gam(kk, i, j) * T.col(a)[i] * Z0[j];
                covZ[kk] += acc;
            }
            // tangential projection onto span(T)
            MatrixXd TtgT = T.transpose() * gp * T;
            VectorXd c = TtgT.ldlt().solve(T.transpose() * gp * covZ);
            J0.push_back(T.col(a));
            Jp0.push_back(T * c);
        }
    }

    GeodesicOptions go;
    go.rtol = 1e-11;
    go.atol = 1e-13;
    JacobiSolution js = jacobi_transport(m, p, d.v0, d.t, J0, Jp0, go);

    TubeSplitting out;
    out.footpoint = p;
    out.t = d.t;
    MatrixXd gx = m.metric_at(x);
    VectorXd Xend = js.path.v.back();
    out.X = Xend / std::sqrt(Xend.dot(gx * Xend));
    for (size_t f = 0; f < J0.size(); ++f) {
        out.J.push_back(js.fields[f].J.back());
        out.Jp.push_back(js.fields[f].Jp.back());
    }
    for (int f = 0; f < nv; ++f) out.V_basis.push_back(out.J[f]);
    for (size_t f = nv; f < J0.size(); ++f) out.H_basis.push_back(out.J[f]);

    MatrixXd XV(n, 1 + nv);
    XV.col(0) = out.X;
    for (int f = 0; f < nv; ++f) XV.col(1 + f) = out.V_basis[f];
    MatrixXd Hbar = g_orthonormal_complement(XV, gx);
    for (int c = 0; c < Hbar.cols(); ++c) out.Hbar_basis.push_back(Hbar.col(c));
    return out;
}

namespace {

HessResult hess_jacobi(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                       DistMethod method) {
    const int n = m.dim;
    TubeSplitting ts = tube_splitting(m, S, x, method);
    const int nf = static_cast<int>(ts.J.size());
    if (1 + nf != n)
        throw NumericalError("tube_splitting frame incomplete for hess_distance");
    MatrixXd gx = m.metric_at(x);
    MatrixXd F(n, n);
    F.col(0) = ts.X;
    for (int f = 0; f < nf; ++f) F.col(1 + f) = ts.J[f];
    MatrixXd rows = MatrixXd::Zero(n, n);
    for (int f = 0; f < nf; ++f) rows.row(1 + f) = (gx * ts.Jp[f]).transpose();
    MatrixXd H = F.transpose().fullPivLu().solve(rows);
    HessResult out;
    out.asymmetry = (H - H.transpose()).cwiseAbs().maxCoeff();
    out.H = 0.5 * (H + H.transpose());
    return out;
}

HessResult hess_direct(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                       DistMethod method) {
    const int n = m.dim;
    DistResult base = dist_to_submanifold(m, S, x, method);
    auto dist_at = [&](const VectorXd& y) {
        const VectorXd* w = base.theta.size() ? &base.theta : nullptr;
        return dist_to_submanifold(m, S, y, method, w).t;
    };
    const double h = 2e-4 * std::max(1.0, x.norm());
    double d0 = base.t;
    VectorXd grad(n);
    MatrixXd hess(n, n);
    std::vector<double> dp(n), dm(n);
    for (int i = 0; i < n; ++i) {
        VectorXd y = x;
        y[i] += h; dp[i] = dist_at(y);
        y[i] -= 2 * h; dm[i] = dist_at(y);
        grad[i] = (dp[i] - dm[i]) / (2 * h);
        hess(i, i) = (dp[i] - 2 * d0 + dm[i]) / (h * h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            VectorXd y = x;
            y[i] += h; y[j] += h; double dpp = dist_at(y);
            y[j] -= 2 * h; double dpm = dist_at(y);
            y[i] -= 2 * h; double dmm = dist_at(y);
            y[j] += 2 * h; double dmp = dist_at(y);
            hess(i, j) = hess(j, i) = (dpp - dpm - dmp + dmm) / (4 * h * h);
        }
    // covariant correction: Hess_ij = d_i d_j dist - Gamma^k_ij d_k dist
    Tensor3 G = christoffel(m, x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double corr = 0.0;
            for (int k = 0; k < n; ++k) corr += G(k, i, j) * grad[k];
            hess(i, j) -= corr;
        }
    HessResult out;
    out.asymmetry = (hess - hess.transpose()).cwiseAbs().maxCoeff();
    out.H = 0.5 * (hess + hess.transpose());
    return out;
}

}  // namespace

HessResult hess_distance(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                         HessMethod method, DistMethod dist_method) {
    return method == HessMethod::Jacobi ? hess_jacobi(m, S, x, dist_method)
                                        : hess_direct(m, S, x, dist_method);
}

MatrixXd hess_distance_checked(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                               double tol) {
    HessResult hj = hess_distance(m, S, x, HessMethod::Jacobi);
    HessResult hd = hess_distance(m, S, x, HessMethod::Direct);
    double gap = (hj.H - hd.H).cwiseAbs().maxCoeff();
    if (gap > 10.0 * tol)
        throw NumericalError("hess_distance methods disagree: gap = " + std::to_string(gap));
    return hj.H;
}

}  // namespace rgeo
