#include "rgeo/curvature.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace rgeo {

namespace {

Tensor3 christoffel_from_jet(const MetricJet& J, const MatrixXd& ginv, int n) {
    Tensor3 G(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += ginv(k, l) * (J.dg[i](j, l) + J.dg[j](i, l) - J.dg[l](i, j));
                G(k, i, j) = 0.5 * s;
                G(k, j, i) = 0.5 * s;
            }
    return G;
}

void check_spd(const MatrixXd& g, const std::string& label) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    double mn = es.eigenvalues().minCoeff(), mx = es.eigenvalues().maxCoeff();
    if (mn <= 1e-14 * std::max(1.0, mx))
        throw ConditioningError("near-singular metric matrix (" + label + ")",
                                mx / std::max(std::abs(mn), 1e-300));
}

}  // namespace

Tensor3 christoffel(const MetricModel& m, const VectorXd& x) {
    MetricJet J = m.jet_at(x);
    check_spd(J.g, m.label);
    MatrixXd ginv = J.g.inverse();
    return christoffel_from_jet(J, ginv, m.dim);
}

CurvatureData curvature_at(const MetricModel& m, const VectorXd& x) {
    const int n = m.dim;
    MetricJet J = m.jet_at(x);
    check_spd(J.g, m.label);

    CurvatureData C;
    C.x = x;
    C.g = J.g;
    C.ginv = J.g.inverse();
    C.fd_gap = J.fd_gap;
    C.Gamma = christoffel_from_jet(J, C.ginv, n);

    // dGamma(i, s, j, k) = d_i Gamma^s_jk
    std::vector<Tensor3> dGamma(n, Tensor3(n));
    std::vector<MatrixXd> dginv(n);
    for (int i = 0; i < n; ++i) dginv[i] = -C.ginv * J.dg[i] * C.ginv;
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) {
                        acc += dginv[i](s, l) * (J.dg[j](k, l) + J.dg[k](j, l) - J.dg[l](j, k));
                        acc += C.ginv(s, l) * (J.d2g[static_cast<size_t>(i) * n + j](k, l) +
                                               J.d2g[static_cast<size_t>(i) * n + k](j, l) -
                                               J.d2g[static_cast<size_t>(i) * n + l](j, k));
                    }
                    dGamma[i](s, j, k) = 0.5 * acc;
                    dGamma[i](s, k, j) = 0.5 * acc;
                }

    // Rup(s; i,j,k) = (R(e_i,e_j) e_k)^s
    C.Rm = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                VectorXd Rup = VectorXd::Zero(n);
                for (int s = 0; s < n; ++s) {
                    double v = dGamma[i](s, j, k) - dGamma[j](s, i, k);
                    for (int a = 0; a < n; ++a)
                        v += C.Gamma(s, i, a) * C.Gamma(a, j, k) - C.Gamma(s, j, a) * C.Gamma(a, i, k);
                    Rup[s] = v;
                }
                VectorXd low = C.g * Rup;
                for (int l = 0; l < n; ++l) {
                    C.Rm(i, j, k, l) = low[l];
                    C.Rm(j, i, k, l) = -low[l];
                }
            }
    return C;
}

Tensor4 riemann(const MetricModel& m, const VectorXd& x) { return curvature_at(m, x).Rm; }

double sectional(const CurvatureData& C, const VectorXd& u, const VectorXd& v) {
    double uu = u.dot(C.g * u), vv = v.dot(C.g * v), uv = u.dot(C.g * v);
    double area2 = uu * vv - uv * uv;
    if (area2 < 1e-12 * std::max(1.0, uu * vv))
        throw DegeneratePlaneError("degenerate plane in sectional()");
    return contract4(C.Rm, u, v, v, u) / area2;
}

double sectional(const MetricModel& m, const VectorXd& x, const VectorXd& u, const VectorXd& v) {
    return sectional(curvature_at(m, x), u, v);
}

MatrixXd ricci(const CurvatureData& C) {
    const int n = C.Rm.n;
    // trace over a g-orthonormal frame E: Ric(u,v) = sum_a Rm(E_a,u,v,E_a)
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(C.g);
    MatrixXd E = es.eigenvectors();
    for (int c = 0; c < n; ++c) E.col(c) /= std::sqrt(es.eigenvalues()[c]);
    MatrixXd ric = MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                s += contract4(C.Rm, E.col(a), VectorXd::Unit(n, u), VectorXd::Unit(n, v), E.col(a));
            ric(u, v) = s;
            ric(v, u) = s;
        }
    return ric;
}

MatrixXd ricci(const MetricModel& m, const VectorXd& x) { return ricci(curvature_at(m, x)); }

VectorXd ricci_eigenvalues(const CurvatureData& C) {
    MatrixXd ric = ricci(C);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(ric, C.g);
    return es.eigenvalues();
}

double symmetry_residual(const Tensor4& Rm) {
    const int n = Rm.n;
    double scale = std::max(Rm.max_abs(), 1e-300);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    worst = std::max(worst, std::abs(Rm(i, j, k, l) + Rm(j, i, k, l)));
                    worst = std::max(worst, std::abs(Rm(i, j, k, l) + Rm(i, j, l, k)));
                    worst = std::max(worst, std::abs(Rm(i, j, k, l) - Rm(k, l, i, j)));
                    worst = std::max(worst, std::abs(Rm(i, j, k, l) + Rm(j, k, i, l) + Rm(k, i, j, l)));
                }
    return worst / scale;
}

VectorXd curvature_op(const CurvatureData& C, const VectorXd& u, const VectorXd& v,
                      const VectorXd& w) {
    const int n = C.Rm.n;
    VectorXd low(n);
    for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    s += C.Rm(i, j, k, l) * u[i] * v[j] * w[k];
        low[l] = s;
    }
    return C.ginv * low;
}

double metric_compatibility_residual(const MetricModel& m, const VectorXd& x) {
    const int n = m.dim;
    MetricJet J = m.jet_at(x);
    MatrixXd ginv = J.g.inverse();
    Tensor3 G = christoffel_from_jet(J, ginv, n);
    // nabla_i g_jk = d_i g_jk - Gamma^a_ij g_ak - Gamma^a_ik g_ja
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = J.dg[i](j, k);
                for (int a = 0; a < n; ++a) s -= G(a, i, j) * J.g(a, k) + G(a, i, k) * J.g(j, a);
                worst = std::max(worst, std::abs(s));
            }
    return worst;
}

PlaneScan scan_planes(const CurvatureData& C, int samples, unsigned seed) {
    const int n = C.Rm.n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    PlaneScan out;
    out.min_sec = std::numeric_limits<double>::infinity();
    out.max_sec = -out.min_sec;
    for (int s = 0; s < samples; ++s) {
        VectorXd u(n), v(n);
        for (int i = 0; i < n; ++i) { u[i] = N(rng); v[i] = N(rng); }
        double uu = u.dot(C.g * u), vv = v.dot(C.g * v), uv = u.dot(C.g * v);
        if (uu * vv - uv * uv < 1e-8 * uu * vv) { --s; continue; }
        double k = sectional(C, u, v);
        if (k < out.min_sec) { out.min_sec = k; out.min_u = u; out.min_v = v; }
        out.max_sec = std::max(out.max_sec, k);
    }
    return out;
}

}  // namespace rgeo
