#include "rgeo/metric.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace rgeo {

MatrixXd MetricModel::metric_at(const VectorXd& x) const {
    if (!contains(x)) throw DomainError("point outside chart domain of " + label);
    MatrixXd g(dim, dim);
    eval(x.data(), g.data());
    return g;
}

void MetricModel::check_invariants(const VectorXd& x) const {
    MatrixXd g = metric_at(x);
    double scale = g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
        throw NumericalError("metric not symmetric at sampled point (" + label + ")");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    double mn = es.eigenvalues().minCoeff(), mx = es.eigenvalues().maxCoeff();
    if (mn <= 0.0) throw ConditioningError("metric not positive-definite (" + label + ")", mx / std::abs(mn));
}

namespace {

MetricJet dual_jet(const MetricModel& m, const VectorXd& x) {
    const int n = m.dim;
    MetricJet J;
    J.g = MatrixXd::Zero(n, n);
    J.dg.assign(n, MatrixXd::Zero(n, n));
    J.d2g.assign(static_cast<size_t>(n) * n, MatrixXd::Zero(n, n));
    std::vector<Dual2> xd(n), gd(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (int k = 0; k < n; ++k) xd[k] = Dual2(x[k], k == i ? 1.0 : 0.0, k == j ? 1.0 : 0.0, 0.0);
            m.eval_dual(xd.data(), gd.data());
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const Dual2& e = gd[static_cast<size_t>(a) * n + b];
                    if (j == i) J.g(a, b) = e.v;
                    J.dg[i](a, b) = e.d1;
                    if (i != j) J.dg[j](a, b) = e.d2;
                    J.d2g[static_cast<size_t>(i) * n + j](a, b) = e.dd;
                    J.d2g[static_cast<size_t>(j) * n + i](a, b) = e.dd;
                }
        }
    return J;
}

struct FdDerivs {
    std::vector<MatrixXd> dg, d2g;
};

FdDerivs fd_pass(const MetricModel& m, const VectorXd& x, const MatrixXd& g0, double h) {
    const int n = m.dim;
    FdDerivs D;
    D.dg.assign(n, MatrixXd(n, n));
    D.d2g.assign(static_cast<size_t>(n) * n, MatrixXd(n, n));
    MatrixXd gp(n, n), gm(n, n), gpp(n, n), gpm(n, n), gmp(n, n), gmm(n, n);
    VectorXd y = x;
    std::vector<MatrixXd> plus(n, MatrixXd(n, n)), minus(n, MatrixXd(n, n));
    for (int i = 0; i < n; ++i) {
        y = x; y[i] += h; m.eval(y.data(), plus[i].data());
        y = x; y[i] -= h; m.eval(y.data(), minus[i].data());
        D.dg[i] = (plus[i] - minus[i]) / (2.0 * h);
        D.d2g[static_cast<size_t>(i) * n + i] = (plus[i] - 2.0 * g0 + minus[i]) / (h * h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            y = x; y[i] += h; y[j] += h; m.eval(y.data(), gpp.data());
            y = x; y[i] += h; y[j] -= h; m.eval(y.data(), gpm.data());
            y = x; y[i] -= h; y[j] += h; m.eval(y.data(), gmp.data());
            y = x; y[i] -= h; y[j] -= h; m.eval(y.data(), gmm.data());
            MatrixXd mixed = (gpp - gpm - gmp + gmm) / (4.0 * h * h);
            D.d2g[static_cast<size_t>(i) * n + j] = mixed;
            D.d2g[static_cast<size_t>(j) * n + i] = mixed;
        }
    return D;
}

MetricJet fd_jet(const MetricModel& m, const VectorXd& x) {
    const int n = m.dim;
    MetricJet J;
    J.g = MatrixXd(n, n);
    m.eval(x.data(), J.g.data());
    double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    double h = 1.9e-4 * scale * m.jet.fd_scale;  // ~ eps^{1/4} * scale
    FdDerivs Dh = fd_pass(m, x, J.g, h);
    if (!m.jet.richardson) {
        J.dg = std::move(Dh.dg);
        J.d2g = std::move(Dh.d2g);
        return J;
    }
    FdDerivs Dh2 = fd_pass(m, x, J.g, 0.5 * h);
    J.dg.resize(n);
    J.d2g.resize(static_cast<size_t>(n) * n);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
        gap = std::max(gap, (Dh2.dg[i] - Dh.dg[i]).cwiseAbs().maxCoeff());
        J.dg[i] = (4.0 * Dh2.dg[i] - Dh.dg[i]) / 3.0;
    }
    for (size_t k = 0; k < J.d2g.size(); ++k) {
        gap = std::max(gap, (Dh2.d2g[k] - Dh.d2g[k]).cwiseAbs().maxCoeff());
        J.d2g[k] = (4.0 * Dh2.d2g[k] - Dh.d2g[k]) / 3.0;
    }
    J.fd_gap = gap;
    return J;
}

}  // namespace

MetricJet MetricModel::jet_at(const VectorXd& x) const {
    if (!contains(x)) throw DomainError("point outside chart domain of " + label);
    return has_dual() ? dual_jet(*this, x) : fd_jet(*this, x);
}

MetricModel scaled_model(const MetricModel& base, double c2) {
    MetricModel m = base;
    m.label = base.label + "-scaled";
    EvalFn e = base.eval;
    int n = base.dim;
    m.eval = [e, c2, n](const double* x, double* g) {
        e(x, g);
        for (int i = 0; i < n * n; ++i) g[i] *= c2;
    };
    if (base.eval_dual) {
        DualEvalFn ed = base.eval_dual;
        m.eval_dual = [ed, c2, n](const Dual2* x, Dual2* g) {
            ed(x, g);
            for (int i = 0; i < n * n; ++i) g[i] = g[i] * c2;
        };
    }
    return m;
}

}  // namespace rgeo
