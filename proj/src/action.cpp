#include "rgeo/action.hpp"

#include <cmath>

#include "rgeo/curvature.hpp"

namespace rgeo {

double GroupActionModel::ad_invariance_residual() const {
    double worst = 0.0;
    for (int a = 0; a < lie_dim; ++a)
        for (int b = 0; b < lie_dim; ++b)
            for (int c = 0; c < lie_dim; ++c) {
                double s = 0.0;
                for (int d = 0; d < lie_dim; ++d)
                    s += structure(d, a, b) * bi_gram(d, c) + structure(d, a, c) * bi_gram(b, d);
                worst = std::max(worst, std::abs(s));
            }
    return worst;
}

IsotropySplit isotropy_split(const GroupActionModel& act, const MetricModel& base,
                             const VectorXd& x, double rank_tol) {
    MatrixXd K = act.killing_matrix(x);
    Eigen::JacobiSVD<MatrixXd> svd(K, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    IsotropySplit out;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()[i];
        if (s > rank_tol * std::max(smax, 1e-300)) ++r;
        if (s > 0.1 * rank_tol * smax && s <= 10.0 * rank_tol * smax) out.rank_warning = true;
    }
    out.gx = svd.matrixV().rightCols(act.lie_dim - r);
    // bi-orthogonal complement of g_x
    if (out.gx.cols() == 0) {
        out.mx = MatrixXd::Identity(act.lie_dim, act.lie_dim);
    } else {
        MatrixXd A = out.gx.transpose() * act.bi_gram;  // (d-r') x d
        out.mx = nullspace(A, 1e-12);
    }
    (void)base;
    return out;
}

KappaResult kappa(const GroupActionModel& act, const MetricModel& base, const VectorXd& x,
                  const VectorXd& v) {
    MatrixXd K = act.killing_matrix(x);
    MatrixXd g = base.metric_at(x);
    VectorXd beta = K.transpose() * g * v;
    KappaResult out;
    out.kappa = act.bi_gram.ldlt().solve(beta);
    double scale = std::max(1.0, std::sqrt(std::abs(v.dot(g * v))));
    out.residual = (act.bi_gram * out.kappa - beta).cwiseAbs().maxCoeff() / scale;
    IsotropySplit split = isotropy_split(act, base, x);
    out.isotropy_dim = static_cast<int>(split.gx.cols());
    out.rank_warning = split.rank_warning;
    // consistency: kappa must be bi-orthogonal to g_x
    if (split.gx.cols() > 0) {
        double ortho = (split.gx.transpose() * act.bi_gram * out.kappa).cwiseAbs().maxCoeff();
        out.residual = std::max(out.residual, ortho / scale);
    }
    return out;
}

VectorXd cheeger_reparam(const GroupActionModel& act, const MetricModel& base, const VectorXd& x,
                         double l, const VectorXd& v) {
    if (l <= 0) throw InputError("cheeger_reparam: l must be positive");
    KappaResult k = kappa(act, base, x, v);
    return act.killing_matrix(x) * (k.kappa / (l * l)) + v;
}

VectorXd killing_covariant_derivative(const GroupActionModel& act, const MetricModel& base,
                                      const VectorXd& x, int a, const VectorXd& u) {
    const int n = base.dim;
    VectorXd out(n);
    if (act.killing_dual) {
        // directional derivative via dual seeding along u
        std::vector<Dual2> xd(n), kd(n);
        for (int i = 0; i < n; ++i) xd[i] = Dual2(x[i], u[i], 0.0, 0.0);
        act.killing_dual(a, xd.data(), kd.data());
        for (int i = 0; i < n; ++i) out[i] = kd[i].d1;
    } else {
        const double h = 1e-6 * std::max(1.0, x.norm());
        out = (act.killing(a, x + h * u) - act.killing(a, x - h * u)) / (2.0 * h);
    }
    Tensor3 G = christoffel(base, x);
    VectorXd k = act.killing(a, x);
    for (int kk = 0; kk < n; ++kk) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += G(kk, i, j) * u[i] * k[j];
        out[kk] += acc;
    }
    return out;
}

double killing_identity_residual(const GroupActionModel& act, const MetricModel& base,
                                 const VectorXd& x, unsigned seed) {
    const int n = base.dim;
    MatrixXd g = base.metric_at(x);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst = 0.0;
    for (int a = 0; a < act.lie_dim; ++a)
        for (int probe = 0; probe < 4; ++probe) {
            VectorXd u(n), v(n);
            for (int i = 0; i < n; ++i) { u[i] = N(rng); v[i] = N(rng); }
            VectorXd du = killing_covariant_derivative(act, base, x, a, u);
            VectorXd dv = killing_covariant_derivative(act, base, x, a, v);
            worst = std::max(worst, std::abs(u.dot(g * dv) + v.dot(g * du)) /
                                        (u.norm() * v.norm()));
        }
    return worst;
}

}  // namespace rgeo
