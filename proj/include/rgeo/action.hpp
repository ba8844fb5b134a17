#pragma once
#include <random>

#include "rgeo/metric.hpp"

namespace rgeo {

// A Lie algebra basis with structure constants, bi-invariant inner product
// and Killing-field evaluators on a chart.
struct GroupActionModel {
    int lie_dim = 0;
    std::vector<std::string> basis_labels;
    Tensor3 structure;   // [e_a, e_b] = sum_c structure(c, a, b) e_c
    MatrixXd bi_gram;    // SPD, ad-invariant
    // chart Killing fields
    std::function<VectorXd(int a, const VectorXd& x)> killing;
    std::function<void(int a, const Dual2* x, Dual2* out)> killing_dual;  // optional
    // finite isometries for invariance tests: seeded group element -> chart map
    std::function<std::function<VectorXd(const VectorXd&)>(std::mt19937_64&)> group_sampler;

    VectorXd bracket(const VectorXd& u, const VectorXd& v) const {
        VectorXd w = VectorXd::Zero(lie_dim);
        for (int c = 0; c < lie_dim; ++c)
            for (int a = 0; a < lie_dim; ++a)
                for (int b = 0; b < lie_dim; ++b) w[c] += structure(c, a, b) * u[a] * v[b];
        return w;
    }

    // n x d matrix of Killing vectors at x
    MatrixXd killing_matrix(const VectorXd& x) const {
        MatrixXd K(x.size(), lie_dim);
        for (int a = 0; a < lie_dim; ++a) K.col(a) = killing(a, x);
        return K;
    }

    // max |g_bi([a,b],c) + g_bi(b,[a,c])| over basis triples
    double ad_invariance_residual() const;

    // curv of the bi-invariant metric: |[u,v]|^2_bi / 4
    double bi_curv(const VectorXd& u, const VectorXd& v) const {
        VectorXd br = bracket(u, v);
        return 0.25 * br.dot(bi_gram * br);
    }
    // full bi-invariant curvature tensor R(u,v,w,z) = g_bi([u,v],[w,z])/4
    double bi_riemann(const VectorXd& u, const VectorXd& v, const VectorXd& w,
                      const VectorXd& z) const {
        return 0.25 * bracket(u, v).dot(bi_gram * bracket(w, z));
    }
};

struct KappaResult {
    VectorXd kappa;        // in m_x (bi-orthogonal to the isotropy algebra)
    double residual = 0.0; // max_a |g_bi(kappa, e_a) - g(v, k_a)|
    int isotropy_dim = 0;
    bool rank_warning = false;  // borderline singular values near the threshold
};

struct IsotropySplit {
    MatrixXd gx;   // basis of the isotropy algebra g_x (lie-coordinates, columns)
    MatrixXd mx;   // bi-orthogonal complement m_x
    bool rank_warning = false;
};

// g_x = nullspace of k -> k_M(x); m_x its bi-orthogonal complement.
IsotropySplit isotropy_split(const GroupActionModel& act, const MetricModel& base,
                             const VectorXd& x, double rank_tol = 1e-8);

// Solves g_bi(kappa, k) = g(v, k_M(x)) for kappa in m_x.
KappaResult kappa(const GroupActionModel& act, const MetricModel& base, const VectorXd& x,
                  const VectorXd& v);

// Ch_l(v) = (kappa_v / l^2)_M(x) + v.
VectorXd cheeger_reparam(const GroupActionModel& act, const MetricModel& base, const VectorXd& x,
                         double l, const VectorXd& v);

// Covariant derivative of the Killing field kimes_M along u at x.
VectorXd killing_covariant_derivative(const GroupActionModel& act, const MetricModel& base,
                                      const VectorXd& x, int a, const VectorXd& u);

// max symmetrized |g(nabla_u k_M, v) + g(nabla_v k_M, u)| over probes (Killing identity).
double killing_identity_residual(const GroupActionModel& act, const MetricModel& base,
                                 const VectorXd& x, unsigned seed = 1);

}  // namespace rgeo
