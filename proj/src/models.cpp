#include "rgeo/models.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "rgeo/build_config.hpp"

namespace rgeo {

using nlohmann::json;

const StratumSpec& Model::stratum(const std::string& sid) const {
    for (const auto& s : strata)
        if (s.id == sid) return s;
    throw ConfigurationError("model " + id + " has no stratum '" + sid + "'");
}

std::string default_data_dir() {
    if (const char* env = std::getenv("RGEO_DATA_DIR")) return env;
    return RGEO_DEFAULT_DATA_DIR;
}

VectorXd sphere_embed_pt(const VectorXd& x, int chart) {
    VectorXd P(x.size() + 1);
    sphere_embed(x.data(), static_cast<int>(x.size()), chart, P.data());
    return P;
}

VectorXd sphere_unembed_pt(const VectorXd& P, int chart) {
    const int n = static_cast<int>(P.size()) - 1;
    double den = chart == 0 ? (1.0 - P[0]) : (1.0 + P[0]);
    if (std::abs(den) < 1e-12) throw DomainError("point at the excluded pole of the chart");
    return P.tail(n) / den;
}

MatrixXd sphere_dembed(const VectorXd& x, int chart) {
    const int n = static_cast<int>(x.size());
    MatrixXd J(n + 1, n);
    double s2 = x.squaredNorm();
    double den = 1.0 / (1.0 + s2);
    double sgn = chart == 0 ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
        J(0, j) = sgn * 4.0 * x[j] * den * den;
        for (int i = 0; i < n; ++i)
            J(i + 1, j) = 2.0 * ((i == j ? 1.0 : 0.0) - 2.0 * x[i] * x[j] * den) * den;
    }
    return J;
}

namespace {

template <class T>
void killing_chart_t(const MatrixXd& A, const T* x, int n, int chart, T* K) {
    std::vector<T> P(n + 1), AP(n + 1, T(0.0));
    sphere_embed(x, n, chart, P.data());
    for (int i = 0; i <= n; ++i) {
        T acc = T(0.0);
        for (int j = 0; j <= n; ++j)
            if (A(i, j) != 0.0) acc += A(i, j) * P[j];
        AP[i] = acc;
    }
    T den = (chart == 0) ? (1.0 - P[0]) : (1.0 + P[0]);
    double sgn = (chart == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) K[i] = AP[i + 1] / den + sgn * P[i + 1] * AP[0] / (den * den);
}

}  // namespace

VectorXd sphere_killing_chart(const MatrixXd& A, const VectorXd& x, int chart) {
    VectorXd K(x.size());
    killing_chart_t(A, x.data(), static_cast<int>(x.size()), chart, K.data());
    return K;
}

namespace {

// ---------------------------------------------------------------- metrics

struct FlatMetric {
    int n;
    template <class T>
    void operator()(const T* /*x*/, T* g) const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g[i * n + j] = T(i == j ? 1.0 : 0.0);
    }
};

struct SphereMetric {
    int n;
    double r;
    template <class T>
    void operator()(const T* x, T* g) const {
        T s2 = T(0.0);
        for (int i = 0; i < n; ++i) s2 += x[i] * x[i];
        T c = 4.0 * r * r / ((1.0 + s2) * (1.0 + s2));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g[i * n + j] = (i == j) ? c : T(0.0);
    }
};

// round S^3 with the Hopf fiber rescaled by eps2 = l^2/(1+l^2):
// g = g_round + (eps2 - 1) (g_round K)(g_round K)^T, |K|_round = 1
struct BergerMetric {
    MatrixXd A;  // hopf generator on R^4
    double eps2;
    int chart;
    template <class T>
    void operator()(const T* x, T* g) const {
        const int n = 3;
        T s2 = T(0.0);
        for (int i = 0; i < n; ++i) s2 += x[i] * x[i];
        T c = 4.0 / ((1.0 + s2) * (1.0 + s2));
        T K[3];
        killing_chart_t(A, x, n, chart, K);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                T v = (eps2 - 1.0) * (c * K[i]) * (c * K[j]);
                if (i == j) v += c;
                g[i * n + j] = v;
            }
    }
};

DomainFn ball_domain(double R) {
    return [R](const VectorXd& x) { return x.norm() < R; };
}

MatrixXd rot_generator(int n1, const std::vector<std::array<double, 3>>& planes) {
    MatrixXd A = MatrixXd::Zero(n1, n1);
    for (const auto& p : planes) {
        int i = static_cast<int>(p[0]), j = static_cast<int>(p[1]);
        A(j, i) += p[2];
        A(i, j) -= p[2];
    }
    return A;
}

// quaternion product table on (1, i, j, k)
VectorXd quat_mul(const VectorXd& a, const VectorXd& b) {
    VectorXd q(4);
    q[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
    q[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
    q[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1];
    q[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0];
    return q;
}

// derivation D_a = (L_a - R_a)/2 on H for imaginary unit a in {i, j, k}
MatrixXd quat_derivation(int axis) {
    VectorXd a = VectorXd::Zero(4);
    a[axis] = 1.0;
    MatrixXd D(4, 4);
    for (int c = 0; c < 4; ++c) {
        VectorXd e = VectorXd::Zero(4);
        e[c] = 1.0;
        D.col(c) = 0.5 * (quat_mul(a, e) - quat_mul(e, a));
    }
    return D;
}

MatrixXd davis_generator(int axis) {
    MatrixXd D = quat_derivation(axis + 1);
    MatrixXd A = MatrixXd::Zero(8, 8);
    A.block(0, 0, 4, 4) = D;
    A.block(4, 4, 4, 4) = D;
    return A;
}

// Rodrigues: exp of the so(3) matrix with axis-angle vector w
MatrixXd so3_exp(const Eigen::Vector3d& w) {
    double th = w.norm();
    MatrixXd W = MatrixXd::Zero(3, 3);
    if (th < 1e-14) return MatrixXd::Identity(3, 3);
    Eigen::Vector3d u = w / th;
    W << 0, -u[2], u[1], u[2], 0, -u[0], -u[1], u[0], 0;
    return MatrixXd::Identity(3, 3) + std::sin(th) * W + (1.0 - std::cos(th)) * W * W;
}

std::shared_ptr<GroupActionModel> make_sphere_action(const std::string& kind, int n) {
    auto act = std::make_shared<GroupActionModel>();
    std::vector<MatrixXd> gens;
    if (kind == "hopf-s1") {
        act->lie_dim = 1;
        act->basis_labels = {"hopf"};
        gens.push_back(rot_generator(n + 1, {{0, 1, 1.0}, {2, 3, 1.0}}));
        act->structure = Tensor3(1);
        act->bi_gram = MatrixXd::Identity(1, 1);
        act->group_sampler = [gens, n](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> U(0.0, 2.0 * M_PI);
            double t = U(rng);
            MatrixXd R = (t * gens[0]).exp();
            return [R](const VectorXd& x) { return sphere_unembed_pt(R * sphere_embed_pt(x)); };
        };
    } else if (kind == "torus-t2") {
        act->lie_dim = 2;
        act->basis_labels = {"rot-z1", "rot-z2"};
        gens.push_back(rot_generator(n + 1, {{0, 1, 1.0}}));
        gens.push_back(rot_generator(n + 1, {{2, 3, 1.0}}));
        act->structure = Tensor3(2);
        act->bi_gram = MatrixXd::Identity(2, 2);
        act->group_sampler = [gens](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> U(0.0, 2.0 * M_PI);
            MatrixXd R = (U(rng) * gens[0] + U(rng) * gens[1]).exp();
            return [R](const VectorXd& x) { return sphere_unembed_pt(R * sphere_embed_pt(x)); };
        };
    } else if (kind == "davis-so3") {
        act->lie_dim = 3;
        act->basis_labels = {"D_i", "D_j", "D_k"};
        for (int a = 0; a < 3; ++a) gens.push_back(davis_generator(a));
        // [D_i, D_j] = D_k cyclic
        act->structure = Tensor3(3);
        act->structure(2, 0, 1) = 1;  act->structure(2, 1, 0) = -1;
        act->structure(0, 1, 2) = 1;  act->structure(0, 2, 1) = -1;
        act->structure(1, 2, 0) = 1;  act->structure(1, 0, 2) = -1;
        act->bi_gram = MatrixXd::Identity(3, 3);
        act->group_sampler = [](std::mt19937_64& rng) {
            std::normal_distribution<double> N(0.0, 1.0);
            Eigen::Vector3d w(N(rng), N(rng), N(rng));
            MatrixXd R3 = so3_exp(w);
            MatrixXd O = MatrixXd::Identity(8, 8);
            O.block(1, 1, 3, 3) = R3;
            O.block(5, 5, 3, 3) = R3;
            return [O](const VectorXd& x) { return sphere_unembed_pt(O * sphere_embed_pt(x)); };
        };
    } else {
        throw ConfigurationError("unknown action kind: " + kind);
    }
    act->killing = [gens, n](int a, const VectorXd& x) {
        return sphere_killing_chart(gens[a], x);
    };
    act->killing_dual = [gens, n](int a, const Dual2* x, Dual2* out) {
        killing_chart_t(gens[a], x, n, 0, out);
    };
    return act;
}

// ---------------------------------------------------------------- strata

// squared-distance evaluators on the primary chart of round spheres
template <class T>
T embed_component_sq(const T* x, int n, const std::vector<int>& idx) {
    std::vector<T> P(n + 1);
    sphere_embed(x, n, 0, P.data());
    T s = T(0.0);
    for (int i : idx) s += P[i] * P[i];
    return s;
}

ScalarField sphere_subsphere_dist_sq(int n, std::vector<int> complement_idx) {
    ScalarField f;
    f.eval = [n, complement_idx](const double* x) {
        return asin_sqrt_sq(embed_component_sq(x, n, complement_idx));
    };
    f.eval_dual = [n, complement_idx](const Dual2* x) {
        return asin_sqrt_sq(embed_component_sq(x, n, complement_idx));
    };
    return f;
}

ScalarField sphere_point_dist_sq(int n, const VectorXd& p_chart) {
    VectorXd P0 = sphere_embed_pt(p_chart);
    ScalarField f;
    f.eval = [n, P0](const double* x) {
        std::vector<double> P(n + 1);
        sphere_embed(x, n, 0, P.data());
        double w = 0.0;
        for (int i = 0; i <= n; ++i) w += P[i] * P0[i];
        return acos_sq_near_one(w);
    };
    f.eval_dual = [n, P0](const Dual2* x) {
        std::vector<Dual2> P(n + 1);
        sphere_embed(x, n, 0, P.data());
        Dual2 w(0.0);
        for (int i = 0; i <= n; ++i) w += P[i] * P0[i];
        return acos_sq_near_one(w);
    };
    return f;
}

// Davis SO(2) stratum: dist = asin(sqrt(lambda_min of the 2x2 Gram of (Im u, Im v)))
template <class T>
T davis_so2_dist_sq_t(const T* x) {
    using std::sqrt;
    std::vector<T> P(8);
    sphere_embed(x, 7, 0, P.data());
    T a = P[1] * P[1] + P[2] * P[2] + P[3] * P[3];
    T c = P[5] * P[5] + P[6] * P[6] + P[7] * P[7];
    T b = P[1] * P[5] + P[2] * P[6] + P[3] * P[7];
    T disc = (a - c) * (a - c) + 4.0 * b * b;
    T lmin = 0.5 * (a + c - sqrt(disc));
    return asin_sqrt_sq(lmin);
}

StratumSpec make_stratum(const std::string& id, const Model& mod, const json& cfg) {
    StratumSpec st;
    st.id = id;
    const int n = mod.dim;
    auto box1 = [&](double lo, double hi) {
        st.sub.k = 1;
        st.sub.lo = VectorXd::Constant(1, lo);
        st.sub.hi = VectorXd::Constant(1, hi);
    };
    if (id == "point-origin") {
        st.sub.k = 0;
        VectorXd p = VectorXd::Zero(n);
        st.sub.param = [p](const VectorXd&) { return p; };
        st.sub.dist_sq = sphere_point_dist_sq(n, p);
        st.sub.footpoint_exact = [p](const VectorXd&) { return p; };
        st.inj_bound = M_PI;
        st.isotropy_label = "point";
        st.descendant_number = 1;
    } else if (id == "circle-z1-0") {
        // {z1 = 0}: unit circle in the (x2,x3) chart plane
        box1(0.0, 2.0 * M_PI);
        st.sub.param = [](const VectorXd& th) {
            VectorXd x(3);
            x << 0.0, std::cos(th[0]), std::sin(th[0]);
            return x;
        };
        st.sub.dist_sq = sphere_subsphere_dist_sq(3, {0, 1});
        st.sub.footpoint_exact = [](const VectorXd& x) {
            VectorXd P = sphere_embed_pt(x);
            double nz = std::sqrt(P[2] * P[2] + P[3] * P[3]);
            VectorXd Q(4);
            Q << 0.0, 0.0, P[2] / nz, P[3] / nz;
            return sphere_unembed_pt(Q);
        };
        st.inj_bound = M_PI / 2;
        st.isotropy_label = "SO(2) (z1-rotation)";
        st.descendant_number = 1;
        st.isotropy_algebra = [](const VectorXd&) {
            MatrixXd b(2, 1);
            b << 1.0, 0.0;
            return b;
        };
    } else if (id == "circle-z2-0") {
        box1(M_PI / 2, 3 * M_PI / 2);
        st.sub.param = [](const VectorXd& th) {
            VectorXd x(3);
            x << std::sin(th[0]) / (1.0 - std::cos(th[0])), 0.0, 0.0;
            return x;
        };
        st.sub.dist_sq = sphere_subsphere_dist_sq(3, {2, 3});
        st.sub.footpoint_exact = [](const VectorXd& x) {
            VectorXd P = sphere_embed_pt(x);
            double nz = std::sqrt(P[0] * P[0] + P[1] * P[1]);
            VectorXd Q(4);
            Q << P[0] / nz, P[1] / nz, 0.0, 0.0;
            return sphere_unembed_pt(Q);
        };
        st.inj_bound = M_PI / 2;
        st.isotropy_label = "SO(2) (z2-rotation)";
        st.descendant_number = 1;
        st.isotropy_algebra = [](const VectorXd&) {
            MatrixXd b(2, 1);
            b << 0.0, 1.0;
            return b;
        };
    } else if (id == "equator-s2") {
        st.sub.k = 2;
        st.sub.lo = VectorXd::Constant(2, -2.5);
        st.sub.hi = VectorXd::Constant(2, 2.5);
        st.sub.param = [](const VectorXd& th) {
            VectorXd x(3);
            x << th[0], th[1], 0.0;
            return x;
        };
        st.sub.dist_sq = sphere_subsphere_dist_sq(3, {3});
        st.sub.footpoint_exact = [](const VectorXd& x) {
            VectorXd P = sphere_embed_pt(x);
            VectorXd Q = P;
            Q[3] = 0.0;
            Q /= Q.norm();
            return sphere_unembed_pt(Q);
        };
        st.inj_bound = M_PI / 2;
        st.isotropy_label = "codim-1 equator";
        st.descendant_number = 1;
    } else if (id == "davis-circle") {
        box1(0.5, 2.0 * M_PI - 0.5);
        st.sub.param = [](const VectorXd& th) {
            VectorXd x = VectorXd::Zero(7);
            x[3] = std::sin(th[0]) / (1.0 - std::cos(th[0]));
            return x;
        };
        st.sub.dist_sq = sphere_subsphere_dist_sq(7, {1, 2, 3, 5, 6, 7});
        st.sub.footpoint_exact = [](const VectorXd& x) {
            VectorXd P = sphere_embed_pt(x);
            double nz = std::sqrt(P[0] * P[0] + P[4] * P[4]);
            VectorXd Q = VectorXd::Zero(8);
            Q[0] = P[0] / nz;
            Q[4] = P[4] / nz;
            return sphere_unembed_pt(Q);
        };
        st.inj_bound = M_PI / 2;
        st.isotropy_label = "SO(3) (real pairs)";
        st.descendant_number = 1;
        st.isotropy_algebra = [](const VectorXd&) { return MatrixXd::Identity(3, 3); };
    } else if (id == "davis-so2-stratum") {
        st.sub.k = 5;
        st.sub.lo.resize(5);
        st.sub.hi.resize(5);
        st.sub.lo << 0.4, 0.0, 0.4, 0.4, 0.0;
        st.sub.hi << M_PI - 0.4, 2.0 * M_PI, M_PI - 0.4, M_PI - 0.4, 2.0 * M_PI;
        st.sub.param = [](const VectorXd& th) {
            Eigen::Vector3d alpha(std::sin(th[0]) * std::cos(th[1]),
                                  std::sin(th[0]) * std::sin(th[1]), std::cos(th[0]));
            double a = std::cos(th[2]);
            double b = std::sin(th[2]) * std::cos(th[3]);
            double c = std::sin(th[2]) * std::sin(th[3]) * std::cos(th[4]);
            double d = std::sin(th[2]) * std::sin(th[3]) * std::sin(th[4]);
            VectorXd P(8);
            P << a, b * alpha[0], b * alpha[1], b * alpha[2], c, d * alpha[0], d * alpha[1],
                d * alpha[2];
            return sphere_unembed_pt(P);
        };
        st.sub.dist_sq.eval = [](const double* x) { return davis_so2_dist_sq_t(x); };
        st.sub.dist_sq.eval_dual = [](const Dual2* x) { return davis_so2_dist_sq_t(x); };
        st.sub.footpoint_exact = [](const VectorXd& x) {
            VectorXd P = sphere_embed_pt(x);
            Eigen::Vector3d p(P[1], P[2], P[3]), q(P[5], P[6], P[7]);
            Eigen::Matrix2d G2;
            G2 << p.dot(p), p.dot(q), p.dot(q), q.dot(q);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G2);
            Eigen::Vector2d w = es.eigenvectors().col(1);  // top eigenvector
            Eigen::Vector3d alpha = (w[0] * p + w[1] * q).normalized();
            VectorXd Q(8);
            double bp = p.dot(alpha), dq = q.dot(alpha);
            Q << P[0], bp * alpha[0], bp * alpha[1], bp * alpha[2], P[4], dq * alpha[0],
                dq * alpha[1], dq * alpha[2];
            Q /= Q.norm();
            return sphere_unembed_pt(Q);
        };
        st.inj_bound = 0.5;  // limited by the c-locus toward maximally non-commuting pairs
        st.isotropy_label = "SO(2) (commuting non-real pairs)";
        st.descendant_number = 2;
        st.cutoff_d1 = 0.35;
        st.cutoff_d2 = 0.55;
        st.isotropy_algebra = [](const VectorXd& p_chart) {
            VectorXd P = sphere_embed_pt(p_chart);
            Eigen::Vector3d pu(P[1], P[2], P[3]), pv(P[5], P[6], P[7]);
            Eigen::Vector3d alpha = pu.norm() > pv.norm() ? pu : pv;
            alpha.normalize();
            MatrixXd b(3, 1);
            b << alpha[0], alpha[1], alpha[2];
            return b;
        };
    } else {
        throw ConfigurationError("unknown stratum id: " + id);
    }
    st.sub.tube_radius = cfg.value("tube_radius", st.inj_bound / 2.0);
    if (cfg.contains("cutoff_d1")) st.cutoff_d1 = cfg["cutoff_d1"].get<double>();
    if (cfg.contains("cutoff_d2")) st.cutoff_d2 = cfg["cutoff_d2"].get<double>();
    return st;
}

Model build_model(const json& e) {
    Model m;
    m.id = e.at("id").get<std::string>();
    m.description = e.value("description", "");
    const std::string kind = e.at("kind").get<std::string>();

    if (kind == "flat") {
        m.dim = e.at("dim").get<int>();
        m.charts.push_back(make_closed_form_model(m.dim, m.id, FlatMetric{m.dim}));
    } else if (kind == "sphere" || kind == "sphere-action") {
        m.dim = e.at("dim").get<int>();
        double r = e.value("radius", 1.0);
        MetricModel c0 = make_closed_form_model(m.dim, m.id, SphereMetric{m.dim, r}, ball_domain(8.0));
        MetricModel c1 = make_closed_form_model(m.dim, m.id + "#2", SphereMetric{m.dim, r}, ball_domain(8.0));
        m.charts = {c0, c1};
        m.transition = [](const VectorXd& x) { return VectorXd(x / x.squaredNorm()); };
        m.dtransition = [](const VectorXd& x) {
            double s2 = x.squaredNorm();
            MatrixXd J = MatrixXd::Identity(x.size(), x.size()) / s2 -
                         2.0 * x * x.transpose() / (s2 * s2);
            return J;
        };
        if (kind == "sphere-action")
            m.action = make_sphere_action(e.at("action").get<std::string>(), m.dim);
    } else if (kind == "berger") {
        m.dim = 3;
        double l = e.value("l", 1.0);
        double eps2 = l * l / (1.0 + l * l);
        MatrixXd A = rot_generator(4, {{0, 1, 1.0}, {2, 3, 1.0}});
        m.charts.push_back(
            make_closed_form_model(3, m.id, BergerMetric{A, eps2, 0}, ball_domain(8.0)));
        m.declared["eps2"] = eps2;
        m.declared["l"] = l;
    } else if (kind == "flat-torus-action") {
        m.dim = 2;
        m.charts.push_back(make_closed_form_model(2, m.id, FlatMetric{2}));
        auto act = std::make_shared<GroupActionModel>();
        act->lie_dim = 1;
        act->basis_labels = {"diag"};
        act->structure = Tensor3(1);
        act->bi_gram = MatrixXd::Identity(1, 1);
        act->killing = [](int, const VectorXd& x) {
            VectorXd k(2);
            k << 1.0, 1.0;
            (void)x;
            return k;
        };
        act->killing_dual = [](int, const Dual2* /*x*/, Dual2* out) {
            out[0] = Dual2(1.0);
            out[1] = Dual2(1.0);
        };
        act->group_sampler = [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> U(-0.3, 0.3);
            double t = U(rng);
            return [t](const VectorXd& x) { return VectorXd(x + t * VectorXd::Ones(2)); };
        };
        m.action = act;
    } else if (kind == "descriptor") {
        m.dim = e.value("dim", 0);
    } else {
        throw ConfigurationError("unknown model kind: " + kind);
    }
    if (e.contains("strata"))
        for (const auto& sc : e["strata"])
            m.strata.push_back(make_stratum(sc.at("id").get<std::string>(), m, sc));
    if (e.contains("declared"))
        for (auto it = e["declared"].begin(); it != e["declared"].end(); ++it)
            m.declared[it.key()] = it.value().get<double>();
    if (e.contains("notes"))
        for (auto it = e["notes"].begin(); it != e["notes"].end(); ++it)
            m.notes[it.key()] = it.value().get<std::string>();
    return m;
}

}  // namespace

Catalog::Catalog(const std::string& data_dir) : dir_(data_dir.empty() ? default_data_dir() : data_dir) {
    std::ifstream in(dir_ + "/models.json");
    if (!in) throw ConfigurationError("cannot open catalog: " + dir_ + "/models.json");
    json doc = json::parse(in);
    for (const auto& e : doc.at("models")) {
        Model m = build_model(e);
        order_.push_back(m.id);
        models_.emplace(m.id, std::move(m));
    }
}

std::vector<std::string> Catalog::ids() const { return order_; }

bool Catalog::has(const std::string& id) const { return models_.count(id) > 0; }

const Model& Catalog::get(const std::string& id) const {
    auto it = models_.find(id);
    if (it == models_.end()) throw ConfigurationError("unknown model id: " + id);
    return it->second;
}

std::string Catalog::describe(const std::string& id) const {
    const Model& m = get(id);
    std::ostringstream os;
    os << "model: " << m.id << "\n";
    if (!m.description.empty()) os << "  " << m.description << "\n";
    os << "  dim: " << m.dim << "\n";
    os << "  charts: " << m.charts.size();
    if (m.charts.size() > 1) os << " (stereographic pair, transition x -> x/|x|^2)";
    os << "\n";
    if (m.action) {
        os << "  action: dim " << m.action->lie_dim << ", basis {";
        for (size_t i = 0; i < m.action->basis_labels.size(); ++i)
            os << (i ? ", " : "") << m.action->basis_labels[i];
        os << "}\n";
    }
    for (const auto& s : m.strata) {
        os << "  stratum " << s.id << ": isotropy " << s.isotropy_label << ", descendant number "
           << s.descendant_number << ", inj bound " << s.inj_bound;
        if (s.cutoff_d1 > 0) os << ", cutoff band [" << s.cutoff_d1 << ", " << s.cutoff_d2 << "]";
        os << "\n";
    }
    for (const auto& [k, v] : m.declared) os << "  declared " << k << " = " << v << "\n";
    for (const auto& [k, v] : m.notes) os << "  " << k << ": " << v << "\n";
    return os.str();
}

AtlasState atlas_geodesic(const Model& mod, AtlasState s, double T, int* handoffs) {
    if (mod.charts.size() < 2) throw ConfigurationError("atlas_geodesic needs a two-chart model");
    double done = 0.0;
    int hops = 0;
    // integrate in the current chart while |x| <= 2.2; hand off past that
    while (done < T - 1e-12) {
        MetricModel chart = mod.charts[s.chart];
        chart.in_domain = ball_domain(2.2);
        if (s.x.norm() >= 2.2) {
            // start outside the comfort ball: switch first
            VectorXd y = mod.transition(s.x);
            s.v = mod.dtransition(s.x) * s.v;
            s.x = y;
            s.chart = 1 - s.chart;
            ++hops;
            continue;
        }
        GeodesicPath p = geodesic(chart, s.x, s.v, T - done);
        done += p.exit_t;
        s.x = p.x.back();
        s.v = p.v.back();
        if (!p.truncated) break;
        VectorXd y = mod.transition(s.x);
        s.v = mod.dtransition(s.x) * s.v;
        s.x = y;
        s.chart = 1 - s.chart;
        ++hops;
        if (hops > 64) throw NumericalError("atlas_geodesic: too many chart handoffs");
    }
    if (handoffs) *handoffs = hops;
    return s;
}

}  // namespace rgeo
