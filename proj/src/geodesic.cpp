#include "rgeo/geodesic.hpp"

#include <cmath>

namespace rgeo {

double g_norm(const MetricModel& m, const VectorXd& x, const VectorXd& v) {
    MatrixXd g = m.metric_at(x);
    return std::sqrt(std::max(0.0, v.dot(g * v)));
}

namespace {

// state = [x, v]
OdeRhs geodesic_rhs(const MetricModel& m) {
    const int n = m.dim;
    return [&m, n](double, const VectorXd& y, VectorXd& dy) {
        VectorXd x = y.head(n), v = y.segment(n, n);
        Tensor3 G = christoffel(m, x);
        dy.resize(2 * n);
        dy.head(n) = v;
        for (int k = 0; k < n; ++k) {
            double a = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a += G(k, i, j) * v[i] * v[j];
            dy[n + k] = -a;
        }
    };
}

std::vector<double> make_sample_times(double T, const GeodesicOptions& opt) {
    std::vector<double> s = opt.sample_times;
    if (opt.samples > 0)
        for (int i = 0; i <= opt.samples; ++i) s.push_back(T * i / opt.samples);
    s.push_back(0.0);
    s.push_back(T);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            s.end());
    return s;
}

}  // namespace

GeodesicPath geodesic(const MetricModel& m, const VectorXd& x, const VectorXd& v, double T,
                      const GeodesicOptions& opt) {
    const int n = m.dim;
    if (std::abs(g_norm(m, x, v) - 1.0) > 1e-10)
        throw InputError("geodesic(): initial velocity is not unit speed");
    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    oo.sample_times = make_sample_times(T, opt);
    if (m.in_domain)
        oo.stop = [&m, n](double, const VectorXd& y) { return !m.in_domain(y.head(n)); };

    // trial stages may probe slightly past the domain; the stop test guards the path
    MetricModel inner = m;
    inner.in_domain = nullptr;
    VectorXd y0(2 * n);
    y0 << x, v;
    OdeSolution sol = ode_solve(geodesic_rhs(inner), 0.0, T, y0, oo);
    if (!sol.ok && !sol.stopped) throw NumericalError("geodesic integration failed: " + sol.message +
                                                      " after " + std::to_string(sol.n_steps) + " steps");
    GeodesicPath p;
    p.n_steps = sol.n_steps;
    p.truncated = sol.stopped;
    p.exit_t = sol.stopped ? sol.t_end : T;
    for (size_t i = 0; i < sol.times.size(); ++i) {
        if (sol.stopped && sol.times[i] > sol.t_end) break;
        p.t.push_back(sol.times[i]);
        p.x.push_back(sol.states[i].head(n));
        p.v.push_back(sol.states[i].segment(n, n));
    }
    if (p.t.empty() || std::abs(p.t.back() - sol.t_end) > 1e-12) {
        p.t.push_back(sol.t_end);
        p.x.push_back(sol.y_end.head(n));
        p.v.push_back(sol.y_end.segment(n, n));
    }
    return p;
}

VectorXd exp_map(const MetricModel& m, const VectorXd& x, const VectorXd& w, double rtol) {
    double len = g_norm(m, x, w);
    if (len < 1e-14) return x;
    GeodesicOptions opt;
    opt.rtol = rtol;
    GeodesicPath p = geodesic(m, x, w / len, len, opt);
    if (p.truncated) throw DomainError("exp_map left the chart domain");
    return p.x.back();
}

JacobiSolution jacobi_transport(const MetricModel& m, const VectorXd& x, const VectorXd& v,
                                double T, const std::vector<VectorXd>& J0,
                                const std::vector<VectorXd>& Jp0,
                                const GeodesicOptions& opt) {
    const int n = m.dim;
    const int nf = static_cast<int>(J0.size());
    if (Jp0.size() != J0.size()) throw InputError("jacobi_transport: J0/Jp0 size mismatch");
    if (std::abs(g_norm(m, x, v) - 1.0) > 1e-10)
        throw InputError("jacobi_transport(): geodesic is not unit speed");

    // state = [x, v, (J_f, W_f)_f] with W the covariant derivative of J:
    //   dJ/dt = W - Gamma(v, J),   dW/dt = -Gamma(v, W) - R(J, v)v
    OdeRhs rhs = [&m, n, nf](double, const VectorXd& y, VectorXd& dy) {
        VectorXd xx = y.head(n), vv = y.segment(n, n);
        CurvatureData C = curvature_at(m, xx);
        dy.resize(y.size());
        dy.head(n) = vv;
        for (int k = 0; k < n; ++k) {
            double a = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a += C.Gamma(k, i, j) * vv[i] * vv[j];
            dy[n + k] = -a;
        }
        for (int f = 0; f < nf; ++f) {
            VectorXd J = y.segment(2 * n + 2 * n * f, n);
            VectorXd W = y.segment(2 * n + 2 * n * f + n, n);
            VectorXd RJ = curvature_op(C, J, vv, vv);  // R(J, v)v
            for (int k = 0; k < n; ++k) {
                double gj = 0.0, gw = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        gj += C.Gamma(k, i, j) * vv[i] * J[j];
                        gw += C.Gamma(k, i, j) * vv[i] * W[j];
                    }
                dy[2 * n + 2 * n * f + k] = W[k] - gj;
                dy[2 * n + 2 * n * f + n + k] = -gw - RJ[k];
            }
        }
    };

    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    oo.sample_times = make_sample_times(T, opt);
    VectorXd y0(2 * n + 2 * n * nf);
    y0.head(n) = x;
    y0.segment(n, n) = v;
    for (int f = 0; f < nf; ++f) {
        y0.segment(2 * n + 2 * n * f, n) = J0[f];
        y0.segment(2 * n + 2 * n * f + n, n) = Jp0[f];
    }
    OdeSolution sol = ode_solve(rhs, 0.0, T, y0, oo);
    if (!sol.ok) throw NumericalError("jacobi integration failed: " + sol.message + " after " +
                                      std::to_string(sol.n_steps) + " steps");

    JacobiSolution out;
    out.path.n_steps = sol.n_steps;
    for (size_t i = 0; i < sol.times.size(); ++i) {
        out.path.t.push_back(sol.times[i]);
        out.path.x.push_back(sol.states[i].head(n));
        out.path.v.push_back(sol.states[i].segment(n, n));
    }
    out.fields.resize(nf);
    for (int f = 0; f < nf; ++f) {
        out.fields[f].J0 = J0[f];
        out.fields[f].Jp0 = Jp0[f];
        for (size_t i = 0; i < sol.times.size(); ++i) {
            out.fields[f].J.push_back(sol.states[i].segment(2 * n + 2 * n * f, n));
            out.fields[f].Jp.push_back(sol.states[i].segment(2 * n + 2 * n * f + n, n));
        }
    }
    // first-order consistency residual of the stored samples (sampling-limited)
    double res = 0.0;
    for (size_t i = 1; i + 1 < out.path.t.size(); ++i) {
        double dt = out.path.t[i + 1] - out.path.t[i - 1];
        if (dt <= 0) continue;
        CurvatureData C = curvature_at(m, out.path.x[i]);
        for (int f = 0; f < nf; ++f) {
            VectorXd fd = (out.fields[f].J[i + 1] - out.fields[f].J[i - 1]) / dt;
            VectorXd expect = out.fields[f].Jp[i];
            for (int k = 0; k < n; ++k) {
                double gj = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        gj += C.Gamma(k, a, b) * out.path.v[i][a] * out.fields[f].J[i][b];
                res = std::max(res, std::abs(fd[k] - (expect[k] - gj)));
            }
        }
    }
    out.residual = res;
    return out;
}

}  // namespace rgeo
