#pragma once
#include <functional>
#include <string>
#include <vector>

#include "rgeo/dual.hpp"
#include "rgeo/errors.hpp"
#include "rgeo/linalg.hpp"

namespace rgeo {

// Pointwise metric evaluators work on raw arrays so the same closed-form
// code can run on doubles and on Dual2 (see jet_at).
using EvalFn = std::function<void(const double* x, double* g)>;
using DualEvalFn = std::function<void(const Dual2* x, Dual2* g)>;
using DomainFn = std::function<bool(const VectorXd&)>;

struct JetOptions {
    bool richardson = true;   // two step sizes h, h/2 for FD jets
    double fd_scale = 1.0;    // multiplies the default FD step
};

// Metric value with first and second coordinate derivatives at a point.
struct MetricJet {
    MatrixXd g;
    std::vector<MatrixXd> dg;    // dg[i](a,b)    = d_i g_ab
    std::vector<MatrixXd> d2g;   // d2g[i*n+j]    = d_i d_j g_ab
    double fd_gap = 0.0;         // Richardson extrapolation gap (0 for dual jets)
};

// A coordinate-chart manifold with a pointwise metric evaluator.  Immutable
// after construction; evaluation is pure, so models are safe to share
// across threads.
struct MetricModel {
    int dim = 0;
    std::string label;
    int diff_order = 4;
    DomainFn in_domain;     // empty = whole R^n
    EvalFn eval;            // required
    DualEvalFn eval_dual;   // optional: closed-form chain, exact derivatives
    JetOptions jet;

    bool has_dual() const { return static_cast<bool>(eval_dual); }
    bool contains(const VectorXd& x) const { return !in_domain || in_domain(x); }

    // Metric matrix at x.  Checks domain membership; symmetry/SPD checks are
    // the caller's concern (see check_invariants).
    MatrixXd metric_at(const VectorXd& x) const;

    // Value + derivatives, via the dual evaluator when present, otherwise
    // central finite differences (Richardson-extrapolated when enabled).
    MetricJet jet_at(const VectorXd& x) const;

    // Symmetry to 1e-12 and positive smallest eigenvalue at x.
    void check_invariants(const VectorXd& x) const;
};

struct TangentVector {
    VectorXd base_point;
    VectorXd components;
};

// Builds a model from a single templated functor usable with both scalar
// types: F::operator()(const T* x, T* g).
template <class F>
MetricModel make_closed_form_model(int dim, const std::string& label, F f,
                                   DomainFn domain = nullptr) {
    MetricModel m;
    m.dim = dim;
    m.label = label;
    m.in_domain = std::move(domain);
    m.eval = [f](const double* x, double* g) { f(x, g); };
    m.eval_dual = [f](const Dual2* x, Dual2* g) { f(x, g); };
    return m;
}

// Constant scaling: c^2 * g.
MetricModel scaled_model(const MetricModel& base, double c2);

// e^{2f} g for a dual-capable scalar function f (used by conformal module).
struct ScalarField {
    std::function<double(const double*)> eval;
    std::function<Dual2(const Dual2*)> eval_dual;  // optional
    bool has_dual() const { return static_cast<bool>(eval_dual); }
};

}  // namespace rgeo
