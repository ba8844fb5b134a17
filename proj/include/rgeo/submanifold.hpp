#pragma once
#include "rgeo/geodesic.hpp"
#include "rgeo/metric.hpp"

namespace rgeo {

// A parametrized submanifold of a chart.  The parametrization feeds the
// generic distance solver; dist_sq, when present, is a closed-form squared
// distance usable in metric evaluators (dual-capable, smooth across S).
struct SubmanifoldSpec {
    int k = 0;                                        // parameter dimension
    VectorXd lo, hi;                                  // parameter box
    std::function<VectorXd(const VectorXd&)> param;   // theta -> chart point
    // optional theta -> n x (n-k) matrix of g-orthonormal normal vectors
    std::function<MatrixXd(const VectorXd&)> normal_frame;
    double tube_radius = 0.0;                         // declared valid tube (<= inj/2)
    ScalarField dist_sq;                              // optional exact dist^2
    std::function<VectorXd(const VectorXd&)> footpoint_exact;  // optional

    bool has_exact() const { return static_cast<bool>(dist_sq.eval); }
};

enum class DistMethod { Auto, Newton, Exact };

struct DistResult {
    double t = 0.0;          // dist(S, x)
    VectorXd theta;          // foot parameter (Newton route)
    VectorXd footpoint;      // chart point on S
    VectorXd X;              // unit radial field at x (grad of dist)
    VectorXd v0;             // gamma'(0) at the footpoint (unit, normal to S)
};

// Closest-point solve.  Newton route: multistart over the parameter box
// (8^k grid, capped at 512) + damped Gauss-Newton shooting on
// exp_{p(theta)}(N(theta) w) = x.  Exact route uses dist_sq/footpoint.
// Throws AmbiguousFootpointError when two distinct footpoints tie within
// 1e-6 * tube_radius, DomainError when t exceeds the declared tube.
DistResult dist_to_submanifold(const MetricModel& m, const SubmanifoldSpec& S,
                               const VectorXd& x, DistMethod method = DistMethod::Auto,
                               const VectorXd* warm_theta_w = nullptr);

// Radial/fiber/base splitting of the tube tangent space at x, built from
// Jacobi fields along the minimal geodesic from the footpoint.
struct TubeSplitting {
    VectorXd X;                      // unit radial direction at x
    std::vector<VectorXd> V_basis;   // Jacobi-generated fiber directions
    std::vector<VectorXd> H_basis;   // Jacobi-generated base directions
    std::vector<VectorXd> Hbar_basis;  // orthogonal complement of span{X, V}
    VectorXd footpoint;
    double t = 0.0;
    // raw Jacobi data at arc length t (V fields first, then H fields)
    std::vector<VectorXd> J, Jp;
};

TubeSplitting tube_splitting(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                             DistMethod method = DistMethod::Auto);

enum class HessMethod { Jacobi, Direct };

struct HessResult {
    MatrixXd H;               // symmetric form in chart coordinates
    double asymmetry = 0.0;   // raw asymmetry before symmetrization
};

// Hessian of dist(S, .) at x.  Jacobi route evaluates g(J'(t), Y) over the
// Jacobi frame; Direct route takes covariant second differences of the
// distance function.
HessResult hess_distance(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                         HessMethod method, DistMethod dist_method = DistMethod::Auto);

// Compares the two hess_distance routes; throws NumericalError when they
// disagree beyond 10x the given tolerance.
MatrixXd hess_distance_checked(const MetricModel& m, const SubmanifoldSpec& S, const VectorXd& x,
                               double tol);

// Point submanifold (k = 0) at a chart point.
SubmanifoldSpec point_submanifold(const MetricModel& m, const VectorXd& p, double tube_radius);

}  // namespace rgeo
