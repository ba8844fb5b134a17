#pragma once
#include "rgeo/metric.hpp"

namespace rgeo {

// Everything curvature needs at one point, computed once.
struct CurvatureData {
    VectorXd x;
    MatrixXd g, ginv;
    Tensor3 Gamma;   // Gamma(k,i,j) = Gamma^k_ij
    Tensor4 Rm;      // Rm(i,j,k,l) = g( R(e_i,e_j) e_k , e_l ); curv(X,Y) = Rm(X,Y,Y,X)
    double fd_gap = 0.0;
};

// Levi-Civita connection coefficients.  Throws DomainError outside the
// chart, ConditioningError when the metric matrix is near-singular.
Tensor3 christoffel(const MetricModel& m, const VectorXd& x);

CurvatureData curvature_at(const MetricModel& m, const VectorXd& x);

// Rank-4 curvature tensor (lowered).
Tensor4 riemann(const MetricModel& m, const VectorXd& x);

// curv(u,v) / |u ^ v|^2.  Throws DegeneratePlaneError when |u ^ v|^2 < 1e-12.
double sectional(const CurvatureData& C, const VectorXd& u, const VectorXd& v);
double sectional(const MetricModel& m, const VectorXd& x, const VectorXd& u, const VectorXd& v);

// Ricci as a symmetric bilinear form in chart coordinates.
MatrixXd ricci(const CurvatureData& C);
MatrixXd ricci(const MetricModel& m, const VectorXd& x);

// Eigenvalues of Ric relative to g (ascending).
VectorXd ricci_eigenvalues(const CurvatureData& C);

// Max violation of the Riemann symmetries + first Bianchi identity,
// relative to the tensor's max magnitude.
double symmetry_residual(const Tensor4& Rm);

// (R(u,v)w)^s contracted from Rm by raising the last index.
VectorXd curvature_op(const CurvatureData& C, const VectorXd& u, const VectorXd& v,
                      const VectorXd& w);

// Covariant derivative residual max|nabla g| over a frame (metric
// compatibility check for christoffel).
double metric_compatibility_residual(const MetricModel& m, const VectorXd& x);

// min / max sectional curvature over random planes at x (seeded sampling).
struct PlaneScan {
    double min_sec, max_sec;
    VectorXd min_u, min_v;
};
PlaneScan scan_planes(const CurvatureData& C, int samples, unsigned seed);

}  // namespace rgeo
