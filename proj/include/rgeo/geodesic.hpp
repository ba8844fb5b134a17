#pragma once
#include "rgeo/curvature.hpp"
#include "rgeo/metric.hpp"
#include "rgeo/ode.hpp"

namespace rgeo {

struct GeodesicPath {
    std::vector<double> t;        // arc-length samples
    std::vector<VectorXd> x;      // positions
    std::vector<VectorXd> v;      // velocities
    bool truncated = false;       // left the chart before T
    double exit_t = 0.0;          // arc length at exit when truncated
    long n_steps = 0;
};

struct GeodesicOptions {
    double rtol = 1e-9;
    double atol = 1e-11;
    int samples = 0;              // extra equispaced samples in [0, T] (plus endpoints)
    std::vector<double> sample_times;
};

// Unit-speed geodesic from (x, v) for arc length T.  |v|_g must be 1 within
// 1e-10.  Exiting the chart produces a truncated path flagged with exit_t.
GeodesicPath geodesic(const MetricModel& m, const VectorXd& x, const VectorXd& v, double T,
                      const GeodesicOptions& opt = {});

// exp_x(w): geodesic with |w|_g arc length in direction w/|w|_g.
VectorXd exp_map(const MetricModel& m, const VectorXd& x, const VectorXd& w,
                 double rtol = 1e-10);

// Jacobi fields transported along a geodesic: solves J'' = -R(J, c')c'
// jointly with the geodesic.  initial data (J(0), J'(0)) per field.
struct JacobiField {
    std::vector<VectorXd> J;      // values at path sample times
    std::vector<VectorXd> Jp;     // covariant derivatives at sample times
    VectorXd J0, Jp0;
};

struct JacobiSolution {
    GeodesicPath path;
    std::vector<JacobiField> fields;
    // max |J'' + R(J,c')c'| residual cross-checked at sample times
    double residual = 0.0;
};

JacobiSolution jacobi_transport(const MetricModel& m, const VectorXd& x, const VectorXd& v,
                                double T, const std::vector<VectorXd>& J0,
                                const std::vector<VectorXd>& Jp0,
                                const GeodesicOptions& opt = {});

// |v|_g
double g_norm(const MetricModel& m, const VectorXd& x, const VectorXd& v);

}  // namespace rgeo
