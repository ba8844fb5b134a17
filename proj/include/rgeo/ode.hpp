#pragma once
#include <functional>
#include <vector>

#include "rgeo/linalg.hpp"

namespace rgeo {

// dy/dt = f(t, y)
using OdeRhs = std::function<void(double t, const VectorXd& y, VectorXd& dy)>;

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-11;
    double h_init = 1e-3;
    double h_min = 1e-12;
    long max_steps = 200000;
    // when set, the solver lands exactly on these times and stores the states
    std::vector<double> sample_times;
    // optional stop test evaluated after each accepted step
    std::function<bool(double t, const VectorXd& y)> stop;
};

struct OdeSolution {
    bool ok = false;
    bool stopped = false;       // stop() fired
    double t_end = 0.0;
    VectorXd y_end;
    std::vector<double> times;  // sample times actually reached
    std::vector<VectorXd> states;
    long n_steps = 0;
    std::string message;
};

// Adaptive Dormand-Prince 5(4).
OdeSolution ode_solve(const OdeRhs& f, double t0, double t1, const VectorXd& y0,
                      const OdeOptions& opt = {});

}  // namespace rgeo
