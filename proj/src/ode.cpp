#include "rgeo/ode.hpp"

#include <algorithm>
#include <cmath>

namespace rgeo {

namespace {
// Dormand-Prince RK5(4)7M coefficients
const double A21 = 1.0 / 5.0;
const double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
const double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
const double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
             A54 = -212.0 / 729.0;
const double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
             A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
const double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
             B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
const double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
             E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;
const double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;
}  // namespace

OdeSolution ode_solve(const OdeRhs& f, double t0, double t1, const VectorXd& y0,
                      const OdeOptions& opt) {
    OdeSolution sol;
    const int n = static_cast<int>(y0.size());
    double t = t0;
    VectorXd y = y0;
    VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), err(n), ytmp(n);
    f(t, y, k1);

    std::vector<double> samples = opt.sample_times;
    std::sort(samples.begin(), samples.end());
    size_t next_sample = 0;
    while (next_sample < samples.size() && samples[next_sample] <= t0 + 1e-15) {
        sol.times.push_back(samples[next_sample]);
        sol.states.push_back(y);
        ++next_sample;
    }

    double h = std::min(opt.h_init, t1 - t0);
    bool fsal_valid = true;
    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        h = std::min(h, t1 - t);
        bool hit_sample = false;
        if (next_sample < samples.size() && t + h >= samples[next_sample] - 1e-14) {
            h = samples[next_sample] - t;
            hit_sample = true;
            if (h <= 0) {  // duplicate sample time
                sol.times.push_back(samples[next_sample]);
                sol.states.push_back(y);
                ++next_sample;
                continue;
            }
        }
        if (!fsal_valid) { f(t, y, k1); fsal_valid = true; }

        ytmp = y + h * A21 * k1;
        f(t + C2 * h, ytmp, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        f(t + C3 * h, ytmp, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        f(t + C4 * h, ytmp, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        f(t + C5 * h, ytmp, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        f(t + h, ytmp, k6);
        y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        f(t + h, y5, k7);
        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        double errnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            errnorm = std::max(errnorm, std::abs(err[i]) / sc);
        }
        if (errnorm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            ++sol.n_steps;
            if (hit_sample) {
                while (next_sample < samples.size() && samples[next_sample] <= t + 1e-14) {
                    sol.times.push_back(samples[next_sample]);
                    sol.states.push_back(y);
                    ++next_sample;
                }
            }
            if (opt.stop && opt.stop(t, y)) {
                sol.stopped = true;
                break;
            }
        } else {
            fsal_valid = true;  // k1 still valid at unchanged (t, y)
        }
        double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (h < opt.h_min) {
            sol.message = "step size underflow";
            sol.t_end = t;
            sol.y_end = y;
            return sol;
        }
        if (sol.n_steps >= opt.max_steps) {
            sol.message = "max step count exceeded";
            sol.t_end = t;
            sol.y_end = y;
            return sol;
        }
    }
    sol.ok = true;
    sol.t_end = t;
    sol.y_end = y;
    return sol;
}

}  // namespace rgeo
