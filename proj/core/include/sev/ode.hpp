#pragma once

// Adaptive Dormand-Prince 5(4) (boost::numeric::odeint) with optional
// per-step renormalisation. Samples keep their own log-scale so long runs
// never overflow; cubic Hermite interpolation between accepted steps.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace sev::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double maxStep = 0.5;
    bool renormalize = false;
    double growthLimit = 1e8; // only used without renormalisation
};

template <int N>
struct Trajectory {
    using Vec = Eigen::Matrix<double, N, 1>;
    std::vector<double> z;
    std::vector<Vec> y;           // stored representative at each sample
    std::vector<Vec> dy;          // its z-derivative
    std::vector<double> logScale; // true solution = exp(logScale) * y

    bool empty() const { return z.empty(); }
    double zmin() const { return std::min(z.front(), z.back()); }
    double zmax() const { return std::max(z.front(), z.back()); }

    // Value at z expressed in the scale of the bracketing left sample;
    // logScale of that sample returned through *ls.
    Vec eval(double zq, double* ls = nullptr) const;
    std::size_t bracket(double zq) const;
};

using Rhs4 = std::function<void(double z, const Eigen::Matrix<double, 4, 1>& y, Eigen::Matrix<double, 4, 1>& dy)>;
using Rhs6 = std::function<void(double z, const Eigen::Matrix<double, 6, 1>& y, Eigen::Matrix<double, 6, 1>& dy)>;

Trajectory<4> integrate(const Rhs4& f, double z0, double z1, const Eigen::Matrix<double, 4, 1>& y0,
                        const Options& opts);
Trajectory<6> integrate(const Rhs6& f, double z0, double z1, const Eigen::Matrix<double, 6, 1>& y0,
                        const Options& opts);

// Integrate a scalar ODE and return samples (used for slow flows).
struct ScalarResult {
    std::vector<double> z, y;
    bool hitEvent = false;
    double zEvent = 0.0;
};
ScalarResult integrateScalar(const std::function<double(double, double)>& f, double z0, double z1, double y0,
                             double maxStep, double rtol = 1e-11, double atol = 1e-14,
                             const std::function<double(double)>& event = nullptr);

} // namespace sev::ode
