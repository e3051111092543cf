#pragma once

// Exponentially rescaled integration of the stable/unstable bundles on the
// Pluecker side and of the strong solutions u1, u4 at lambda = 0.

#include "sev/model.hpp"
#include "sev/ode.hpp"
#include "sev/profile.hpp"

namespace sev::bundle {

using exterior::TwoVector;

// eta2, eta3 rescaled so that u2 = u3 = phi' at lambda = 0:
//   phi'(z) ~ kappaPlus e^{mu2 z} eta2  (z -> +inf),  ~ kappaMinus e^{mu3 z} eta3  (z -> -inf)
struct Alignment {
    double kappaPlus = 1.0, kappaMinus = 1.0;
    double zPlus = 0.0, zMinus = 0.0; // where the limits were read off
};
Alignment alignTranslation(const model::SystemParams& params, const WaveProfile& wave);

model::Frame alignedFrame(const model::SystemParams& params, const Alignment& al, double lambda);

enum class Direction { Forward, Backward };

struct Options {
    ode::Options ode{};
    double zEnd = 0.0; // integration stops here (the matching point)
};

struct BundleTrajectory {
    double lambda = 0.0;
    Direction direction = Direction::Forward;
    double weightRate = 0.0;
    ode::Trajectory<6> traj; // unit representatives with log-scale

    // rescaled representative at z, log-scale through *ls
    TwoVector at(double z, double* ls = nullptr) const;
    std::size_t samples() const { return traj.z.size(); }
};

// Forward from -L with zeta_u = eta3 ^ eta4, weight mu3 + mu4.
BundleTrajectory unstableBundle(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                                const Alignment& al, const Options& opts = {});
// Backward from +L with zeta_s = eta1 ^ eta2, weight mu1 + mu2.
BundleTrajectory stableBundle(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                              const Alignment& al, const Options& opts = {});

enum class Role { U1, U4, PhiPrime };

struct SolutionTrajectory {
    Role role = Role::U1;
    double weightRate = 0.0;
    ode::Trajectory<4> traj; // weighted values e^{-rate z} u(z)

    Vec4 weighted(double z) const { return traj.eval(z); }
    double zmin() const { return traj.zmin(); }
    double zmax() const { return traj.zmax(); }
};

struct SolutionOptions {
    // tighter than the bundle default: the invariant's drift budget is 1e-6
    ode::Options ode{1e-12, 1e-14};
    double zEnd = 0.0; // 0 with full = true means the far truncation end
    bool full = true;
};

// Y' = (A(0,z) - mu1) Y backward from +L, anchored at eta1(0).
SolutionTrajectory strongStableSolution(const model::SystemParams& params, const WaveProfile& wave,
                                        const Alignment& al, const SolutionOptions& opts = {});
// Y' = (A(0,z) - mu4) Y forward from -L, anchored at eta4(0) of the aligned frame.
SolutionTrajectory strongUnstableSolution(const model::SystemParams& params, const WaveProfile& wave,
                                          const Alignment& al, const SolutionOptions& opts = {});
// phi' sampled from the stored profile derivatives (weight 0).
SolutionTrajectory translationSolution(const WaveProfile& wave, const model::SystemParams& params);

struct Invariant {
    double value = 0.0;
    double drift = 0.0; // max |sample - value| / |value| over the whole overlap
    double zFrom = 0.0, zTo = 0.0;
};

// Omega(u1,u4) = e^{cz} omega(u1,u4); with mu1 + mu4 = -c the weighted
// representatives pair directly. Mean over the middle half of the overlap.
// Throws NumericalError when drift > tol.
Invariant lazutkinTreschev(const model::SystemParams& params, const SolutionTrajectory& u1,
                           const SolutionTrajectory& u4, double tol = 1e-6);

} // namespace sev::bundle
