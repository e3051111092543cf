#pragma once

// Wave sources: FitzHugh-Nagumo kinetics, the Nagumo front, the singular
// homoclinic orbit and a collocation solver for the full homoclinic.

#include "sev/model.hpp"
#include "sev/profile.hpp"

#include <array>
#include <vector>

namespace sev::wave {

struct FhnParams {
    double a = 0.25;
    double eps = 0.0005;
    double gamma = 0.0;
};

// f(u) = u(1-u)(u-a), g(v) = -eps*gamma*v, sigma = 1, alpha = eps.
// Throws ParameterError outside 0<a<1/2, eps>0, gamma>=0 or when the rest
// state is not the only equilibrium.
model::Kinetics fhnKinetics(const FhnParams& p);
model::SystemParams fhnSystem(const FhnParams& p, double c);

struct NagumoFront {
    double speed = 0.0; // sqrt(2)(a - 1/2)
    double a = 0.0;
    double u(double z) const;
    double du(double z) const;
    double ddu(double z) const;
    // u' = (sqrt2/2) u (1-u)
    static double slope(double u);
};
NagumoFront nagumoFront(double a);

// Real roots r1 <= r2 <= r3 of f(u) = v for the FHN cubic (trigonometric form).
// Throws DomainError when only one root is real.
std::array<double, 3> cubicLevelRoots(double a, double v);

// Speed of the back front at level v: sqrt2 ((r1+r3)/2 - r2).
double backSpeed(double a, double v);

// v of the local maximum of f on (a, 1)
double localMax(double a);

struct SlowPiece {
    std::vector<double> z, v, u;
};

struct SingularOrbit {
    FhnParams params;
    NagumoFront front;
    Vec4 landing;        // (1, 0, 0, -1/c*)
    SlowPiece slowRight; // v from 0 to vStar on the right branch
    double vStar = 0.0;
    double T1 = 0.0;     // duration of slowRight
    double backSpeed = 0.0;
    std::array<double, 3> backRoots{}; // r1, r2, r3 at vStar
    SlowPiece slowLeft;  // return from vStar toward 0 on the left branch
    double mismatch = 0.0;
};

SingularOrbit fhnSingularOrbit(const FhnParams& p);

struct SolveOptions {
    double residualTol = 1e-9;
    int maxIter = 40;
    double coreStep = 0.025;
    double tailStepRight = 1.0;
    double tailStepLeft = 4.0;
    double L = 0.0; // 0: chosen from the decay rate
    bool verbose = false;
};

struct SolveResult {
    WaveProfile profile;
    double c = 0.0;
    double residual = 0.0; // max collocation residual
    int iterations = 0;    // Newton steps of the last solve
};

// Collocation (Hermite-Simpson) on the guess grid. The grid must contain z=0.
SolveResult solveHomoclinic(const model::SystemParams& params, const WaveProfile& guess,
                            const SolveOptions& opts = {});

// From the singular orbit: pinned solve (back phase fixed, unfolding parameter
// free), secant on the back position until the unfolding vanishes, polish.
SolveResult solveHomoclinic(const FhnParams& p, const SingularOrbit& orbit, const SolveOptions& opts = {});

// Max collocation residual of a profile under the system (for diagnostics).
double collocationResidual(const model::SystemParams& params, const WaveProfile& w);

// Tail rates mu2(0), mu3(0) of the model at the wave speed.
TailData modelTails(const model::SystemParams& params);

} // namespace sev::wave
