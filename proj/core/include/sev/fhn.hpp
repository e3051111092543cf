#pragma once

// FitzHugh-Nagumo fast pulse end to end: singular orbit, collocated pulse,
// the lambda = 0 chain, and comparisons against the singular predictions.

#include "sev/pipeline.hpp"
#include "sev/wave.hpp"

#include <memory>
#include <string>

namespace sev::fhn {

struct FastFrontCheck {
    double mu1 = 0.0;   // -c*/2 - sqrt(c*^2 - 4 f'(u_tau))/2
    double uStar = 0.0; // 1/2 - mu1/sqrt2
    double gamma = 0.0; // -f'(u_tau)^2 (mu1^2 + c* mu1 + f'(uStar))
    int gammaSign = 0;
};

// Throws ParameterError unless -sqrt2/2 < mu1 <= -a sqrt2.
FastFrontCheck fastFrontCrossingCheck(const wave::FhnParams& p, double uTau);

struct SingularComparison {
    double uTau = 0.0;
    // fast front
    double uStar = 0.0;
    double zFront = 0.0, uFront = 0.0;
    double frontError = 0.0; // |u(z*) - uStar|
    double zMid = 0.0;       // u = 1/2 on the front
    double cylinderAngle = 0.0;
    // slow piece on the right branch
    double zSlow = 0.0, uSlow = 0.0;
    double uSlowStar = 0.0;     // right-branch root of f'(u) = f'(u_tau)
    double slowTangentAngle = 0.0; // phi'(z*) against the left-branch tangent at u_tau
};

// Report only; pre: an analysis of a converged pulse.
SingularComparison singularVsFullComparison(const wave::FhnParams& p, const pipeline::Analysis& a);

struct RunOptions {
    wave::SolveOptions solve{};
    pipeline::Options analysis{};
};

struct FhnReport {
    wave::FhnParams params;
    double c = 0.0;
    double residual = 0.0;
    std::shared_ptr<WaveProfile> wave; // the analysis points into it
    pipeline::Analysis analysis;
    SingularComparison singular;
    FastFrontCheck front;
    double melnikov = 0.0, lt = 0.0, dPrime0 = 0.0;
    bool consistent = false;
};

FhnReport runFhn(const wave::FhnParams& p, const RunOptions& opts = {});

std::string reportJson(const FhnReport& r);

} // namespace sev::fhn
