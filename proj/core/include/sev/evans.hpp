#pragma once

// Evans function on the real window: wedge pairing of the rescaled bundles,
// its symplectic (omega-matrix) form, and D'(0) as Omega(u1,u4) times the
// Melnikov-type integral with a finite-difference cross-check.

#include "sev/bundle.hpp"

#include <string>
#include <vector>

namespace sev::evans {

struct EvansSample {
    double lambda = 0.0;
    double D_wedge = 0.0;
    double D_symplectic = 0.0;
    double agreement = 0.0; // |Dw - Ds| / max(|Dw|, |Ds|)
};

struct Options {
    bundle::Options bundle{};
    double zMatch = 0.0;
    int threads = 0; // 0: hardware concurrency
};

EvansSample evansAt(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                    const bundle::Alignment& al, const Options& opts = {});

struct Scan {
    std::vector<EvansSample> samples;     // ascending lambda
    std::vector<std::size_t> signChanges; // i: D changes sign between samples i and i+1
    std::vector<std::string> warnings;
};

Scan evansScan(const model::SystemParams& params, const WaveProfile& wave, std::vector<double> grid,
               const bundle::Alignment& al, const Options& opts = {});

// lambda_min + k (lambda_max - lambda_min)/(steps-1)
std::vector<double> uniformGrid(double lo, double hi, int steps);

// int e^{cz} ((u')^2/sigma - (v')^2/alpha) dz: 3-point Gauss on each grid
// interval of the profile interpolant (split into `subdivide` pieces), plus
// exponential tails beyond +L and below the first node where |phi'| reaches
// 1e-8 of its peak.
double melnikovIntegral(const model::SystemParams& params, const WaveProfile& wave, int subdivide = 1);

struct DerivativeReport {
    double lt = 0.0;
    double ltDrift = 0.0;
    double integral = 0.0;
    double dPrime0 = 0.0;
    double fdCheck = 0.0;
    double relGap = 0.0;
    double h = 0.0;
};

DerivativeReport evansDerivativeAtZero(const model::SystemParams& params, const WaveProfile& wave,
                                       const bundle::Alignment& al, const bundle::Invariant& lt, double h,
                                       const Options& opts = {});

std::string evansCsv(const std::vector<EvansSample>& samples);

} // namespace sev::evans
