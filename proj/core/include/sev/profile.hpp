#pragma once

// Sampled traveling wave (u_hat, v_hat and derivatives) on [-L, L].

#include "sev/exterior.hpp"

#include <string>
#include <vector>

namespace sev {

struct ProfileSample {
    double u = 0, v = 0, du = 0, dv = 0, ddu = 0, ddv = 0;
};

struct TailData {
    double muPlus = 0.0;  // decay rate for z > L (mu2(0) < 0)
    double muMinus = 0.0; // growth rate for z < -L (mu3(0) > 0)
};

class WaveProfile {
public:
    std::vector<double> grid, u, v, du, dv, ddu, ddv;
    double L = 0.0;
    double sigma = 1.0, alpha = 1.0, c = 0.0;
    TailData tails;

    std::size_t size() const { return grid.size(); }

    // Quintic Hermite inside [-L, L], exponential tail outside.
    ProfileSample at(double z) const;

    // (u, v, u'/sigma, v'/alpha): the state of the first-order wave ODE
    Vec4 state(double z) const;
    // phi' = (u', v', u''/sigma, v''/alpha)
    Vec4 phiPrime(double z) const;

    ProfileSample node(std::size_t i) const { return {u[i], v[i], du[i], dv[i], ddu[i], ddv[i]}; }

    // Throws SchemaError on shape problems, DomainError on tail violations.
    void checkShape() const;
};

ProfileSample tailExtend(const WaveProfile& w, double z);

// Rates estimated from the end samples; used when no model is attached.
TailData estimateTails(const WaveProfile& w);

// max over interior nodes of |du - FD(u)| / max|du| (same for v); 5-point stencil.
double derivativeConsistency(const WaveProfile& w);

// First-derivative finite-difference weights on arbitrary nodes (Fornberg).
std::vector<double> fdWeights(double x0, const std::vector<double>& xs, int order = 1);

void saveProfile(const WaveProfile& w, const std::string& path);
std::string profileJson(const WaveProfile& w);

struct LoadOptions {
    double tailTol = 1e-6;
    double derivTol = 1e-6;
};
WaveProfile loadProfile(const std::string& path, const LoadOptions& opts = {});
WaveProfile parseProfile(const std::string& text, const LoadOptions& opts = {});

} // namespace sev
