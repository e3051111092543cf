#pragma once

// Activator-inhibitor model
//   u_t = u_xx + f(u) - sigma v,   v_t = v_xx + g(v) + alpha u
// and the linear algebra of its eigenvalue problem in the moving frame.

#include "sev/exterior.hpp"

#include <array>
#include <functional>
#include <vector>

namespace sev {

class WaveProfile;

namespace model {

struct Kinetics {
    std::function<double(double)> f, df, g, dg;
    double sigma = 1.0;
    double alpha = 1.0;
};

// Coefficient lists in ascending powers: f(u) = sum fc[k] u^k.
Kinetics polynomialKinetics(std::vector<double> fc, std::vector<double> gc, double sigma, double alpha);

struct SystemParams {
    Kinetics kinetics;
    double c = -1.0;
};

// Throws ParameterError unless sigma, alpha > 0 and c < 0.
void validate(const SystemParams& params);

bool turingCheck(const Kinetics& k);
inline bool turingCheck(const SystemParams& p) { return turingCheck(p.kinetics); }

// Eigenvalues nu1 < nu2 of DF(0) = [[f'(0), -sigma], [alpha, g'(0)]].
// Throws DomainError when they are complex or coincide.
std::array<double, 2> restEigenvalues(const Kinetics& k);

Mat4 coefficientMatrix(const SystemParams& p, double u, double v, double lambda);
Mat4 coefficientMatrix(const SystemParams& p, const WaveProfile& wave, double lambda, double z);
Mat4 asymptoticMatrix(const SystemParams& p, double lambda);

// Closed-form mu1 < mu2 < mu3 < mu4 at rate lambda.
std::array<double, 4> asymptoticRates(const SystemParams& p, double lambda);

struct Frame {
    std::array<Vec4, 4> eta;  // right eigenvectors
    std::array<Vec4, 4> left; // dual rows: left[i].dot(eta[j]) = delta_ij
    std::array<double, 4> mu;
    double rho = 0.0;         // det[eta1..eta4] > 0
};

// Unit eigenvectors with first significant component positive, eta4 flipped for rho > 0.
Frame asymptoticFrame(const SystemParams& p, double lambda);

// Rescale eta2, eta3 by given factors, then re-fix orientation with eta4.
Frame scaledFrame(const Frame& unit, double s2, double s3);

Mat6 inducedMatrix(const SystemParams& p, double u, double v, double lambda);
Mat6 inducedMatrix(const SystemParams& p, const WaveProfile& wave, double lambda, double z);

struct Clearance {
    bool clear = false;
    double K_estimate = 0.0;
};

std::vector<double> defaultDispersionSamples(const SystemParams& p, int n = 4001);

// Along lambda = x + i c k the characteristic polynomial at ik reduces to
//   (x+k^2)^2 - (a+b)(x+k^2) + ab + sigma alpha = 0.
Clearance essentialSpectrumClearance(const SystemParams& p, const std::vector<double>& ks);

// delta with 0 < delta < -nu2 (default -nu2/2).
double lambdaWindow(const SystemParams& p);

} // namespace model
} // namespace sev
