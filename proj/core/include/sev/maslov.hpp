#pragma once

// Conjugate points of E^u(0,z) against the reference plane E^s(0,tau),
// located through the detection function beta, their crossing forms and the
// Maslov index with the n+ convention at the right endpoint.

#include "sev/bundle.hpp"

#include <string>
#include <vector>

namespace sev::maslov {

// Everything at lambda = 0 the conjugate-point search needs.
struct ZeroData {
    model::SystemParams params;
    const WaveProfile* wave = nullptr;
    bundle::Alignment align;
    model::Frame frame; // aligned, lambda = 0
    bundle::SolutionTrajectory u1, u4;

    // e^{-mu2 z} phi'(z)
    Vec4 w2(double z) const;
    // e^{-mu3 z} phi'(z); below the alignment point continued along eta3, eta4
    // with the constant-coefficient flow (the profile itself underflows there)
    Vec4 w3(double z) const;
    // unit direction of w3 with log|w3| through *logNorm; w3 underflows on the far right
    Vec4 w3Direction(double z, double* logNorm = nullptr) const;
};

ZeroData zeroData(const model::SystemParams& params, const WaveProfile& wave,
                  const bundle::SolutionOptions& opts = {});

// First z past the peak where |u|+|v| < 1e-2 of its maximum. Further out the
// endpoint crossing form decays with the tail amplitude and turns irregular.
double defaultTau(const WaveProfile& wave);

struct ReferencePlane {
    double tau = 0.0;
    Vec4 basis1, basis2; // weighted u1(tau), e^{-mu2 tau} phi'(tau)
    bool validated = false;
    double minAngle = 0.0;  // smallest principal angle to V^u(0) over [tau, L]
    double lagrangian = 0.0; // |omega(b1,b2)| / (|b1||b2|)
};

// Throws DomainError("tau too small ...") naming the first tau' in [tau, L]
// where the angle to V^u(0) drops below angleTol.
ReferencePlane referencePlane(const ZeroData& d, double tauRequest, double angleTol = 1e-3);

// det[b1, b2, w3(z), w4(z)]; all weights absorbed into the stored representatives.
// Underflows to 0 far to the right; use the normalised form there.
double detectionBeta(const ReferencePlane& ref, const ZeroData& d, double z);
// beta over its Hadamard bound |b1||b2||w3||w4|: same sign and zeros, in [-1,1]
double detectionBetaNormalized(const ReferencePlane& ref, const ZeroData& d, double z);
// normalised beta through the omega-matrix determinant
double detectionBetaSymplectic(const ReferencePlane& ref, const ZeroData& d, double z);

struct ConjugatePoint {
    double zStar = 0.0;
    int dim = 1;
    std::vector<Vec4> xiBasis;
    Eigen::Matrix2d gamma = Eigen::Matrix2d::Zero(); // (0,0) only when dim = 1
    int signature = 0;
    bool regular = true;
    double u = 0.0; // profile u at zStar
};

// omega(xi, A(0,z) xi)
double crossingForm(const model::SystemParams& params, const WaveProfile& wave, double zStar, const Vec4& xi);

struct ScanOptions {
    int minPoints = 2000;
    int density = 4;      // grid points per integrator step of u4
    double zTol = 1e-10;
    // rank tolerance at refined zeros: phi' on the plateaus carries ~1e-10
    // relative direction error, so 1e-9 would sit inside the ambiguity band
    double rankTol = 1e-6;
    double regularityFloor = 1e-6;
    double flatBeta = 1e-10; // 2D test on the normalised beta
    double flatSlope = 1e-8;
    int threads = 0;
};

// normalised beta on the scan grid
struct BetaTrace {
    std::vector<double> z, beta;
    double scale = 0.0; // max |beta|
};

// Interior conjugate points on (-L, tau). Throws IrregularError when a
// crossing form is singular (remedy: perturb tau).
std::vector<ConjugatePoint> findConjugatePoints(const ReferencePlane& ref, const ZeroData& d,
                                                const ScanOptions& opts = {}, BetaTrace* trace = nullptr);

// The crossing forced at tau by phi'(tau).
ConjugatePoint endpointCrossing(const ReferencePlane& ref, const ZeroData& d, const ScanOptions& opts = {});

struct MaslovResult {
    double tau = 0.0;
    std::vector<ConjugatePoint> crossings;
    ConjugatePoint endpoint;
    int index = 0;
    int parityPrediction = 1;
};

// Throws IrregularError on any irregular crossing.
MaslovResult maslovIndex(const std::vector<ConjugatePoint>& crossings, const ConjugatePoint& endpoint,
                         double tau = 0.0);

struct ParityVerdict {
    bool consistent = false;
    int ltSign = 0;
    int predicted = 0;
    double betaSlope = 0.0;      // finite difference of the normalised beta at tau
    int slopePredicted = 0;      // sign(lt * omega(phi'(tau), phi''(tau)))
    bool slopeConsistent = false;
    bool oddCrossings = false;   // odd number of interior crossings <=> beta'(tau) > 0
    std::string detail;
};

// Throws NumericalError when |lt| <= ltFloor (non-transverse construction).
ParityVerdict parityCheck(const MaslovResult& result, double lt, double ltFloor = 0.0);
// adds the beta'(tau) cross-check
ParityVerdict parityCheck(const MaslovResult& result, double lt, const ReferencePlane& ref, const ZeroData& d,
                          double ltFloor = 0.0);

// Noise floor for Omega(u1,u4): 1e-10 |u1(0)| |u4(0)|.
double ltNoiseFloor(const ZeroData& d);

std::string betaCsv(const BetaTrace& t);
std::string crossingJson(const MaslovResult& r, const ParityVerdict& v);

} // namespace sev::maslov
