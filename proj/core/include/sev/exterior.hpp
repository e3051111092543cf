#pragma once

// Exterior algebra on R^4 (2-vectors, top forms) and the symplectic form
//   omega = de1^de3 - de2^de4,  omega(a,b) = <a, J b>.

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace sev {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

namespace exterior {

// Pluecker coordinates in the fixed order (p12,p13,p14,p23,p24,p34).
struct TwoVector {
    Vec6 p = Vec6::Zero();

    TwoVector() = default;
    explicit TwoVector(const Vec6& v) : p(v) {}

    double p12() const { return p[0]; }
    double p13() const { return p[1]; }
    double p14() const { return p[2]; }
    double p23() const { return p[3]; }
    double p24() const { return p[4]; }
    double p34() const { return p[5]; }

    double norm() const { return p.norm(); }
};

struct PlaneBasis {
    Vec4 b1, b2;
};

// p_ij = a_i b_j - a_j b_i
TwoVector wedge(const Vec4& a, const Vec4& b);

// det[a1 a2 b1 b2]
double quadVolume(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2);

// scalar part of P ^ Q in the top power; wedge4(a1^a2, b1^b2) = quadVolume(a1,a2,b1,b2)
double wedge4(const TwoVector& P, const TwoVector& Q);

const Mat4& J();

double omega(const Vec4& a, const Vec4& b);

// e^{cz} omega(a,b); throws DomainError when |cz| > 700
double omegaWeighted(double z, double c, const Vec4& a, const Vec4& b);

// -det[[w(a1,b1), w(a1,b2)], [w(a2,b1), w(a2,b2)]] + w(a1,a2) w(b1,b2)
double symplecticDet(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2);

double grassmannResidual(const TwoVector& T);

// p13 - p24; for T = wedge(a,b) this is exactly omega(a,b)
double lagrangianResidual(const TwoVector& T);

// Antisymmetric matrix M with M(i,j) = p_ij.
Mat4 antisymmetric(const TwoVector& T);

// Two vectors c1,c2 with c1^c2 = scale * T (exact when T is decomposable).
struct RecoveredBasis {
    Vec4 c1, c2;
    double scale;
};
RecoveredBasis recoverBasis(const TwoVector& T);

struct Intersection {
    int dimension = 0;
    std::vector<Vec4> basis;          // orthonormal
    std::array<double, 4> singular{};  // ascending, of the orthonormalised stack
};

// Rank decision uses tol_rank = relTol * (largest singular value).
// Singular values within a factor 10 of the threshold raise IrregularError.
Intersection planeIntersection(const PlaneBasis& P, const PlaneBasis& Q, double relTol = 1e-9);

// Smallest principal angle between two planes (radians).
double minPrincipalAngle(const PlaneBasis& P, const PlaneBasis& Q);

} // namespace exterior
} // namespace sev
