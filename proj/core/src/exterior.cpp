#include "sev/exterior.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <cmath>
#include <string>

namespace sev::exterior {

namespace {
constexpr int kI[6] = {0, 0, 0, 1, 1, 2};
constexpr int kJ[6] = {1, 2, 3, 2, 3, 3};

Eigen::Matrix<double, 4, 2> orthonormal(const PlaneBasis& P)
{
    Eigen::Matrix<double, 4, 2> B;
    // unit columns first; basis vectors can differ in scale by many decades
    B.col(0) = P.b1.normalized();
    B.col(1) = P.b2.normalized();
    Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(B);
    Eigen::Matrix<double, 4, 2> Q = qr.householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
    return Q;
}
} // namespace

TwoVector wedge(const Vec4& a, const Vec4& b)
{
    TwoVector t;
    for (int k = 0; k < 6; ++k)
        t.p[k] = a[kI[k]] * b[kJ[k]] - a[kJ[k]] * b[kI[k]];
    return t;
}

double quadVolume(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2)
{
    Mat4 M;
    M << a1, a2, b1, b2;
    return M.determinant();
}

double wedge4(const TwoVector& P, const TwoVector& Q)
{
    const Vec6& p = P.p;
    const Vec6& q = Q.p;
    return p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0];
}

const Mat4& J()
{
    static const Mat4 j = [] {
        Mat4 m = Mat4::Zero();
        m(0, 2) = 1;
        m(1, 3) = -1;
        m(2, 0) = -1;
        m(3, 1) = 1;
        return m;
    }();
    return j;
}

double omega(const Vec4& a, const Vec4& b)
{
    return a[0] * b[2] - a[2] * b[0] - (a[1] * b[3] - a[3] * b[1]);
}

double omegaWeighted(double z, double c, const Vec4& a, const Vec4& b)
{
    const double cz = c * z;
    if (std::abs(cz) > 700.0)
        throw DomainError("omegaWeighted: |c z| = " + std::to_string(std::abs(cz)) +
                          " exceeds the weighting range");
    return std::exp(cz) * omega(a, b);
}

double symplecticDet(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2)
{
    const double w11 = omega(a1, b1), w12 = omega(a1, b2);
    const double w21 = omega(a2, b1), w22 = omega(a2, b2);
    return -(w11 * w22 - w12 * w21) + omega(a1, a2) * omega(b1, b2);
}

double grassmannResidual(const TwoVector& T)
{
    return T.p12() * T.p34() - T.p13() * T.p24() + T.p14() * T.p23();
}

double lagrangianResidual(const TwoVector& T)
{
    return T.p13() - T.p24();
}

Mat4 antisymmetric(const TwoVector& T)
{
    Mat4 M = Mat4::Zero();
    for (int k = 0; k < 6; ++k) {
        M(kI[k], kJ[k]) = T.p[k];
        M(kJ[k], kI[k]) = -T.p[k];
    }
    return M;
}

RecoveredBasis recoverBasis(const TwoVector& T)
{
    int kmax = 0;
    for (int k = 1; k < 6; ++k)
        if (std::abs(T.p[k]) > std::abs(T.p[kmax])) kmax = k;
    if (T.p[kmax] == 0.0)
        throw DomainError("recoverBasis: zero two-vector");
    const Mat4 M = antisymmetric(T);
    // columns i,j of M wedge to p_ij * T
    return {M.col(kI[kmax]), M.col(kJ[kmax]), T.p[kmax]};
}

Intersection planeIntersection(const PlaneBasis& P, const PlaneBasis& Q, double relTol)
{
    const auto Pq = orthonormal(P);
    const auto Qq = orthonormal(Q);
    Mat4 S;
    S << Pq, -Qq;
    Eigen::JacobiSVD<Mat4> svd(S, Eigen::ComputeFullV);
    const Vec4 sv = svd.singularValues(); // descending
    const double tol = relTol * sv[0];

    Intersection out;
    for (int k = 0; k < 4; ++k) out.singular[k] = sv[3 - k];

    for (int k = 0; k < 4; ++k) {
        if (sv[k] > tol / 10.0 && sv[k] < tol * 10.0)
            throw IrregularError("irregular geometry; adjust tau (singular value " +
                                 io::num(sv[k]) + " near rank threshold " +
                                 io::num(tol) + ")");
    }
    int dim = 0;
    for (int k = 0; k < 4; ++k)
        if (sv[k] <= tol) ++dim;
    out.dimension = dim;

    const Mat4& V = svd.matrixV();
    std::vector<Vec4> raw;
    for (int k = 4 - dim; k < 4; ++k) {
        const Eigen::Vector2d xa = V.col(k).head<2>();
        raw.push_back(Pq * xa);
    }
    // Gram-Schmidt
    for (auto& v : raw) {
        for (const auto& u : out.basis) v -= u.dot(v) * u;
        const double n = v.norm();
        if (n > 0) out.basis.push_back(v / n);
    }
    return out;
}

double minPrincipalAngle(const PlaneBasis& P, const PlaneBasis& Q)
{
    const auto Pq = orthonormal(P);
    const auto Qq = orthonormal(Q);
    Mat4 S;
    S << Pq, -Qq;
    // sigma_min = sqrt(2) sin(theta/2), accurate for small angles
    const double smin = Eigen::JacobiSVD<Mat4>(S).singularValues()[3];
    return 2.0 * std::asin(std::min(1.0, smin / std::sqrt(2.0)));
}

} // namespace sev::exterior
