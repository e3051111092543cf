#include "support.hpp"

#include "sev/error.hpp"
#include "sev/exterior.hpp"

#include <doctest.h>

#include <Eigen/LU>

using namespace sev;
using namespace sev::exterior;

TEST_SUITE("exterior") {

TEST_CASE("wedge of a decomposable pair lies on the Grassmannian")
{
    for (int k = 0; k < 200; ++k) {
        const auto T = wedge(sevtest::randomUnit(), sevtest::randomUnit());
        CHECK(std::abs(grassmannResidual(T)) < 1e-15);
    }
    // e1^e2 + e3^e4 is not decomposable
    TwoVector T;
    T.p << 1, 0, 0, 0, 0, 1;
    CHECK(grassmannResidual(T) == doctest::Approx(1.0));
}

TEST_CASE("wedge4 of two planes is the 4x4 determinant")
{
    for (int k = 0; k < 200; ++k) {
        Vec4 a = sevtest::randomUnit(), b = sevtest::randomUnit(), c = sevtest::randomUnit(), d = sevtest::randomUnit();
        Mat4 M;
        M << a, b, c, d;
        CHECK(std::abs(wedge4(wedge(a, b), wedge(c, d)) - M.determinant()) < 1e-14);
        CHECK(std::abs(quadVolume(a, b, c, d) - M.determinant()) < 1e-14);
    }
}

TEST_CASE("omega is p13 - p24 and J is the matrix of omega")
{
    for (int k = 0; k < 100; ++k) {
        Vec4 a = sevtest::randomUnit(), b = sevtest::randomUnit();
        CHECK(std::abs(omega(a, b) - lagrangianResidual(wedge(a, b))) < 1e-15);
        CHECK(std::abs(omega(a, b) - a.dot(J() * b)) < 1e-15);
        CHECK(std::abs(omega(a, b) + omega(b, a)) < 1e-15);
    }
    CHECK(omega(Vec4::Unit(0), Vec4::Unit(2)) == 1.0);
    CHECK(omega(Vec4::Unit(1), Vec4::Unit(3)) == -1.0);
}

TEST_CASE("symplectic determinant equals the volume form")
{
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        Vec4 a = sevtest::randomUnit(), b = sevtest::randomUnit(), c = sevtest::randomUnit(), d = sevtest::randomUnit();
        worst = std::max(worst, std::abs(symplecticDet(a, b, c, d) - quadVolume(a, b, c, d)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("omegaWeighted guards the exponent")
{
    Vec4 a = Vec4::Unit(0), b = Vec4::Unit(2);
    CHECK(omegaWeighted(2.0, -0.5, a, b) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(omegaWeighted(3000.0, -0.5, a, b), DomainError);
}

TEST_CASE("recoverBasis spans the same plane")
{
    for (int k = 0; k < 50; ++k) {
        Vec4 a = sevtest::randomUnit(), b = sevtest::randomUnit();
        const auto T = wedge(a, b);
        const auto r = recoverBasis(T);
        const auto back = wedge(r.c1, r.c2);
        CHECK((back.p - r.scale * T.p).norm() < 1e-12 * back.norm());
    }
}

TEST_CASE("planeIntersection dimensions and the ambiguity band")
{
    const PlaneBasis P{Vec4::Unit(0), Vec4::Unit(1)};
    CHECK(planeIntersection(P, {Vec4::Unit(2), Vec4::Unit(3)}).dimension == 0);
    const auto one = planeIntersection(P, {Vec4::Unit(1), Vec4::Unit(3)});
    REQUIRE(one.dimension == 1);
    CHECK(std::abs(std::abs(one.basis[0][1]) - 1.0) < 1e-12);
    CHECK(planeIntersection(P, {Vec4(1, 1, 0, 0), Vec4(1, -1, 0, 0)}).dimension == 2);
    // tilt of 1e-9: inside the factor-10 band around relTol
    const Vec4 tilted = Vec4(0, 1, 0, 0) + 1e-9 * Vec4::Unit(2);
    CHECK_THROWS_AS(planeIntersection(P, {tilted, Vec4::Unit(3)}), IrregularError);
    CHECK(planeIntersection(P, {tilted, Vec4::Unit(3)}, 1e-6).dimension == 1);
}

TEST_CASE("principal angle")
{
    const PlaneBasis P{Vec4::Unit(0), Vec4::Unit(1)};
    CHECK(minPrincipalAngle(P, {Vec4::Unit(2), Vec4::Unit(3)}) == doctest::Approx(M_PI / 2));
    const double t = 0.3;
    CHECK(minPrincipalAngle(P, {Vec4(std::cos(t), 0, std::sin(t), 0), Vec4(0, 0, 0, 1)}) == doctest::Approx(t));
}

}
