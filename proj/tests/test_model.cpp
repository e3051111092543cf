#include "support.hpp"

#include "sev/error.hpp"
#include "sev/exterior.hpp"
#include "sev/model.hpp"
#include "sev/wave.hpp"

#include <doctest.h>

using namespace sev;

TEST_SUITE("model") {

TEST_CASE("coefficient matrix is infinitesimally symplectic up to the c shift")
{
    const auto p = wave::fhnSystem({0.25, 0.0005, 0.0}, -0.31);
    std::uniform_real_distribution<double> U(-1, 2), Lam(-1, 3);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const Mat4 A = model::coefficientMatrix(p, U(sevtest::rng()), 0.1 * U(sevtest::rng()), Lam(sevtest::rng()));
        const Mat4 R = A.transpose() * exterior::J() + exterior::J() * A + p.c * exterior::J();
        worst = std::max(worst, R.cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("lambda derivative of A gives the Melnikov integrand")
{
    const auto p = wave::fhnSystem({0.25, 0.01, 0.0}, -0.3);
    const Mat4 dA = model::coefficientMatrix(p, 0.3, 0.02, 1.0) - model::coefficientMatrix(p, 0.3, 0.02, 0.0);
    // omega(Y, dA Y) = u^2/sigma - v^2/alpha; at Y = phi' this is the integrand
    const Vec4 Y(0.7, -0.2, 0.4, 1.5);
    const double s = p.kinetics.sigma, al = p.kinetics.alpha;
    CHECK(exterior::omega(Y, dA * Y) == doctest::Approx(Y[0] * Y[0] / s - Y[1] * Y[1] / al));
}

TEST_CASE("asymptotic rates pair up and the frame is dual")
{
    const auto p = wave::fhnSystem({0.25, 0.0005, 0.0}, -0.31);
    for (double lam : {-0.0002, 0.0, 0.5, 2.0}) {
        const auto mu = model::asymptoticRates(p, lam);
        CHECK(mu[0] < mu[1]);
        CHECK(mu[1] < mu[2]);
        CHECK(mu[2] < mu[3]);
        CHECK(mu[0] + mu[3] == doctest::Approx(-p.c).epsilon(1e-12));
        CHECK(mu[1] + mu[2] == doctest::Approx(-p.c).epsilon(1e-12));
        const auto fr = model::asymptoticFrame(p, lam);
        CHECK(fr.rho > 0);
        const Mat4 Ainf = model::asymptoticMatrix(p, lam);
        for (int i = 0; i < 4; ++i) {
            CHECK((Ainf * fr.eta[i] - fr.mu[i] * fr.eta[i]).norm() < 1e-10 * fr.eta[i].norm() * (1 + std::abs(fr.mu[i])));
            for (int j = 0; j < 4; ++j) CHECK(std::abs(fr.left[i].dot(fr.eta[j]) - (i == j)) < 1e-10);
        }
    }
}

TEST_CASE("rest state and Turing condition")
{
    const auto k = wave::fhnKinetics({0.25, 0.0005, 0.0});
    CHECK(model::turingCheck(k));
    const auto nu = model::restEigenvalues(k);
    CHECK(nu[0] < nu[1]);
    CHECK(nu[1] < 0);
    CHECK(model::lambdaWindow(wave::fhnSystem({0.25, 0.0005, 0.0}, -0.31)) > 0);
}

TEST_CASE("polynomial kinetics and validation")
{
    const auto k = model::polynomialKinetics({0, -0.25, 1.25, -1}, {0, 1}, 1.0, 0.01);
    CHECK(k.f(1.0) == doctest::Approx(0.0));
    CHECK(k.df(0.0) == doctest::Approx(-0.25));
    CHECK(k.g(0.5) == doctest::Approx(0.5));
    model::SystemParams p{k, -0.3};
    CHECK_NOTHROW(model::validate(p));
    p.c = 0.1;
    CHECK_THROWS_AS(model::validate(p), ParameterError);
    p.c = -0.3;
    p.kinetics.alpha = 0;
    CHECK_THROWS_AS(model::validate(p), ParameterError);
}

TEST_CASE("essential spectrum is cleared for the FHN linearisation")
{
    const auto p = wave::fhnSystem({0.25, 0.0005, 0.0}, -0.31);
    const auto cl = model::essentialSpectrumClearance(p, model::defaultDispersionSamples(p));
    CHECK(cl.clear);
    CHECK(cl.K_estimate < 0);
}

}
