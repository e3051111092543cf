#include "support.hpp"

#include "sev/error.hpp"
#include "sev/wave.hpp"

#include <doctest.h>

using namespace sev;
using namespace sev::wave;

TEST_SUITE("wave") {

TEST_CASE("Nagumo front solves u'' - c* u' + f(u) = 0")
{
    for (double a : {0.1, 0.25, 0.4}) {
        const auto fr = nagumoFront(a);
        CHECK(fr.speed == doctest::Approx(std::sqrt(2.0) * (a - 0.5)));
        const auto k = fhnKinetics({a, 0.01, 0.0});
        for (double z : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
            // travelling coordinate with u_t = u_zz + f: c u' + u'' + f = 0 reads -c u' here
            const double r = fr.ddu(z) + fr.speed * fr.du(z) + k.f(fr.u(z));
            CHECK(std::abs(r) < 1e-12);
            CHECK(fr.du(z) == doctest::Approx(NagumoFront::slope(fr.u(z))));
        }
        CHECK(fr.u(0.0) == doctest::Approx(0.5));
    }
}

TEST_CASE("cubic level roots")
{
    const double a = 0.25;
    const auto k = fhnKinetics({a, 0.01, 0.0});
    const auto r = cubicLevelRoots(a, 0.05);
    CHECK(r[0] < r[1]);
    CHECK(r[1] < r[2]);
    for (double u : r) CHECK(std::abs(k.f(u) - 0.05) < 1e-12);
    CHECK_THROWS_AS(cubicLevelRoots(a, 1.0), DomainError);
    CHECK(backSpeed(a, 0.0) == doctest::Approx(-nagumoFront(a).speed));
}

TEST_CASE("singular orbit closes up")
{
    const auto s = fhnSingularOrbit({0.25, 0.0005, 0.0});
    CHECK(s.vStar > 0);
    CHECK(s.vStar < localMax(0.25));
    CHECK(std::abs(s.backSpeed - s.front.speed) < 1e-8);
    CHECK(std::abs(s.mismatch) < 1e-6);
}

TEST_CASE("collocated pulse")
{
    const auto& r = sevtest::fhnRun();
    CHECK(r.residual < 1e-9);
    CHECK(std::abs(r.c - nagumoFront(0.25).speed) < 0.1);
    CHECK(r.c < 0);
    const auto& w = *r.wave;
    CHECK(w.at(0.0).u > 0.4);
    CHECK(std::abs(w.u.front()) + std::abs(w.v.front()) < 1e-6);
    CHECK(std::abs(w.u.back()) + std::abs(w.v.back()) < 1e-6);
    CHECK(collocationResidual(fhnSystem(r.params, r.c), w) < 1e-8);
}

}
