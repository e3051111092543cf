#include "support.hpp"

#include "sev/error.hpp"
#include "sev/maslov.hpp"

#include <doctest.h>

using namespace sev;
using maslov::ConjugatePoint;

namespace {

ConjugatePoint cp(double z, double g)
{
    ConjugatePoint c;
    c.zStar = z;
    c.gamma(0, 0) = g;
    c.signature = g > 0 ? 1 : -1;
    return c;
}

} // namespace

TEST_SUITE("maslov") {

TEST_CASE("index counts signatures plus n+ at the endpoint")
{
    const std::vector<ConjugatePoint> cps{cp(1, -1), cp(30, 1), cp(50, -1)};
    CHECK(maslov::maslovIndex(cps, cp(800, 0.1), 800).index == 0);
    CHECK(maslov::maslovIndex(cps, cp(800, -0.1), 800).index == -1);
    CHECK(maslov::maslovIndex(cps, cp(800, -0.1), 800).parityPrediction == -1);
    ConjugatePoint two;
    two.dim = 2;
    two.gamma << 1, 0, 0, -2;
    CHECK(maslov::maslovIndex({}, two, 1).index == 1);
    auto bad = cps;
    bad[1].regular = false;
    CHECK_THROWS_AS(maslov::maslovIndex(bad, cp(800, 0.1), 800), IrregularError);
}

TEST_CASE("parity check refuses an Omega below the noise floor")
{
    const auto r = maslov::maslovIndex({cp(1, -1)}, cp(9, 1), 9);
    CHECK(maslov::parityCheck(r, 2.0, 1.0).consistent);
    CHECK_FALSE(maslov::parityCheck(r, -2.0, 1.0).consistent);
    CHECK_THROWS_AS(maslov::parityCheck(r, 0.5, 1.0), NumericalError);
}

TEST_CASE("FHN pulse: front, slow and back crossings plus the endpoint")
{
    const auto& a = sevtest::fhnRun().analysis;
    const auto& m = a.maslov;
    REQUIRE(m.crossings.size() == 3);
    CHECK(m.crossings[0].signature == -1);
    CHECK(m.crossings[1].signature == 1);
    CHECK(m.crossings[2].signature == -1);
    for (const auto& c : m.crossings) {
        CHECK(c.dim == 1);
        CHECK(c.regular);
        CHECK(c.zStar < m.tau);
    }
    CHECK(m.endpoint.gamma(0, 0) > 0);
    CHECK(m.index == 0);
    CHECK(a.parity.consistent);
    CHECK(a.parity.slopeConsistent);
    CHECK(a.ref.validated);
    for (const auto& t : a.tauChecks) {
        CHECK(t.ok);
        CHECK(t.index == 0);
    }
}

TEST_CASE("crossing form at a conjugate point is omega(xi, A xi)")
{
    const auto& r = sevtest::fhnRun();
    const auto& c = r.analysis.maslov.crossings[0];
    const Vec4 xi = c.xiBasis[0];
    const Mat4 A = model::coefficientMatrix(r.analysis.params, *r.wave, 0.0, c.zStar);
    CHECK(maslov::crossingForm(r.analysis.params, *r.wave, c.zStar, xi) ==
          doctest::Approx(exterior::omega(xi, A * xi)));
}

TEST_CASE("beta at -L tends to rho for a reference plane far out")
{
    const auto& r = sevtest::fhnRun();
    const auto& d = r.analysis.zero;
    const auto ref = maslov::referencePlane(d, r.wave->L - 50.0);
    const double b = maslov::detectionBeta(ref, d, -r.wave->L);
    CHECK(b > 0);
    CHECK(std::abs(b - d.frame.rho) < 1e-2 * d.frame.rho);
}

TEST_CASE("reference plane outside the truncation is rejected")
{
    const auto& r = sevtest::fhnRun();
    CHECK_THROWS_AS(maslov::referencePlane(r.analysis.zero, r.wave->L + 1), DomainError);
}

TEST_CASE("beta csv")
{
    maslov::BetaTrace t;
    t.z = {0, 1};
    t.beta = {0.5, -0.5};
    CHECK(maslov::betaCsv(t) == "z,beta\n0,0.5\n1,-0.5\n");
}

}
