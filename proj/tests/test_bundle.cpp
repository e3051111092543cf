#include "support.hpp"

#include "sev/bundle.hpp"
#include "sev/exterior.hpp"

#include <doctest.h>

using namespace sev;

TEST_SUITE("bundle") {

TEST_CASE("bundles stay decomposable and Lagrangian")
{
    const auto& r = sevtest::fhnRun();
    const auto& p = r.analysis.params;
    const auto& w = *r.wave;
    const auto al = bundle::alignTranslation(p, w);
    const double d = model::lambdaWindow(p);
    for (double lam : {-0.5 * d, 0.0, 0.5, 2.0}) {
        CAPTURE(lam);
        for (const auto& b : {bundle::unstableBundle(p, w, lam, al), bundle::stableBundle(p, w, lam, al)}) {
            double gr = 0, lg = 0;
            for (const auto& y : b.traj.y) {
                const exterior::TwoVector T(y / y.norm());
                gr = std::max(gr, std::abs(exterior::grassmannResidual(T)));
                lg = std::max(lg, std::abs(exterior::lagrangianResidual(T)));
            }
            CHECK(b.samples() > 10);
            CHECK(gr < 1e-9);
            CHECK(lg < 1e-8);
        }
    }
}

TEST_CASE("alignment reads kappa on the plateau")
{
    const auto& r = sevtest::fhnRun();
    const auto al = bundle::alignTranslation(r.analysis.params, *r.wave);
    CHECK(al.kappaPlus > 0);
    CHECK(al.zMinus < 0);
    CHECK(al.zPlus > 0);
    CHECK(std::isfinite(al.kappaMinus));
    CHECK(al.kappaMinus != 0.0);
}

TEST_CASE("weighted Omega(u1, u4) is constant")
{
    const auto& r = sevtest::fhnRun();
    const auto& lt = r.analysis.lt;
    CHECK(std::abs(lt.value) > r.analysis.ltFloor);
    CHECK(lt.drift < 1e-6);
    CHECK(lt.zFrom <= -0.9 * r.wave->L);
    CHECK(lt.zTo >= 0.9 * r.wave->L);
}

TEST_CASE("translation solution is phi'")
{
    const auto& r = sevtest::fhnRun();
    const auto t = bundle::translationSolution(*r.wave, r.analysis.params);
    const double z = 3.0;
    const Vec4 a = t.weighted(z) * std::exp(t.weightRate * z);
    const Vec4 b = r.wave->phiPrime(z);
    CHECK((a - b).norm() < 1e-8 * b.norm());
}

}
