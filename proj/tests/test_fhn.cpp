#include "support.hpp"

#include "sev/error.hpp"
#include "sev/fhn.hpp"
#include "sev/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace sev;

TEST_SUITE("fhn") {

TEST_CASE("fast-front crossing form is negative in the singular limit")
{
    for (double a : {0.1, 0.2, 0.3, 0.4}) {
        CAPTURE(a);
        const auto f = fhn::fastFrontCrossingCheck({a, 0.001, 0.0}, 0.0);
        CHECK(f.gamma < 0);
        CHECK(f.gammaSign == -1);
        CHECK(f.uStar == doctest::Approx(0.5 + a));
        CHECK(f.mu1 > -std::sqrt(0.5));
    }
    CHECK_THROWS_AS(fhn::fastFrontCrossingCheck({0.6, 0.001, 0.0}, 0.0), ParameterError);
}

TEST_CASE("singular comparison on the computed pulse")
{
    const auto& r = sevtest::fhnRun();
    const auto& s = r.singular;
    CHECK(std::abs(s.uTau) < 0.05);
    CHECK(s.frontError < 0.05);
    CHECK(s.cylinderAngle < 1e-2);
    CHECK(s.uSlow > s.uSlowStar);
    CHECK(r.front.gamma < 0);
}

TEST_CASE("report json carries the headline numbers")
{
    const auto& r = sevtest::fhnRun();
    const auto j = nlohmann::json::parse(fhn::reportJson(r));
    CHECK(j["maslov"]["index"] == 0);
    CHECK(j["consistent"] == true);
    CHECK(j["dPrime0"].get<double>() > 0);
    CHECK(j["evans"]["points"] == 20);
}

TEST_CASE("stage keeps the error type and names the stage")
{
    try {
        pipeline::stage("maslov", []() -> int { throw IrregularError("boom"); });
        FAIL("no throw");
    } catch (const IrregularError& e) {
        CHECK(std::string(e.what()) == "maslov: boom");
    }
}

TEST_CASE("flipping Omega breaks parity")
{
    const auto& r = sevtest::fhnRun();
    pipeline::Options o;
    o.flipLt = true;
    o.runScan = false;
    o.perturbTau = false;
    const auto a = pipeline::analyze(r.analysis.params, *r.wave, o);
    CHECK_FALSE(a.parity.consistent);
    CHECK_FALSE(a.consistent);
}

}
