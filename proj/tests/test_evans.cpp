#include "support.hpp"

#include "sev/evans.hpp"

#include <doctest.h>

using namespace sev;

TEST_SUITE("evans") {

TEST_CASE("uniform grid")
{
    const auto g = evans::uniformGrid(-1, 1, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == -1);
    CHECK(g[2] == doctest::Approx(0.0));
    CHECK(g.back() == 1);
}

TEST_CASE("wedge and symplectic routes agree, D(0) vanishes, D > 0 far right")
{
    const auto& a = sevtest::fhnRun().analysis;
    REQUIRE(a.scan.samples.size() == 20);
    double m = 0;
    for (const auto& s : a.scan.samples) {
        CHECK(s.agreement < 1e-6);
        m = std::max(m, std::abs(s.D_wedge));
    }
    CHECK(std::abs(a.atZero.D_wedge) < 1e-7 * m);
    CHECK(a.scan.samples.back().D_wedge > 0);
    // the simple zero at lambda = 0 is the only sign change on [-delta/2, 2]
    REQUIRE(a.scan.signChanges.size() == 1);
    const auto i = a.scan.signChanges[0];
    CHECK(a.scan.samples[i].lambda < 0);
    CHECK(a.scan.samples[i + 1].lambda > 0);
}

TEST_CASE("D'(0) by the product formula and by finite differences")
{
    const auto& r = sevtest::fhnRun();
    const auto& d = r.analysis.derivative;
    CHECK(d.integral > 0);
    CHECK(d.dPrime0 > 0);
    CHECK(d.dPrime0 == doctest::Approx(d.lt * d.integral).epsilon(1e-15));
    CHECK(d.relGap < 5e-3);
    CHECK((d.dPrime0 > 0) == (d.fdCheck > 0));
}

TEST_CASE("csv layout")
{
    std::vector<evans::EvansSample> s{{0.5, 2.0, 2.0, 0.0}};
    const auto csv = evans::evansCsv(s);
    CHECK(csv.rfind("lambda,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

}
