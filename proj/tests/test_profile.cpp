#include "support.hpp"

#include "sev/error.hpp"
#include "sev/io.hpp"
#include "sev/profile.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>

using namespace sev;

namespace {

// u = sech^2 bump with v = u/10; tails decay like e^{-2|z|}
WaveProfile bump(double L = 20.0, int n = 4001)
{
    WaveProfile w;
    w.L = L;
    w.c = -0.3;
    for (int i = 0; i < n; ++i) {
        const double z = -L + 2 * L * i / (n - 1);
        const double s = 1 / std::cosh(z), t = std::tanh(z);
        const double u = s * s, du = -2 * s * s * t, ddu = s * s * (4 * t * t - 2 * s * s);
        w.grid.push_back(z);
        w.u.push_back(u);
        w.du.push_back(du);
        w.ddu.push_back(ddu);
        w.v.push_back(0.1 * u);
        w.dv.push_back(0.1 * du);
        w.ddv.push_back(0.1 * ddu);
    }
    return w;
}

} // namespace

TEST_SUITE("profile") {

TEST_CASE("save / load round trip is exact")
{
    const auto w = bump();
    const auto path = (std::filesystem::temp_directory_path() / "sev_profile_rt.json").string();
    saveProfile(w, path);
    const auto r = loadProfile(path);
    CHECK(r.grid == w.grid);
    CHECK(r.u == w.u);
    CHECK(r.ddv == w.ddv);
    CHECK(r.c == w.c);
    CHECK(r.L == w.L);
    std::filesystem::remove(path);
}

TEST_CASE("interpolation and tails")
{
    const auto w = bump();
    const auto s = w.at(0.3);
    CHECK(s.u == doctest::Approx(std::pow(1 / std::cosh(0.3), 2)).epsilon(1e-6));
    const Vec4 pp = w.phiPrime(0.3);
    CHECK(pp[0] == doctest::Approx(s.du));
    CHECK(pp[2] == doctest::Approx(s.ddu / w.sigma));
    CHECK(derivativeConsistency(w) < 1e-4);
    auto wt = w;
    wt.tails = estimateTails(wt);
    CHECK(wt.tails.muPlus == doctest::Approx(-2.0).epsilon(1e-3));
    const auto e = tailExtend(wt, 25.0);
    CHECK(std::abs(e.u) < std::abs(w.u.back()));
}

TEST_CASE("schema errors")
{
    const auto good = nlohmann::json::parse(profileJson(bump()));
    auto broken = good;
    broken.erase("u");
    CHECK_THROWS_AS(parseProfile(broken.dump()), SchemaError);
    broken = good;
    broken["version"] = 7;
    CHECK_THROWS_AS(parseProfile(broken.dump()), SchemaError);
    broken = good;
    broken["grid"][3] = broken["grid"][2];
    CHECK_THROWS_AS(parseProfile(broken.dump()), SchemaError);
    CHECK_THROWS_AS(parseProfile("{not json"), SchemaError);
    CHECK_THROWS_AS(loadProfile("/nonexistent/sev/profile.json"), SchemaError);
}

TEST_CASE("tail and derivative tolerances")
{
    auto w = bump(3.0, 601); // cut too short: |u| at the ends ~ 1e-2
    CHECK_THROWS_AS(parseProfile(profileJson(w)), DomainError);
    w = bump();
    for (auto& x : w.du) x *= 1.01;
    CHECK_THROWS_AS(parseProfile(profileJson(w)), DomainError);
}

TEST_CASE("finite difference weights")
{
    const std::vector<double> xs{-1, 0, 1};
    const auto wts = fdWeights(0.0, xs, 1);
    CHECK(wts[0] == doctest::Approx(-0.5));
    CHECK(wts[1] == doctest::Approx(0.0));
    CHECK(wts[2] == doctest::Approx(0.5));
}

TEST_CASE("atomic write leaves no temporary")
{
    const auto dir = std::filesystem::temp_directory_path() / "sev_atomic";
    std::filesystem::create_directories(dir);
    io::writeFileAtomic((dir / "x.txt").string(), "abc");
    io::writeFileAtomic((dir / "x.txt").string(), "def");
    CHECK(io::readFile((dir / "x.txt").string()) == "def");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    std::filesystem::remove_all(dir);
}

}
