// One PASS/FAIL line per acceptance criterion. argv[1]: sevtool, argv[2]: scratch directory.

#include "support.hpp"

#include "sev/bundle.hpp"
#include "sev/error.hpp"
#include "sev/exterior.hpp"
#include "sev/io.hpp"
#include "sev/wave.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace sev;
namespace fs = std::filesystem;

namespace {

constexpr double kEps = 0.0005;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

Verdict symplecticIdentities()
{
    const auto p = wave::fhnSystem({0.25, kEps, 0.0}, -0.31);
    std::uniform_real_distribution<double> U(-0.5, 1.5), V(-0.1, 0.2), Lam(-1, 3);
    double wa = 0;
    for (int k = 0; k < 100; ++k) {
        const Mat4 A = model::coefficientMatrix(p, U(sevtest::rng()), V(sevtest::rng()), Lam(sevtest::rng()));
        const Mat4 R = A.transpose() * exterior::J() + exterior::J() * A + p.c * exterior::J();
        wa = std::max(wa, R.cwiseAbs().maxCoeff());
    }
    double wd = 0;
    for (int k = 0; k < 1000; ++k) {
        const Vec4 a = sevtest::randomUnit(), b = sevtest::randomUnit(), c = sevtest::randomUnit(),
                   d = sevtest::randomUnit();
        wd = std::max(wd, std::abs(exterior::symplecticDet(a, b, c, d) - exterior::quadVolume(a, b, c, d)));
    }
    return {wa <= 1e-13 && wd < 1e-12, "max |A^T J + J A + cJ| = " + fmt(wa) + ", max |det gap| = " + fmt(wd)};
}

Verdict structurePreservation()
{
    const auto& r = sevtest::fhnRun(kEps);
    const auto& p = r.analysis.params;
    const auto al = bundle::alignTranslation(p, *r.wave);
    const double d = model::lambdaWindow(p);
    double gr = 0, lg = 0;
    for (double lam : {-0.5 * d, 0.0, 0.5, 2.0})
        for (const auto& b : {bundle::unstableBundle(p, *r.wave, lam, al), bundle::stableBundle(p, *r.wave, lam, al)})
            for (const auto& y : b.traj.y) {
                const exterior::TwoVector T(y / y.norm());
                gr = std::max(gr, std::abs(exterior::grassmannResidual(T)));
                lg = std::max(lg, std::abs(exterior::lagrangianResidual(T)));
            }
    return {gr < 1e-9 && lg < 1e-8, "Grassmann " + fmt(gr) + ", Lagrangian " + fmt(lg)};
}

Verdict omegaConstancy()
{
    const auto& a = sevtest::fhnRun(kEps).analysis;
    const auto& b = sevtest::fhnRun(kEps / 2).analysis;
    const bool span = a.lt.zFrom <= -0.99 * a.L && a.lt.zTo >= 0.99 * a.L;
    return {span && a.lt.drift < 1e-6 && b.lt.drift < 1e-6,
            "relative drift " + fmt(a.lt.drift) + " (eps), " + fmt(b.lt.drift) + " (eps/2) over [" + fmt(a.lt.zFrom) +
                ", " + fmt(a.lt.zTo) + "]"};
}

Verdict evansCross()
{
    bool ok = true;
    std::string d;
    for (double eps : {kEps, kEps / 2}) {
        const auto& a = sevtest::fhnRun(eps).analysis;
        double agree = 0;
        for (const auto& s : a.scan.samples) agree = std::max(agree, s.agreement);
        const double dmax = a.scan.samples.back().D_wedge;
        ok = ok && a.scan.samples.size() == 20 && agree < 1e-6 && a.zeroRatio < 1e-7 && dmax > 0;
        d += "eps=" + fmt(eps) + ": agreement " + fmt(agree) + ", |D(0)|/max " + fmt(a.zeroRatio) +
             ", D(lmax) " + fmt(dmax) + "; ";
    }
    return {ok, d};
}

Verdict derivativeTriangulation()
{
    bool ok = true;
    std::string d;
    for (double eps : {kEps, kEps / 2}) {
        const auto& x = sevtest::fhnRun(eps).analysis.derivative;
        const bool s = (x.lt * x.integral > 0) == (x.fdCheck > 0);
        ok = ok && s && x.relGap < 5e-3 && x.integral > 0 && x.dPrime0 > 0;
        d += "eps=" + fmt(eps) + ": melnikov " + fmt(x.integral) + ", D'(0) " + fmt(x.dPrime0) + ", gap " +
             fmt(x.relGap) + "; ";
    }
    return {ok, d};
}

Verdict maslovReproduction()
{
    const auto& a = sevtest::fhnRun(kEps).analysis;
    std::vector<int> sig;
    for (const auto& c : a.maslov.crossings) sig.push_back(c.signature);
    sig.push_back(a.maslov.endpoint.gamma(0, 0) > 0 ? 1 : -1);
    bool ok = sig == std::vector<int>{-1, 1, -1, 1} && a.maslov.index == 0 && a.maslov.endpoint.dim == 1;
    std::string d = "signatures";
    for (int s : sig) d += s > 0 ? " +1" : " -1";
    d += ", index " + std::to_string(a.maslov.index) + "; tau checks";
    for (const auto& t : a.tauChecks) {
        ok = ok && t.ok && t.index == 0;
        d += t.ok ? " " + std::to_string(t.index) : " error(" + t.error + ")";
    }
    const auto& b = sevtest::fhnRun(kEps / 2).analysis;
    ok = ok && b.maslov.index == 0;
    d += "; eps/2 index " + std::to_string(b.maslov.index);
    return {ok, d};
}

// continuation in a from the a = 0.25 pulse
const fhn::FhnReport& continuedRun(double a)
{
    static std::unique_ptr<fhn::FhnReport> r;
    if (r) return *r;
    const auto& base = sevtest::fhnRun(kEps);
    r = std::make_unique<fhn::FhnReport>();
    r->params = {a, kEps, 0.0};
    const auto s = wave::solveHomoclinic(wave::fhnSystem(r->params, base.c), *base.wave);
    r->c = s.c;
    r->wave = std::make_shared<WaveProfile>(s.profile);
    r->analysis = pipeline::analyze(wave::fhnSystem(r->params, s.c), *r->wave);
    return *r;
}

Verdict parityCorpus()
{
    struct Case {
        std::string name;
        std::function<const fhn::FhnReport&()> run;
    };
    const std::vector<Case> corpus{
        {"a=.25", [] { return std::cref(sevtest::fhnRun(kEps)); }},
        {"a=.25 eps/2", [] { return std::cref(sevtest::fhnRun(kEps / 2)); }},
        {"a=.15", [] { return std::cref(sevtest::fhnRun(kEps, 0.15)); }},
        {"a=.2", [] { return std::cref(sevtest::fhnRun(kEps, 0.2)); }},
        {"a=.25 g=.5", [] { return std::cref(sevtest::fhnRun(kEps, 0.25, 0.5)); }},
        {"a=.28", [] { return std::cref(continuedRun(0.28)); }},
    };
    bool ok = true;
    std::string d;
    for (const auto& c : corpus) {
        try {
            const auto& a = c.run().analysis;
            const bool good = a.parity.consistent && a.parity.slopeConsistent;
            ok = ok && good;
            d += c.name + (good ? " ok" : " MISMATCH") + "(idx " + std::to_string(a.maslov.index) + ", lt " +
                 (a.lt.value > 0 ? "+" : "-") + "); ";
        } catch (const std::exception& e) {
            ok = false;
            d += c.name + " error: " + e.what() + "; ";
        }
    }
    return {ok, d};
}

Verdict singularLimit()
{
    const auto& s1 = sevtest::fhnRun(kEps).singular;
    const auto& s2 = sevtest::fhnRun(kEps / 2).singular;
    const double ratio = s2.frontError / s1.frontError;
    bool ok = ratio >= 0.3 && ratio <= 0.7;
    std::string d = "front error " + fmt(s1.frontError) + " -> " + fmt(s2.frontError) + " (ratio " + fmt(ratio) +
                    "); Gamma(a)";
    for (double a : {0.1, 0.2, 0.3, 0.4}) {
        const auto f = fhn::fastFrontCrossingCheck({a, kEps, 0.0}, 0.0);
        ok = ok && f.gamma < 0;
        d += " " + fmt(f.gamma);
    }
    return {ok, d};
}

Verdict clearance()
{
    const auto& c = sevtest::fhnRun(kEps).analysis.clearance;
    return {c.clear && c.K_estimate < 0, std::string("clear=") + (c.clear ? "true" : "false") + ", K " + fmt(c.K_estimate)};
}

Verdict determinism(const std::string& tool, const fs::path& dir)
{
    fs::create_directories(dir);
    const auto cfg = (dir / "config.json").string();
    io::writeFileAtomic(cfg, R"({"system": {"preset": "fhn", "a": 0.25, "eps": 0.0005}, "wave": {"source": "solve"}})");
    for (const char* run : {"run1", "run2"}) {
        const std::string cmd =
            "\"" + tool + "\" analyze --config \"" + cfg + "\" --out \"" + (dir / run).string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, std::string("sevtool failed for ") + run};
    }
    bool same = true;
    std::string d;
    for (const char* f : {"evans.csv", "beta.csv"}) {
        const bool eq = io::readFile((dir / "run1" / f).string()) == io::readFile((dir / "run2" / f).string());
        same = same && eq;
        d += std::string(f) + (eq ? " identical; " : " DIFFERS; ");
    }
    auto strip = [&](const char* run) {
        auto j = nlohmann::ordered_json::parse(io::readFile((dir / run / "report.json").string()));
        j.erase("metadata");
        return j.dump(2);
    };
    const bool eq = strip("run1") == strip("run2");
    d += std::string("report.json outside metadata ") + (eq ? "identical" : "DIFFERS");
    return {same && eq, d};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 3) {
        std::cerr << "usage: sev_acceptance <sevtool> <scratch dir>\n";
        return 1;
    }
    const std::vector<std::pair<const char*, std::function<Verdict()>>> items{
        {"symplectic identities", symplecticIdentities},
        {"structure preservation", structurePreservation},
        {"Omega constancy", omegaConstancy},
        {"Evans cross-validation", evansCross},
        {"D'(0) triangulation", derivativeTriangulation},
        {"Maslov reproduction", maslovReproduction},
        {"parity (-1)^index = sign Omega", parityCorpus},
        {"singular-limit agreement", singularLimit},
        {"essential-spectrum clearance", clearance},
        {"determinism", [&] { return determinism(argv[1], argv[2]); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = items[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << items[i].first << ": " << v.detail
                  << " [" << fmt(s) << " s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
