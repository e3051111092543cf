#include "sev/fhn.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <json.hpp>

#include <cmath>

namespace sev::fhn {

namespace {

int signOf(double x) { return (x > 0) - (x < 0); }

double fprime(const wave::FhnParams& p, double u) { return -3 * u * u + 2 * (1 + p.a) * u - p.a; }

double angleBetween(const Vec4& x, const Vec4& y)
{
    const double c = std::abs(x.dot(y)) / (x.norm() * y.norm());
    return std::acos(std::min(1.0, c));
}

} // namespace

FastFrontCheck fastFrontCrossingCheck(const wave::FhnParams& p, double uTau)
{
    if (!(p.a > 0 && p.a < 0.5)) throw ParameterError("a = " + io::num(p.a) + " outside (0, 1/2)");
    const double c = wave::nagumoFront(p.a).speed;
    const double ft = fprime(p, uTau);
    const double disc = c * c - 4 * ft;
    if (disc < 0) throw ParameterError("complex fast rate at u_tau = " + io::num(uTau));
    FastFrontCheck r;
    r.mu1 = -0.5 * c - 0.5 * std::sqrt(disc);
    const double lo = -std::sqrt(0.5), hi = -p.a * std::sqrt(2.0);
    if (!(r.mu1 > lo && r.mu1 <= hi + 1e-12))
        throw ParameterError("mu1(u_tau) = " + io::num(r.mu1) + " outside (-sqrt2/2, -a sqrt2]: no fast-front crossing");
    r.uStar = 0.5 - r.mu1 / std::sqrt(2.0);
    r.gamma = -ft * ft * (r.mu1 * r.mu1 + c * r.mu1 + fprime(p, r.uStar));
    r.gammaSign = signOf(r.gamma);
    return r;
}

SingularComparison singularVsFullComparison(const wave::FhnParams& p, const pipeline::Analysis& a)
{
    const auto& w = *a.zero.wave;
    SingularComparison s;
    s.uTau = w.at(a.ref.tau).u;
    s.uStar = fastFrontCrossingCheck(p, s.uTau).uStar;

    // u = 1/2 on the rising front
    std::size_t i = 0;
    while (i + 1 < w.size() && !(w.u[i] < 0.5 && w.u[i + 1] >= 0.5)) ++i;
    if (i + 1 >= w.size()) throw DomainError("profile never reaches u = 1/2");
    double lo = w.grid[i], hi = w.grid[i + 1];
    for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        (w.at(mid).u < 0.5 ? lo : hi) = mid;
    }
    s.zMid = 0.5 * (lo + hi);

    const exterior::PlaneBasis cyl{Vec4(1, 0, std::sqrt(0.5) - 0.5 * std::sqrt(2.0), 0), Vec4(0, 0, 0, 1)};
    s.cylinderAngle =
        exterior::minPrincipalAngle({a.zero.w3Direction(s.zMid), a.zero.u4.weighted(s.zMid)}, cyl);

    const maslov::ConjugatePoint* front = nullptr;
    const maslov::ConjugatePoint* slow = nullptr;
    for (const auto& cp : a.maslov.crossings) {
        if (cp.signature < 0 && (!front || std::abs(cp.zStar - s.zMid) < std::abs(front->zStar - s.zMid))) front = &cp;
        if (cp.signature > 0 && !slow) slow = &cp;
    }
    if (front) {
        s.zFront = front->zStar;
        s.uFront = front->u;
        s.frontError = std::abs(s.uFront - s.uStar);
    } else {
        s.frontError = INFINITY;
    }

    const double ft = fprime(p, s.uTau);
    const double disc = 4 * (1 + p.a) * (1 + p.a) - 12 * (p.a + ft);
    s.uSlowStar = disc >= 0 ? (2 * (1 + p.a) + std::sqrt(disc)) / 6 : NAN;
    if (slow) {
        s.zSlow = slow->zStar;
        s.uSlow = slow->u;
        const Vec4 t(1, ft, 0, (p.gamma * ft - 1) / a.params.c);
        s.slowTangentAngle = angleBetween(w.phiPrime(s.zSlow), t);
    } else {
        s.slowTangentAngle = NAN;
    }
    return s;
}

FhnReport runFhn(const wave::FhnParams& p, const RunOptions& opts)
{
    FhnReport r;
    r.params = p;
    const auto solved = pipeline::stage("wave", [&] {
        const auto orbit = wave::fhnSingularOrbit(p);
        return wave::solveHomoclinic(p, orbit, opts.solve);
    });
    r.c = solved.c;
    r.residual = solved.residual;
    r.wave = std::make_shared<WaveProfile>(solved.profile);
    const auto params = wave::fhnSystem(p, r.c);
    r.analysis = pipeline::analyze(params, *r.wave, opts.analysis);
    pipeline::stage("singular comparison", [&] {
        r.singular = singularVsFullComparison(p, r.analysis);
        r.front = fastFrontCrossingCheck(p, r.singular.uTau);
    });
    r.melnikov = r.analysis.derivative.integral;
    r.lt = r.analysis.lt.value;
    r.dPrime0 = r.analysis.derivative.dPrime0;
    r.consistent = r.analysis.consistent;
    return r;
}

std::string reportJson(const FhnReport& r)
{
    using json = nlohmann::ordered_json;
    json j;
    j["params"] = {{"a", r.params.a}, {"eps", r.params.eps}, {"gamma", r.params.gamma}};
    j["c"] = r.c;
    j["collocation_residual"] = r.residual;
    const json an = json::parse(pipeline::analysisJson(r.analysis));
    for (auto it = an.begin(); it != an.end(); ++it) j[it.key()] = it.value();
    const auto& s = r.singular;
    j["singular_comparison"] = {{"u_tau", s.uTau},
                                {"u_star", s.uStar},
                                {"z_front", s.zFront},
                                {"u_front", s.uFront},
                                {"front_error", s.frontError},
                                {"z_mid", s.zMid},
                                {"cylinder_angle", s.cylinderAngle},
                                {"z_slow", s.zSlow},
                                {"u_slow", s.uSlow},
                                {"u_slow_star", s.uSlowStar},
                                {"slow_tangent_angle", s.slowTangentAngle}};
    j["fast_front_check"] = {{"mu1", r.front.mu1}, {"u_star", r.front.uStar}, {"gamma", r.front.gamma},
                             {"gamma_sign", r.front.gammaSign}};
    j["melnikov"] = r.melnikov;
    j["dPrime0"] = r.dPrime0;
    j["consistent"] = r.consistent;
    return j.dump(2);
}

} // namespace sev::fhn
