#include "sev/maslov.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace sev::maslov {

Vec4 ZeroData::w2(double z) const
{
    return std::exp(-frame.mu[1] * z) * wave->phiPrime(z);
}

Vec4 ZeroData::w3(double z) const
{
    const double z0 = align.zMinus, m3 = frame.mu[2];
    if (z >= z0) return std::exp(-m3 * z) * wave->phiPrime(z);
    const Vec4 x = std::exp(-m3 * z0) * wave->phiPrime(z0);
    Vec4 out = Vec4::Zero();
    for (int k = 2; k < 4; ++k) out += frame.left[k].dot(x) * std::exp((frame.mu[k] - m3) * (z - z0)) * frame.eta[k];
    return out;
}

Vec4 ZeroData::w3Direction(double z, double* logNorm) const
{
    const double z0 = align.zMinus, m3 = frame.mu[2];
    Vec4 x;
    double ls;
    if (z >= z0) {
        x = wave->phiPrime(z);
        ls = -m3 * z;
    } else {
        x = w3(z);
        ls = 0.0;
    }
    const double n = x.norm();
    if (!(n > 0)) throw NumericalError("phi' vanishes at z = " + io::num(z));
    if (logNorm) *logNorm = ls + std::log(n);
    return x / n;
}

ZeroData zeroData(const model::SystemParams& params, const WaveProfile& wave, const bundle::SolutionOptions& opts)
{
    ZeroData d;
    d.params = params;
    d.wave = &wave;
    d.align = bundle::alignTranslation(params, wave);
    d.frame = bundle::alignedFrame(params, d.align, 0.0);
    auto fut = std::async(std::launch::async, [&] { return bundle::strongStableSolution(params, wave, d.align, opts); });
    d.u4 = bundle::strongUnstableSolution(params, wave, d.align, opts);
    d.u1 = fut.get();
    return d;
}

double defaultTau(const WaveProfile& wave)
{
    const std::size_t n = wave.size();
    double peak = 0.0;
    std::size_t ip = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(wave.u[i]) + std::abs(wave.v[i]);
        if (m > peak) peak = m, ip = i;
    }
    for (std::size_t i = ip; i < n; ++i)
        if (std::abs(wave.u[i]) + std::abs(wave.v[i]) < 1e-2 * peak) return wave.grid[i];
    throw DomainError("profile does not decay to 1e-2 of its peak before +L; no default tau");
}

ReferencePlane referencePlane(const ZeroData& d, double tauRequest, double angleTol)
{
    const double L = d.wave->L;
    if (!(tauRequest < L)) throw DomainError("tau = " + io::num(tauRequest) + " must lie below L = " + io::num(L));
    if (tauRequest < d.u1.zmin()) throw DomainError("tau outside the u1 trajectory");

    ReferencePlane r;
    r.tau = tauRequest;
    r.basis1 = d.u1.weighted(r.tau);
    r.basis2 = d.w2(r.tau);
    r.lagrangian = std::abs(exterior::omega(r.basis1, r.basis2)) / (r.basis1.norm() * r.basis2.norm());

    const exterior::PlaneBasis vu{d.frame.eta[2], d.frame.eta[3]};
    std::vector<double> zs{r.tau};
    for (double z : d.u1.traj.z)
        if (z > r.tau && z <= L) zs.push_back(z);
    std::sort(zs.begin(), zs.end());
    r.minAngle = INFINITY;
    for (double z : zs) {
        const double ang = exterior::minPrincipalAngle(vu, {d.u1.weighted(z), d.w2(z)});
        r.minAngle = std::min(r.minAngle, ang);
        if (ang < angleTol)
            throw DomainError("tau too small: E^s(0,tau') meets V^u(0) at tau' = " + io::num(z) + " (angle " +
                              io::num(ang) + ")");
    }
    r.validated = true;
    return r;
}

namespace {

struct Columns {
    Vec4 a1, a2, b1, b2; // unit columns
    double logScale = 0.0;
};

Columns columns(const ReferencePlane& ref, const ZeroData& d, double z)
{
    Columns c;
    double l3;
    const Vec4 w4 = d.u4.weighted(z);
    c.a1 = ref.basis1.normalized();
    c.a2 = ref.basis2.normalized();
    c.b1 = d.w3Direction(z, &l3);
    c.b2 = w4.normalized();
    c.logScale = std::log(ref.basis1.norm() * ref.basis2.norm() * w4.norm()) + l3;
    return c;
}

} // namespace

double detectionBeta(const ReferencePlane& ref, const ZeroData& d, double z)
{
    const auto c = columns(ref, d, z);
    return std::exp(c.logScale) * exterior::quadVolume(c.a1, c.a2, c.b1, c.b2);
}

double detectionBetaNormalized(const ReferencePlane& ref, const ZeroData& d, double z)
{
    const auto c = columns(ref, d, z);
    return exterior::quadVolume(c.a1, c.a2, c.b1, c.b2);
}

double detectionBetaSymplectic(const ReferencePlane& ref, const ZeroData& d, double z)
{
    const auto c = columns(ref, d, z);
    return exterior::symplecticDet(c.a1, c.a2, c.b1, c.b2);
}

double crossingForm(const model::SystemParams& params, const WaveProfile& wave, double zStar, const Vec4& xi)
{
    return exterior::omega(xi, model::coefficientMatrix(params, wave, 0.0, zStar) * xi);
}

namespace {

int signOf(double x) { return (x > 0) - (x < 0); }

void classify(ConjugatePoint& cp, const exterior::Intersection& X, const ZeroData& d, double floor)
{
    cp.dim = X.dimension;
    cp.xiBasis = X.basis;
    cp.u = d.wave->at(cp.zStar).u;
    const Mat4 A = model::coefficientMatrix(d.params, *d.wave, 0.0, cp.zStar);
    if (cp.dim == 1) {
        const Vec4& xi = X.basis[0];
        cp.gamma(0, 0) = exterior::omega(xi, A * xi);
        cp.regular = std::abs(cp.gamma(0, 0)) > floor * xi.squaredNorm();
        cp.signature = cp.regular ? signOf(cp.gamma(0, 0)) : 0;
        return;
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            cp.gamma(i, j) = 0.5 * (exterior::omega(X.basis[i], A * X.basis[j]) +
                                    exterior::omega(X.basis[j], A * X.basis[i]));
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(cp.gamma).eigenvalues();
    cp.regular = std::abs(ev[0]) > floor && std::abs(ev[1]) > floor;
    cp.signature = cp.regular ? signOf(ev[0]) + signOf(ev[1]) : 0;
}

std::string where(double z) { return "z = " + io::num(z); }

} // namespace

std::vector<ConjugatePoint> findConjugatePoints(const ReferencePlane& ref, const ZeroData& d,
                                                const ScanOptions& opts, BetaTrace* trace)
{
    if (!ref.validated) throw SetupError("reference plane not validated");
    const double lo = std::max(d.u4.zmin(), -d.wave->L), tau = ref.tau;

    // grid: u4 steps subdivided, refined uniformly up to the minimum count
    std::vector<double> nodes{lo};
    for (double z : d.u4.traj.z)
        if (z > lo && z < tau) nodes.push_back(z);
    nodes.push_back(tau);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    const std::size_t intervals = nodes.size() - 1;
    int sub = std::max(opts.density, 1);
    while (int(intervals) * sub < opts.minPoints) ++sub;
    std::vector<double> zs;
    for (std::size_t i = 0; i < intervals; ++i)
        for (int k = 0; k < sub; ++k) zs.push_back(nodes[i] + (nodes[i + 1] - nodes[i]) * k / sub);
    zs.push_back(tau);

    std::vector<double> s(zs.size());
    unsigned workers = opts.threads > 0 ? unsigned(opts.threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(zs.size()));
    {
        std::vector<std::future<void>> jobs;
        const std::size_t chunk = (zs.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w * chunk; i < std::min(zs.size(), (w + 1) * chunk); ++i)
                    s[i] = detectionBetaNormalized(ref, d, zs[i]);
            }));
        for (auto& j : jobs) j.get();
    }
    if (trace) {
        trace->z = zs;
        trace->beta.resize(zs.size());
        trace->scale = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            trace->beta[i] = s[i];
            trace->scale = std::max(trace->scale, std::abs(s[i]));
        }
    }

    std::vector<ConjugatePoint> out;
    auto beta = [&](double z) { return detectionBetaNormalized(ref, d, z); };
    const std::size_t last = zs.size() - 1; // zs[last] = tau, handled as the endpoint

    for (std::size_t i = 0; i + 1 < last; ++i) {
        const double a = s[i], b = s[i + 1];
        if (a == 0.0 && i > 0) continue; // counted with the previous interval
        if (signOf(a) * signOf(b) >= 0 && b != 0.0) continue;
        double zs0;
        if (b == 0.0) {
            zs0 = zs[i + 1];
        } else {
            boost::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(beta, zs[i], zs[i + 1], a, b,
                                                       boost::math::tools::eps_tolerance<double>(50), iters);
            zs0 = 0.5 * (r.first + r.second);
            if (r.second - r.first > opts.zTol)
                throw NumericalError("conjugate point refinement stalled near " + where(zs0));
        }
        ConjugatePoint cp;
        cp.zStar = zs0;
        const exterior::PlaneBasis Eu{d.w3Direction(zs0), d.u4.weighted(zs0)};
        exterior::Intersection X;
        try {
            X = exterior::planeIntersection(Eu, {ref.basis1, ref.basis2}, opts.rankTol);
        } catch (const IrregularError& e) {
            throw IrregularError(std::string(e.what()) + " at " + where(zs0));
        }
        if (X.dimension == 0)
            throw NumericalError("beta changes sign near " + where(zs0) + " but the planes do not meet");
        classify(cp, X, d, opts.regularityFloor);
        if (!cp.regular)
            throw IrregularError("irregular crossing at " + where(zs0) + "; perturb tau");
        out.push_back(cp);
    }

    // 2D test at flat minima of the normalised beta that carry no sign change
    for (std::size_t i = 1; i + 1 < last; ++i) {
        const double h = std::abs(s[i]);
        if (!(h <= std::abs(s[i - 1]) && h <= std::abs(s[i + 1]))) continue;
        if (signOf(s[i - 1]) * signOf(s[i + 1]) <= 0) continue;
        const double slope = (s[i + 1] - s[i - 1]) / (zs[i + 1] - zs[i - 1]);
        if (!(h < opts.flatBeta && std::abs(slope) < opts.flatSlope)) continue;
        auto absHat = [&](double z) { return std::abs(detectionBetaNormalized(ref, d, z)); };
        boost::uintmax_t iters = 200;
        const auto m = boost::math::tools::brent_find_minima(absHat, zs[i - 1], zs[i + 1], 50, iters);
        ConjugatePoint cp;
        cp.zStar = m.first;
        exterior::Intersection X;
        try {
            X = exterior::planeIntersection({d.w3Direction(cp.zStar), d.u4.weighted(cp.zStar)}, {ref.basis1, ref.basis2},
                                            10 * std::sqrt(opts.flatBeta));
        } catch (const IrregularError&) {
            throw IrregularError("near-tangential approach at " + where(cp.zStar) + "; perturb tau");
        }
        if (X.dimension == 0) continue;
        if (X.dimension == 1)
            throw IrregularError("tangential one-dimensional crossing at " + where(cp.zStar) + "; perturb tau");
        classify(cp, X, d, opts.regularityFloor);
        if (!cp.regular) throw IrregularError("irregular 2D crossing at " + where(cp.zStar) + "; perturb tau");
        out.push_back(cp);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.zStar < y.zStar; });
    return out;
}

ConjugatePoint endpointCrossing(const ReferencePlane& ref, const ZeroData& d, const ScanOptions& opts)
{
    ConjugatePoint cp;
    cp.zStar = ref.tau;
    const auto X = exterior::planeIntersection({d.w3Direction(ref.tau), d.u4.weighted(ref.tau)}, {ref.basis1, ref.basis2},
                                               opts.rankTol);
    if (X.dimension == 0) throw NumericalError("phi'(tau) not shared by E^u(0,tau) and the reference plane");
    classify(cp, X, d, opts.regularityFloor);
    return cp;
}

MaslovResult maslovIndex(const std::vector<ConjugatePoint>& crossings, const ConjugatePoint& endpoint, double tau)
{
    MaslovResult r;
    r.tau = tau;
    r.crossings = crossings;
    r.endpoint = endpoint;
    for (const auto& cp : crossings) {
        if (!cp.regular) throw IrregularError("irregular crossing at " + where(cp.zStar) + "; perturb tau");
        r.index += cp.signature;
    }
    if (!endpoint.regular) throw IrregularError("irregular endpoint crossing at tau; perturb tau");
    // n+ at the right endpoint
    if (endpoint.dim == 1) {
        r.index += endpoint.gamma(0, 0) > 0 ? 1 : 0;
    } else {
        const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(endpoint.gamma).eigenvalues();
        r.index += (ev[0] > 0) + (ev[1] > 0);
    }
    r.parityPrediction = (r.index % 2 == 0) ? 1 : -1;
    return r;
}

double ltNoiseFloor(const ZeroData& d)
{
    return 1e-10 * d.u1.weighted(0.0).norm() * d.u4.weighted(0.0).norm();
}

ParityVerdict parityCheck(const MaslovResult& result, double lt, double ltFloor)
{
    if (!(std::abs(lt) > ltFloor))
        throw NumericalError("non-transverse construction suspected: |Omega(u1,u4)| = " + io::num(std::abs(lt)) +
                             " is below the noise floor " + io::num(ltFloor));
    ParityVerdict v;
    v.ltSign = signOf(lt);
    v.predicted = result.parityPrediction;
    v.consistent = v.ltSign == v.predicted;
    v.oddCrossings = result.crossings.size() % 2 == 1;
    std::ostringstream os;
    os << "(-1)^" << result.index << " = " << v.predicted << ", sign(lt) = " << v.ltSign;
    v.detail = os.str();
    return v;
}

ParityVerdict parityCheck(const MaslovResult& result, double lt, const ReferencePlane& ref, const ZeroData& d,
                          double ltFloor)
{
    ParityVerdict v = parityCheck(result, lt, ltFloor);
    const double h = 1e-3;
    v.betaSlope =
        (detectionBetaNormalized(ref, d, ref.tau + h) - detectionBetaNormalized(ref, d, ref.tau - h)) / (2 * h);
    const Vec4 p1 = d.wave->phiPrime(ref.tau);
    const Vec4 p2 = model::coefficientMatrix(d.params, *d.wave, 0.0, ref.tau) * p1;
    v.slopePredicted = signOf(lt) * signOf(exterior::omega(p1, p2));
    v.slopeConsistent = signOf(v.betaSlope) == v.slopePredicted && (v.betaSlope > 0) == v.oddCrossings;
    std::ostringstream os;
    os << "; beta'(tau) = " << io::num(v.betaSlope) << " (predicted sign " << v.slopePredicted << ", "
       << result.crossings.size() << " interior crossings)";
    v.detail += os.str();
    return v;
}

std::string betaCsv(const BetaTrace& t)
{
    std::ostringstream os;
    os << "z,beta\n";
    for (std::size_t i = 0; i < t.z.size(); ++i) os << io::num(t.z[i]) << ',' << io::num(t.beta[i]) << '\n';
    return os.str();
}

namespace {

nlohmann::ordered_json pointJson(const ConjugatePoint& cp)
{
    nlohmann::ordered_json j;
    j["z"] = cp.zStar;
    j["dim"] = cp.dim;
    if (cp.dim == 1)
        j["gamma"] = cp.gamma(0, 0);
    else
        j["gamma"] = {{cp.gamma(0, 0), cp.gamma(0, 1)}, {cp.gamma(1, 0), cp.gamma(1, 1)}};
    j["signature"] = cp.signature;
    j["regular"] = cp.regular;
    j["u"] = cp.u;
    return j;
}

} // namespace

std::string crossingJson(const MaslovResult& r, const ParityVerdict& v)
{
    nlohmann::ordered_json j;
    j["tau"] = r.tau;
    j["crossings"] = nlohmann::ordered_json::array();
    for (const auto& cp : r.crossings) j["crossings"].push_back(pointJson(cp));
    auto e = pointJson(r.endpoint);
    e["n_plus"] = r.endpoint.dim == 1 ? int(r.endpoint.gamma(0, 0) > 0) : 0;
    j["endpoint"] = e;
    j["index"] = r.index;
    j["parity"] = r.parityPrediction;
    j["lt_sign"] = v.ltSign;
    j["consistent"] = v.consistent;
    return j.dump(2);
}

} // namespace sev::maslov
