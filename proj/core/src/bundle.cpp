#include "sev/bundle.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <algorithm>
#include <cmath>

namespace sev::bundle {

Alignment alignTranslation(const model::SystemParams& params, const WaveProfile& wave)
{
    const auto unit = model::asymptoticFrame(params, 0.0);
    const std::size_t n = wave.size();
    std::vector<double> mag(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = wave.phiPrime(wave.grid[i]).norm();
        peak = std::max(peak, mag[i]);
    }
    if (!(peak > 0.0)) throw DomainError("flat profile: phi' vanishes identically");
    const double level = 1e-5 * peak;
    std::size_t ir = n - 1, il = 0;
    while (ir > 0 && mag[ir] < level) --ir;
    while (il + 1 < n && mag[il] < level) ++il;

    Alignment al;
    al.zPlus = wave.grid[ir];
    al.zMinus = wave.grid[il];
    const auto& mu = unit.mu;
    al.kappaPlus = std::exp(-mu[1] * al.zPlus) * unit.left[1].dot(wave.phiPrime(al.zPlus));
    al.kappaMinus = std::exp(-mu[2] * al.zMinus) * unit.left[2].dot(wave.phiPrime(al.zMinus));

    // The read-off amplitude still drifts by ~|u|/|mu|, which is large when mu2
    // is slow. d/dz e^{-mu z}<l, phi'> = e^{-mu z}<l, (A(0,z) - A_inf) phi'>
    // exactly, so add the remaining integral out to +-infinity.
    const Mat4 Ainf = model::asymptoticMatrix(params, 0.0);
    auto drift = [&](int k, double z) {
        const Vec4 p = wave.phiPrime(z);
        return std::exp(-mu[k] * z) * unit.left[k].dot((model::coefficientMatrix(params, wave, 0.0, z) - Ainf) * p);
    };
    static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    auto gauss = [&](int k, double a, double b) {
        double s = 0.0;
        for (int q = 0; q < 3; ++q) s += 0.5 * (b - a) * gw[q] * drift(k, 0.5 * (a + b) + 0.5 * (b - a) * gx[q]);
        return s;
    };
    double plus = 0.0;
    for (std::size_t i = ir; i + 1 < n; ++i) plus += gauss(1, wave.grid[i], wave.grid[i + 1]);
    plus += drift(1, wave.grid.back()) / -mu[1]; // the integrand decays like e^{mu2 z}
    double minus = 0.0;
    std::size_t first = 0;
    while (first < il && mag[first] < 1e-8 * peak) ++first;
    for (std::size_t i = first; i < il; ++i) minus += gauss(2, wave.grid[i], wave.grid[i + 1]);
    minus += drift(2, wave.grid[first]) / mu[2]; // and like e^{mu3 z} on the left
    al.kappaPlus += plus;
    al.kappaMinus -= minus;
    if (al.kappaPlus == 0.0 || al.kappaMinus == 0.0 || !std::isfinite(al.kappaPlus * al.kappaMinus))
        throw NumericalError("cannot align eta2/eta3 with phi' (tail data degenerate)");
    return al;
}

model::Frame alignedFrame(const model::SystemParams& params, const Alignment& al, double lambda)
{
    return model::scaledFrame(model::asymptoticFrame(params, lambda), al.kappaPlus, al.kappaMinus);
}

TwoVector BundleTrajectory::at(double z, double* ls) const
{
    return TwoVector(traj.eval(z, ls));
}

namespace {

BundleTrajectory runBundle(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                           const Alignment& al, const Options& opts, bool unstable)
{
    const auto F = alignedFrame(params, al, lambda);
    BundleTrajectory out;
    out.lambda = lambda;
    out.direction = unstable ? Direction::Forward : Direction::Backward;
    out.weightRate = unstable ? F.mu[2] + F.mu[3] : F.mu[0] + F.mu[1];
    const double rate = out.weightRate;
    const Vec6 zeta = unstable ? exterior::wedge(F.eta[2], F.eta[3]).p : exterior::wedge(F.eta[0], F.eta[1]).p;
    const double z0 = unstable ? -wave.L : wave.L;
    auto rhs = [&](double z, const Vec6& Z, Vec6& dZ) {
        dZ = model::inducedMatrix(params, wave, lambda, z) * Z - rate * Z;
    };
    ode::Options o = opts.ode;
    o.renormalize = true;
    try {
        out.traj = ode::integrate(ode::Rhs6(rhs), z0, opts.zEnd, zeta, o);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(unstable ? "unstable" : "stable") + " bundle at lambda = " +
                             io::num(lambda) + ": " + e.what());
    }
    return out;
}

SolutionTrajectory runSolution(const model::SystemParams& params, const WaveProfile& wave, const Alignment& al,
                               const SolutionOptions& opts, bool strongStable)
{
    const auto F = alignedFrame(params, al, 0.0);
    SolutionTrajectory out;
    out.role = strongStable ? Role::U1 : Role::U4;
    out.weightRate = strongStable ? F.mu[0] : F.mu[3];
    const double rate = out.weightRate;
    const double z0 = strongStable ? wave.L : -wave.L;
    const double z1 = opts.full ? -z0 : opts.zEnd;
    auto rhs = [&](double z, const Vec4& Y, Vec4& dY) {
        dY = model::coefficientMatrix(params, wave, 0.0, z) * Y - rate * Y;
    };
    ode::Options o = opts.ode;
    o.renormalize = false;
    o.growthLimit = INFINITY;
    out.traj = ode::integrate(ode::Rhs4(rhs), z0, z1, strongStable ? F.eta[0] : F.eta[3], o);

    // Inside the core the weighted solution may grow by the excess of the
    // local strong rate over the rest-state one; past the core it must settle.
    // Growth beyond the limit there means another mode has taken over.
    double peak = 0.0;
    for (std::size_t i = 0; i < wave.size(); ++i) peak = std::max(peak, std::abs(wave.u[i]) + std::abs(wave.v[i]));
    double zExit = strongStable ? wave.grid.back() : wave.grid.front();
    for (std::size_t i = 0; i < wave.size(); ++i) {
        if (std::abs(wave.u[i]) + std::abs(wave.v[i]) < 1e-3 * peak) continue;
        zExit = strongStable ? std::min(zExit, wave.grid[i]) : wave.grid[i];
        if (strongStable) break;
    }
    double ref = 0.0;
    const auto& zs = out.traj.z;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const bool past = strongStable ? zs[i] <= zExit : zs[i] >= zExit;
        if (!past) continue;
        const double nrm = out.traj.y[i].norm();
        if (ref == 0.0) ref = nrm;
        if (nrm > opts.ode.growthLimit * ref)
            throw NumericalError("mode takeover: weighted " + std::string(strongStable ? "u1" : "u4") +
                                 " grew beyond " + io::num(opts.ode.growthLimit) + " past the core near z = " +
                                 io::num(zs[i]) + " (try a larger L)");
    }
    return out;
}

} // namespace

BundleTrajectory unstableBundle(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                                const Alignment& al, const Options& opts)
{
    return runBundle(params, wave, lambda, al, opts, true);
}

BundleTrajectory stableBundle(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                              const Alignment& al, const Options& opts)
{
    return runBundle(params, wave, lambda, al, opts, false);
}

SolutionTrajectory strongStableSolution(const model::SystemParams& params, const WaveProfile& wave,
                                        const Alignment& al, const SolutionOptions& opts)
{
    return runSolution(params, wave, al, opts, true);
}

SolutionTrajectory strongUnstableSolution(const model::SystemParams& params, const WaveProfile& wave,
                                          const Alignment& al, const SolutionOptions& opts)
{
    return runSolution(params, wave, al, opts, false);
}

SolutionTrajectory translationSolution(const WaveProfile& wave, const model::SystemParams& params)
{
    SolutionTrajectory out;
    out.role = Role::PhiPrime;
    out.weightRate = 0.0;
    for (double z : wave.grid) {
        const Vec4 y = wave.phiPrime(z);
        out.traj.z.push_back(z);
        out.traj.y.push_back(y);
        out.traj.dy.push_back(model::coefficientMatrix(params, wave, 0.0, z) * y);
        out.traj.logScale.push_back(0.0);
    }
    return out;
}

Invariant lazutkinTreschev(const model::SystemParams& params, const SolutionTrajectory& u1,
                           const SolutionTrajectory& u4, double tol)
{
    if (std::abs(u1.weightRate + u4.weightRate + params.c) > 1e-10 * (1 + std::abs(params.c)))
        throw DomainError("lazutkinTreschev expects the mu1/mu4 weighted solutions at lambda = 0");
    const double a = std::max(u1.zmin(), u4.zmin()), b = std::min(u1.zmax(), u4.zmax());
    if (!(b > a)) throw DomainError("u1 and u4 trajectories do not overlap");

    std::vector<double> zs;
    for (double z : u1.traj.z)
        if (z >= a && z <= b) zs.push_back(z);
    for (double z : u4.traj.z)
        if (z >= a && z <= b) zs.push_back(z);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

    std::vector<double> s(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) s[i] = exterior::omega(u1.weighted(zs[i]), u4.weighted(zs[i]));

    const double lo = a + 0.25 * (b - a), hi = b - 0.25 * (b - a);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
        const double za = std::max(zs[i], lo), zb = std::min(zs[i + 1], hi);
        if (zb <= za) continue;
        const double h = zs[i + 1] - zs[i];
        auto lerp = [&](double z) { return s[i] + (s[i + 1] - s[i]) * (z - zs[i]) / h; };
        num += 0.5 * (lerp(za) + lerp(zb)) * (zb - za);
        den += zb - za;
    }
    Invariant out;
    out.value = den > 0 ? num / den : s[s.size() / 2];
    out.zFrom = a;
    out.zTo = b;
    double worst = 0.0;
    for (double v : s) worst = std::max(worst, std::abs(v - out.value));
    out.drift = out.value != 0.0 ? worst / std::abs(out.value) : INFINITY;
    if (!(out.drift < tol))
        throw NumericalError("non-constant invariant: Omega(u1,u4) drifts by " + io::num(out.drift) +
                             " (relative) over the overlap");
    return out;
}

} // namespace sev::bundle
