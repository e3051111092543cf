#include "sev/evans.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace sev::evans {

using exterior::TwoVector;

EvansSample evansAt(const model::SystemParams& params, const WaveProfile& wave, double lambda,
                    const bundle::Alignment& al, const Options& opts)
{
    bundle::Options bo = opts.bundle;
    bo.zEnd = opts.zMatch;
    const auto U = bundle::unstableBundle(params, wave, lambda, al, bo);
    const auto S = bundle::stableBundle(params, wave, lambda, al, bo);
    if (U.traj.z.back() != opts.zMatch || S.traj.z.back() != opts.zMatch)
        throw SetupError("bundle trajectories do not reach the matching point");

    // e^{2cz} e^{(mu1+mu2)z} e^{(mu3+mu4)z} = 1: the rescaled representatives pair directly
    const TwoVector P(S.traj.y.back()), Q(U.traj.y.back());
    const double scale = std::exp(S.traj.logScale.back() + U.traj.logScale.back());

    EvansSample s;
    s.lambda = lambda;
    s.D_wedge = scale * exterior::wedge4(P, Q);
    const auto a = exterior::recoverBasis(P);
    const auto b = exterior::recoverBasis(Q);
    s.D_symplectic = scale * exterior::symplecticDet(a.c1, a.c2, b.c1, b.c2) / (a.scale * b.scale);
    const double m = std::max(std::abs(s.D_wedge), std::abs(s.D_symplectic));
    s.agreement = m > 0 ? std::abs(s.D_wedge - s.D_symplectic) / m : 0.0;
    return s;
}

std::vector<double> uniformGrid(double lo, double hi, int steps)
{
    std::vector<double> g;
    if (steps <= 0) return g;
    if (steps == 1) return {lo};
    for (int k = 0; k < steps; ++k) g.push_back(lo + (hi - lo) * k / (steps - 1));
    return g;
}

Scan evansScan(const model::SystemParams& params, const WaveProfile& wave, std::vector<double> grid,
               const bundle::Alignment& al, const Options& opts)
{
    Scan out;
    std::sort(grid.begin(), grid.end());
    const auto n0 = grid.size();
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() != n0)
        out.warnings.push_back("removed " + std::to_string(n0 - grid.size()) + " duplicate lambda value(s)");
    if (grid.empty()) return out;

    const double nu2 = model::restEigenvalues(params.kinetics)[1];
    for (double l : grid)
        if (!(l > nu2)) throw DomainError("lambda = " + io::num(l) + " outside the real-rate window");

    out.samples.resize(grid.size());
    unsigned workers = opts.threads > 0 ? unsigned(opts.threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(grid.size()));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < grid.size(); i += workers)
                out.samples[i] = evansAt(params, wave, grid[i], al, opts);
        }));
    for (auto& j : jobs) j.get();

    for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
        const double a = out.samples[i].D_wedge, b = out.samples[i + 1].D_wedge;
        if ((a < 0 && b > 0) || (a > 0 && b < 0)) out.signChanges.push_back(i);
    }
    return out;
}

namespace {

// e^{cz} x^2 without overflowing where e^{cz} is huge and x tiny
double weightedSquare(double cz, double x)
{
    if (x == 0.0) return 0.0;
    return std::exp(cz + 2.0 * std::log(std::abs(x)));
}

} // namespace

double melnikovIntegral(const model::SystemParams& params, const WaveProfile& wave, int subdivide)
{
    const double sig = params.kinetics.sigma, alp = params.kinetics.alpha, c = params.c;
    auto integrand = [&](double z) {
        const auto s = wave.at(z);
        return weightedSquare(c * z, s.du) / sig - weightedSquare(c * z, s.dv) / alp;
    };
    static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const int m = std::max(1, subdivide);
    // Far left e^{cz} is astronomically large while the profile sits at
    // underflow level; start where phi' is still resolved and attach the tail.
    double peak = 0.0;
    for (double z : wave.grid) peak = std::max(peak, wave.phiPrime(z).norm());
    std::size_t first = 0;
    while (first + 1 < wave.size() && wave.phiPrime(wave.grid[first]).norm() < 1e-8 * peak) ++first;
    double sum = 0.0;
    for (std::size_t i = first; i + 1 < wave.size(); ++i) {
        const double a = wave.grid[i], h = (wave.grid[i + 1] - a) / m;
        for (int k = 0; k < m; ++k) {
            const double mid = a + (k + 0.5) * h;
            for (int q = 0; q < 3; ++q) sum += 0.5 * h * gw[q] * integrand(mid + 0.5 * h * gx[q]);
        }
    }
    // tails: the integrand decays like e^{(c + 2 mu) z}
    const auto mu = model::asymptoticRates(params, 0.0);
    const double right = integrand(wave.grid.back()), left = integrand(wave.grid[first]);
    sum += right / -(c + 2 * mu[1]);
    sum += left / (c + 2 * mu[2]);
    return sum;
}

DerivativeReport evansDerivativeAtZero(const model::SystemParams& params, const WaveProfile& wave,
                                       const bundle::Alignment& al, const bundle::Invariant& lt, double h,
                                       const Options& opts)
{
    DerivativeReport r;
    r.lt = lt.value;
    r.ltDrift = lt.drift;
    r.integral = melnikovIntegral(params, wave);
    r.dPrime0 = r.lt * r.integral;
    r.h = h;
    const double dp = evansAt(params, wave, h, al, opts).D_wedge;
    const double dm = evansAt(params, wave, -h, al, opts).D_wedge;
    r.fdCheck = (dp - dm) / (2 * h);
    const double m = std::max(std::abs(r.dPrime0), std::abs(r.fdCheck));
    r.relGap = m > 0 ? std::abs(r.dPrime0 - r.fdCheck) / m : 0.0;
    return r;
}

std::string evansCsv(const std::vector<EvansSample>& samples)
{
    std::ostringstream os;
    os << "lambda,D_wedge,D_symplectic,agreement\n";
    for (const auto& s : samples)
        os << io::num(s.lambda) << ',' << io::num(s.D_wedge) << ',' << io::num(s.D_symplectic) << ','
           << io::num(s.agreement) << '\n';
    return os.str();
}

} // namespace sev::evans
