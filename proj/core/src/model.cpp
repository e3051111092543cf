#include "sev/model.hpp"
#include "sev/error.hpp"
#include "sev/profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace sev::model {

namespace {

double horner(const std::vector<double>& c, double x)
{
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

std::vector<double> derivative(const std::vector<double>& c)
{
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
    return d;
}

constexpr int kI[6] = {0, 0, 0, 1, 1, 2};
constexpr int kJ[6] = {1, 2, 3, 2, 3, 3};

int pairIndex(int i, int j)
{
    for (int k = 0; k < 6; ++k)
        if (kI[k] == i && kJ[k] == j) return k;
    return -1;
}

} // namespace

Kinetics polynomialKinetics(std::vector<double> fc, std::vector<double> gc, double sigma, double alpha)
{
    Kinetics k;
    auto dfc = derivative(fc);
    auto dgc = derivative(gc);
    k.f = [fc](double u) { return horner(fc, u); };
    k.df = [dfc](double u) { return horner(dfc, u); };
    k.g = [gc](double v) { return horner(gc, v); };
    k.dg = [dgc](double v) { return horner(dgc, v); };
    k.sigma = sigma;
    k.alpha = alpha;
    return k;
}

void validate(const SystemParams& p)
{
    if (!(p.kinetics.sigma > 0.0) || !(p.kinetics.alpha > 0.0))
        throw ParameterError("sigma and alpha must be positive");
    if (!(p.c < 0.0))
        throw ParameterError("wave speed must be negative, got c = " + std::to_string(p.c));
    if (!p.kinetics.f || !p.kinetics.df || !p.kinetics.g || !p.kinetics.dg)
        throw ParameterError("kinetics functions missing");
}

bool turingCheck(const Kinetics& k)
{
    const double a = k.df(0.0), b = k.dg(0.0);
    return a + b < 0.0 && a * b + k.sigma * k.alpha > 0.0;
}

std::array<double, 2> restEigenvalues(const Kinetics& k)
{
    const double a = k.df(0.0), b = k.dg(0.0);
    const double half = 0.5 * (a - b);
    const double disc = half * half - k.sigma * k.alpha;
    if (disc < 0.0)
        throw DomainError("oscillatory tails unsupported: DF(0) has complex eigenvalues");
    const double r = std::sqrt(disc);
    if (r < 1e-12)
        throw DomainError("DF(0) eigenvalues coincide (need nu1 < nu2)");
    const double m = 0.5 * (a + b);
    return {m - r, m + r};
}

Mat4 coefficientMatrix(const SystemParams& p, double u, double v, double lambda)
{
    const auto& k = p.kinetics;
    Mat4 A = Mat4::Zero();
    A(0, 2) = k.sigma;
    A(1, 3) = k.alpha;
    A(2, 0) = (lambda - k.df(u)) / k.sigma;
    A(2, 1) = 1.0;
    A(2, 2) = -p.c;
    A(3, 0) = -1.0;
    A(3, 1) = (lambda - k.dg(v)) / k.alpha;
    A(3, 3) = -p.c;
    return A;
}

Mat4 coefficientMatrix(const SystemParams& p, const WaveProfile& wave, double lambda, double z)
{
    const auto s = wave.at(z);
    return coefficientMatrix(p, s.u, s.v, lambda);
}

Mat4 asymptoticMatrix(const SystemParams& p, double lambda)
{
    return coefficientMatrix(p, 0.0, 0.0, lambda);
}

std::array<double, 4> asymptoticRates(const SystemParams& p, double lambda)
{
    const auto nu = restEigenvalues(p.kinetics);
    if (!(lambda > nu[1]))
        throw DomainError("lambda = " + std::to_string(lambda) +
                          " outside real-rate window (needs lambda > nu2 = " + std::to_string(nu[1]) + ")");
    const double c = p.c;
    const double r1 = 0.5 * std::sqrt(c * c + 4.0 * (lambda - nu[0]));
    const double r2 = 0.5 * std::sqrt(c * c + 4.0 * (lambda - nu[1]));
    return {-0.5 * c - r1, -0.5 * c - r2, -0.5 * c + r2, -0.5 * c + r1};
}

Frame asymptoticFrame(const SystemParams& p, double lambda)
{
    const auto& k = p.kinetics;
    const auto nu = restEigenvalues(k);
    const auto mu = asymptoticRates(p, lambda);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(mu[i] - mu[j]) < 1e-8) throw DomainError("non-simple rates");

    const double a = k.df(0.0);
    const double nuOf[4] = {nu[0], nu[1], nu[1], nu[0]};
    Frame F;
    F.mu = mu;
    for (int i = 0; i < 4; ++i) {
        // (1, (a-nu)/sigma, mu/sigma, mu (a-nu)/(sigma alpha)) solves A_inf eta = mu eta
        const double q = (a - nuOf[i]) / k.sigma;
        Vec4 e(1.0, q, mu[i] / k.sigma, mu[i] * q / k.alpha);
        e.normalize();
        for (int j = 0; j < 4; ++j) {
            if (std::abs(e[j]) > 1e-3) {
                if (e[j] < 0) e = -e;
                break;
            }
        }
        F.eta[i] = e;
    }
    return scaledFrame(F, 1.0, 1.0);
}

Frame scaledFrame(const Frame& unit, double s2, double s3)
{
    Frame F = unit;
    F.eta[1] *= s2;
    F.eta[2] *= s3;
    double rho = exterior::quadVolume(F.eta[0], F.eta[1], F.eta[2], F.eta[3]);
    if (rho < 0) {
        F.eta[3] = -F.eta[3];
        rho = -rho;
    }
    F.rho = rho;
    Mat4 E;
    E << F.eta[0], F.eta[1], F.eta[2], F.eta[3];
    const Mat4 L = E.inverse();
    for (int i = 0; i < 4; ++i) F.left[i] = L.row(i).transpose();
    return F;
}

Mat6 inducedMatrix(const SystemParams& p, double u, double v, double lambda)
{
    // (a^b)' = (Aa)^b + a^(Ab):  p_ij' = sum_k A_ik p_kj + A_jk p_ik
    const Mat4 A = coefficientMatrix(p, u, v, lambda);
    Mat6 M = Mat6::Zero();
    for (int r = 0; r < 6; ++r) {
        const int i = kI[r], j = kJ[r];
        for (int k = 0; k < 4; ++k) {
            // A_ik p_kj
            if (A(i, k) != 0.0 && k != j) {
                const double s = k < j ? 1.0 : -1.0;
                M(r, pairIndex(std::min(k, j), std::max(k, j))) += s * A(i, k);
            }
            // A_jk p_ik
            if (A(j, k) != 0.0 && k != i) {
                const double s = i < k ? 1.0 : -1.0;
                M(r, pairIndex(std::min(i, k), std::max(i, k))) += s * A(j, k);
            }
        }
    }
    return M;
}

Mat6 inducedMatrix(const SystemParams& p, const WaveProfile& wave, double lambda, double z)
{
    const auto s = wave.at(z);
    return inducedMatrix(p, s.u, s.v, lambda);
}

std::vector<double> defaultDispersionSamples(const SystemParams& p, int n)
{
    const auto& k = p.kinetics;
    const double a = k.df(0.0), b = k.dg(0.0);
    const double kmax =
        10.0 * std::max(1.0, std::sqrt(std::abs(a) + std::abs(b) + k.sigma * k.alpha + p.c * p.c));
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i) ks[i] = -kmax + 2.0 * kmax * i / (n - 1);
    return ks;
}

Clearance essentialSpectrumClearance(const SystemParams& p, const std::vector<double>& ks)
{
    const auto& k = p.kinetics;
    const double a = k.df(0.0), b = k.dg(0.0);
    const double sa = k.sigma * k.alpha;
    Clearance out;
    out.K_estimate = -std::numeric_limits<double>::infinity();
    for (double kk : ks) {
        // quadratic in x: x^2 + (2k^2 - (a+b)) x + k^4 - (a+b)k^2 + ab + sigma alpha
        const double B = 2.0 * kk * kk - (a + b);
        const double C = kk * kk * kk * kk - (a + b) * kk * kk + a * b + sa;
        const std::complex<double> d = std::sqrt(std::complex<double>(B * B - 4.0 * C, 0.0));
        const std::complex<double> x1 = 0.5 * (-B + d), x2 = 0.5 * (-B - d);
        out.K_estimate = std::max({out.K_estimate, x1.real(), x2.real()});
    }
    out.clear = !ks.empty() && out.K_estimate < 0.0;
    return out;
}

double lambdaWindow(const SystemParams& p)
{
    const auto nu = restEigenvalues(p.kinetics);
    if (!(nu[1] < 0.0)) throw DomainError("rest state not stable: nu2 >= 0");
    return -0.5 * nu[1];
}

} // namespace sev::model
