#include "sev/wave.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"
#include "sev/ode.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace sev::wave {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
} // namespace

model::Kinetics fhnKinetics(const FhnParams& p)
{
    if (!(p.a > 0.0 && p.a < 0.5)) throw ParameterError("FHN: a must lie in (0, 1/2), got " + io::num(p.a));
    if (!(p.eps > 0.0)) throw ParameterError("FHN: eps must be positive");
    if (!(p.gamma >= 0.0)) throw ParameterError("FHN: gamma must be non-negative");
    // other equilibria have v = u/gamma and (1-u)(u-a) = 1/gamma; the left side
    // never exceeds (1-a)^2/4
    if (p.gamma * 0.25 * (1 - p.a) * (1 - p.a) >= 1.0)
        throw ParameterError("FHN: gamma too large for a unique rest state (needs gamma < 4/(1-a)^2)");
    const double a = p.a, e = p.eps, gm = p.gamma;
    model::Kinetics k;
    k.f = [a](double u) { return u * (1 - u) * (u - a); };
    k.df = [a](double u) { return -3 * u * u + 2 * (1 + a) * u - a; };
    k.g = [e, gm](double v) { return -e * gm * v; };
    k.dg = [e, gm](double) { return -e * gm; };
    k.sigma = 1.0;
    k.alpha = e;
    return k;
}

model::SystemParams fhnSystem(const FhnParams& p, double c)
{
    return {fhnKinetics(p), c};
}

double NagumoFront::u(double z) const { return 1.0 / (1.0 + std::exp(-z / kSqrt2)); }
double NagumoFront::du(double z) const { return slope(u(z)); }
double NagumoFront::ddu(double z) const
{
    const double s = u(z);
    return 0.5 * kSqrt2 * (1 - 2 * s) * slope(s);
}
double NagumoFront::slope(double u) { return 0.5 * kSqrt2 * u * (1 - u); }

NagumoFront nagumoFront(double a)
{
    if (!(a > 0.0 && a < 0.5)) throw ParameterError("nagumoFront: a must lie in (0, 1/2)");
    return {kSqrt2 * (a - 0.5), a};
}

std::array<double, 3> cubicLevelRoots(double a, double v)
{
    // u^3 - (1+a)u^2 + a u + v = 0
    const double b = -(1 + a), c = a, d = v;
    const double p = c - b * b / 3.0;
    const double q = 2 * b * b * b / 27.0 - b * c / 3.0 + d;
    if (!(p < 0.0) || 4 * p * p * p + 27 * q * q > 0.0)
        throw DomainError("level v = " + io::num(v) + " has a single real root");
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double th = std::acos(arg) / 3.0;
    std::array<double, 3> r;
    for (int k = 0; k < 3; ++k) r[k] = m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0) - b / 3.0;
    std::sort(r.begin(), r.end());
    return r;
}

double backSpeed(double a, double v)
{
    const auto r = cubicLevelRoots(a, v);
    return kSqrt2 * (0.5 * (r[0] + r[2]) - r[1]);
}

double localMax(double a)
{
    const double um = ((1 + a) + std::sqrt((1 + a) * (1 + a) - 3 * a)) / 3.0;
    return um * (1 - um) * (um - a);
}

namespace {

double uRight(double a, double v) { return cubicLevelRoots(a, v)[2]; }
double uLeft(double a, double v) { return cubicLevelRoots(a, v)[0]; }

SlowPiece slowPiece(const ode::ScalarResult& r, double a, bool right)
{
    SlowPiece s;
    s.z = r.z;
    s.v = r.y;
    for (double v : r.y) s.u.push_back(right ? uRight(a, v) : uLeft(a, std::max(v, 0.0)));
    return s;
}

} // namespace

SingularOrbit fhnSingularOrbit(const FhnParams& p)
{
    const auto k = fhnKinetics(p);
    if (!model::turingCheck(k)) throw ParameterError("FHN: rest state fails the Turing conditions");
    SingularOrbit o;
    o.params = p;
    o.front = nagumoFront(p.a);
    const double c = o.front.speed;
    o.landing = Vec4(1.0, 0.0, 0.0, -1.0 / c);

    const double vmax = localMax(p.a);
    double lo = 0.0, hi = vmax * (1 - 1e-12);
    auto gap = [&](double v) { return backSpeed(p.a, v) - c; };
    if (!(gap(lo) > 0.0 && gap(hi) < 0.0))
        throw DomainError("back jump not found: no equal-speed level in (0, local max of f)");
    while (hi - lo > 1e-12) {
        const double m = 0.5 * (lo + hi);
        (gap(m) > 0.0 ? lo : hi) = m;
    }
    o.vStar = 0.5 * (lo + hi);
    o.backRoots = cubicLevelRoots(p.a, o.vStar);
    o.backSpeed = backSpeed(p.a, o.vStar);

    const double e = p.eps, gm = p.gamma, a = p.a, vs = o.vStar;
    auto right = ode::integrateScalar([&](double, double v) { return e * (gm * v - uRight(a, std::min(v, vs))) / c; },
                                      0.0, 1e3 / e, 0.0, 0.1 / e * 0.01, 1e-12, 1e-15,
                                      [&](double v) { return v - vs; });
    if (!right.hitEvent) throw DomainError("slow flow on the right branch never reaches v*");
    o.T1 = right.zEvent;
    o.slowRight = slowPiece(right, a, true);

    auto left = ode::integrateScalar([&](double, double v) { return e * (gm * v - uLeft(a, std::max(v, 0.0))) / c; },
                                     0.0, 40.0 / e, vs, 0.1 / e * 0.01, 1e-12, 1e-15);
    o.slowLeft = slowPiece(left, a, false);

    o.mismatch = std::max({std::abs(o.slowRight.u.front() - 1.0), std::abs(o.slowRight.v.back() - vs),
                           std::abs(o.backRoots[0] - o.slowLeft.u.front()),
                           std::abs(o.slowLeft.v.front() - vs)});
    return o;
}

TailData modelTails(const model::SystemParams& params)
{
    const auto mu = model::asymptoticRates(params, 0.0);
    return {mu[1], mu[2]};
}

// ---------------------------------------------------------------------------
// Hermite-Simpson collocation for
//   u' = sigma w, v' = alpha (1+p) y, w' = -c w - f/sigma + v, y' = -c y - u - g/alpha
// p is an unfolding parameter: free while the back is pinned, zero otherwise.

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

struct Bvp {
    const model::Kinetics& k;
    std::vector<double> z;
    int i0 = 0;  // phase node (front, u'' = 0)
    int ib = -1; // pin node (back, u'' = 0); -1 means p = 0

    int n() const { return int(z.size()); }
    int size() const { return 4 * n() + 2; }

    Vec4 F(const Vec4& Y, double c, double p) const
    {
        return {k.sigma * Y[2], k.alpha * (1 + p) * Y[3], -c * Y[2] - k.f(Y[0]) / k.sigma + Y[1],
                -c * Y[3] - Y[0] - k.g(Y[1]) / k.alpha};
    }
    Mat4 DF(const Vec4& Y, double c, double p) const
    {
        Mat4 J = Mat4::Zero();
        J(0, 2) = k.sigma;
        J(1, 3) = k.alpha * (1 + p);
        J(2, 0) = -k.df(Y[0]) / k.sigma;
        J(2, 1) = 1;
        J(2, 2) = -c;
        J(3, 0) = -1;
        J(3, 1) = -k.dg(Y[1]) / k.alpha;
        J(3, 3) = -c;
        return J;
    }
    static Vec4 Fc(const Vec4& Y) { return {0, 0, -Y[2], -Y[3]}; }
    Vec4 Fp(const Vec4& Y) const { return {0, k.alpha * Y[3], 0, 0}; }

    std::array<Vec4, 4> left(double c) const
    {
        return model::asymptoticFrame({k, c}, 0.0).left;
    }

    Vec4 node(const Vec& x, int i) const { return x.segment<4>(4 * i); }

    Vec residual(const Vec& x) const
    {
        const int N = n();
        const double c = x[4 * N], p = x[4 * N + 1];
        Vec R(size());
        Vec4 Ya = node(x, 0), Fa = F(Ya, c, p);
        for (int i = 0; i + 1 < N; ++i) {
            const double h = z[i + 1] - z[i];
            const Vec4 Yb = node(x, i + 1), Fb = F(Yb, c, p);
            const Vec4 Ym = 0.5 * (Ya + Yb) + h / 8 * (Fa - Fb);
            R.segment<4>(4 * i) = Yb - Ya - h / 6 * (Fa + 4 * F(Ym, c, p) + Fb);
            Ya = Yb;
            Fa = Fb;
        }
        const auto L = left(c);
        const int m = 4 * (N - 1);
        R[m] = L[0].dot(node(x, 0));
        R[m + 1] = L[1].dot(node(x, 0));
        R[m + 2] = L[2].dot(node(x, N - 1));
        R[m + 3] = L[3].dot(node(x, N - 1));
        R[m + 4] = F(node(x, i0), c, p)[2];
        R[m + 5] = ib >= 0 ? F(node(x, ib), c, p)[2] : p;
        return R;
    }

    SpMat jacobian(const Vec& x) const
    {
        const int N = n(), M = size();
        const int ic = 4 * N, ip = 4 * N + 1;
        const double c = x[ic], p = x[ip];
        std::vector<Eigen::Triplet<double>> T;
        T.reserve(std::size_t(N) * 44 + 64);
        const Mat4 I = Mat4::Identity();
        for (int i = 0; i + 1 < N; ++i) {
            const double h = z[i + 1] - z[i];
            const Vec4 Ya = node(x, i), Yb = node(x, i + 1);
            const Vec4 Fa = F(Ya, c, p), Fb = F(Yb, c, p);
            const Vec4 Ym = 0.5 * (Ya + Yb) + h / 8 * (Fa - Fb);
            const Mat4 Ja = DF(Ya, c, p), Jb = DF(Yb, c, p), Jm = DF(Ym, c, p);
            const Mat4 Da = -I - h / 6 * (Ja + 4 * Jm * (0.5 * I + h / 8 * Ja));
            const Mat4 Db = I - h / 6 * (Jb + 4 * Jm * (0.5 * I - h / 8 * Jb));
            for (int r = 0; r < 4; ++r)
                for (int s = 0; s < 4; ++s) {
                    if (Da(r, s) != 0.0) T.emplace_back(4 * i + r, 4 * i + s, Da(r, s));
                    if (Db(r, s) != 0.0) T.emplace_back(4 * i + r, 4 * i + 4 + s, Db(r, s));
                }
            const Vec4 Fca = Fc(Ya), Fcb = Fc(Yb), Fcm = Fc(Ym);
            const Vec4 dc = -h / 6 * (Fca + 4 * (Fcm + Jm * (h / 8 * (Fca - Fcb))) + Fcb);
            const Vec4 Fpa = Fp(Ya), Fpb = Fp(Yb), Fpm = Fp(Ym);
            const Vec4 dp = -h / 6 * (Fpa + 4 * (Fpm + Jm * (h / 8 * (Fpa - Fpb))) + Fpb);
            for (int r = 0; r < 4; ++r) {
                T.emplace_back(4 * i + r, ic, dc[r]);
                T.emplace_back(4 * i + r, ip, dp[r]);
            }
        }
        const int m = 4 * (N - 1);
        const auto L = left(c);
        const double dcs = 1e-6 * std::max(1.0, std::abs(c));
        const auto Lp = left(c + dcs), Lm = left(c - dcs);
        const int bcNode[4] = {0, 0, N - 1, N - 1};
        for (int r = 0; r < 4; ++r) {
            const Vec4 Y = node(x, bcNode[r]);
            for (int s = 0; s < 4; ++s) T.emplace_back(m + r, 4 * bcNode[r] + s, L[r][s]);
            T.emplace_back(m + r, ic, (Lp[r] - Lm[r]).dot(Y) / (2 * dcs));
        }
        auto phaseRow = [&](int row, int nodeIdx) {
            const Vec4 Y = node(x, nodeIdx);
            const Mat4 J = DF(Y, c, p);
            for (int s = 0; s < 4; ++s)
                if (J(2, s) != 0.0) T.emplace_back(row, 4 * nodeIdx + s, J(2, s));
            T.emplace_back(row, ic, -Y[2]);
        };
        phaseRow(m + 4, i0);
        if (ib >= 0) {
            phaseRow(m + 5, ib);
            T.emplace_back(m + 5, ip, 0.0);
        } else {
            T.emplace_back(m + 5, ip, 1.0);
        }
        SpMat J(M, M);
        J.setFromTriplets(T.begin(), T.end());
        J.makeCompressed();
        return J;
    }
};

struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

// Affine-invariant damped Newton (natural monotonicity test on the
// simplified correction).
NewtonOutcome newton(const Bvp& bvp, Vec& x, int maxIter, bool verbose)
{
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;
    double t = 0.5;
    NewtonOutcome out;
    for (int it = 0; it < maxIter; ++it) {
        const Vec R = bvp.residual(x);
        out.residual = R.cwiseAbs().maxCoeff();
        const SpMat J = bvp.jacobian(x);
        if (!analyzed) {
            lu.analyzePattern(J);
            analyzed = true;
        }
        lu.factorize(J);
        if (lu.info() != Eigen::Success) throw SetupError("collocation Jacobian is singular (boundary projection rank-deficient?)");
        const Vec dx = lu.solve(-R);
        const double ndx = dx.norm();
        if (verbose)
            std::fprintf(stderr, "  newton %2d  |R| %.3e  c %.12f  p %.3e  |dx| %.3e  t %.3g\n", it, out.residual,
                         x[x.size() - 2], x[x.size() - 1], ndx, t);
        if (!std::isfinite(ndx)) throw NumericalError("Newton correction not finite");
        if (out.residual < 1e-13 || ndx < 1e-11) {
            out.converged = true;
            return out;
        }
        t = std::min(1.0, 2 * t);
        Vec xn;
        for (;;) {
            xn = x + t * dx;
            const Vec db = lu.solve(-bvp.residual(xn));
            if (db.norm() <= (1 - t / 4) * ndx || t < 1e-5) break;
            t *= 0.5;
        }
        x = xn;
        ++out.iterations;
        if (t == 1.0 && ndx < 1e-9) {
            out.residual = bvp.residual(x).cwiseAbs().maxCoeff();
            out.converged = true;
            return out;
        }
    }
    out.residual = bvp.residual(x).cwiseAbs().maxCoeff();
    out.converged = out.residual < 1e-12;
    return out;
}

int nearestNode(const std::vector<double>& z, double zq)
{
    auto it = std::lower_bound(z.begin(), z.end(), zq);
    int i = int(it - z.begin());
    if (i >= int(z.size())) return int(z.size()) - 1;
    if (i > 0 && std::abs(z[i - 1] - zq) <= std::abs(z[i] - zq)) --i;
    return i;
}

WaveProfile toProfile(const model::SystemParams& sp, const std::vector<double>& z, const Vec& x)
{
    const auto& k = sp.kinetics;
    const int N = int(z.size());
    const double c = x[4 * N], p = x[4 * N + 1];
    WaveProfile w;
    w.grid = z;
    w.L = std::max(-z.front(), z.back());
    w.sigma = k.sigma;
    w.alpha = k.alpha;
    w.c = c;
    for (int i = 0; i < N; ++i) {
        const double u = x[4 * i], v = x[4 * i + 1];
        const double du = k.sigma * x[4 * i + 2], dv = k.alpha * (1 + p) * x[4 * i + 3];
        w.u.push_back(u);
        w.v.push_back(v);
        w.du.push_back(du);
        w.dv.push_back(dv);
        w.ddu.push_back(-c * du - k.f(u) + k.sigma * v);
        w.ddv.push_back(-c * dv - k.g(v) - k.alpha * u);
    }
    w.tails = modelTails({k, c});
    return w;
}

double maxCollocation(const Bvp& bvp, const Vec& x)
{
    const Vec R = bvp.residual(x);
    return R.head(4 * (bvp.n() - 1)).cwiseAbs().maxCoeff();
}

} // namespace

SolveResult solveHomoclinic(const model::SystemParams& params, const WaveProfile& guess, const SolveOptions& opts)
{
    model::validate(params);
    guess.checkShape();
    const int N = int(guess.size());
    Bvp bvp{params.kinetics, guess.grid};
    bvp.i0 = nearestNode(guess.grid, 0.0);
    if (guess.grid[bvp.i0] != 0.0) throw SetupError("guess grid must contain z = 0 for the phase condition");
    Vec x(bvp.size());
    for (int i = 0; i < N; ++i)
        x.segment<4>(4 * i) = Vec4(guess.u[i], guess.v[i], guess.du[i] / params.kinetics.sigma,
                                   guess.dv[i] / params.kinetics.alpha);
    x[4 * N] = params.c;
    x[4 * N + 1] = 0.0;
    const auto nr = newton(bvp, x, opts.maxIter, opts.verbose);
    const double res = maxCollocation(bvp, x);
    if (!nr.converged || !(res < opts.residualTol))
        throw SolverError("homoclinic Newton did not converge (residual " + io::num(res) + ")", res);
    SolveResult out;
    out.c = x[4 * N];
    out.profile = toProfile({params.kinetics, out.c}, bvp.z, x);
    out.residual = res;
    out.iterations = nr.iterations;
    return out;
}

namespace {

std::vector<double> buildMesh(double zb, double L, const SolveOptions& o)
{
    const double h = o.coreStep, lo = -40.0, hi = zb + 60.0;
    if (!(L > hi + 10.0)) throw SetupError("truncation L too small for the pulse core");
    std::vector<double> core;
    for (long k = long(std::ceil(lo / h)); k * h <= hi; ++k) core.push_back(double(k) * h);
    std::vector<double> z;
    // left tail, geometric growth capped at tailStepLeft
    {
        std::vector<double> t;
        double s = core.front(), step = h;
        while (true) {
            step = std::min(step * 1.05, o.tailStepLeft);
            s -= step;
            if (s <= -L + 0.5 * step) break;
            t.push_back(s);
        }
        t.push_back(-L);
        z.assign(t.rbegin(), t.rend());
    }
    z.insert(z.end(), core.begin(), core.end());
    {
        double s = core.back(), step = h;
        while (true) {
            step = std::min(step * 1.05, o.tailStepRight);
            s += step;
            if (s >= L - 0.5 * step) break;
            z.push_back(s);
        }
        z.push_back(L);
    }
    return z;
}

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s / kSqrt2)); }

// Smooth pulse guess: right branch between the front (z=0) and back (z=zb),
// left branch elsewhere, blended with Nagumo profiles; v from the slow
// equation along the blended u, y from the linear y-equation integrated from +L.
Vec smoothGuess(const FhnParams& p, const SingularOrbit& o, const std::vector<double>& z, double zb)
{
    const auto k = fhnKinetics(p);
    const double c = o.front.speed, vs = o.vStar;
    const int N = int(z.size());
    auto ublend = [&](double zz, double v) {
        const double up = uRight(p.a, std::clamp(v, 0.0, vs));
        const double ul = v > 0 ? uLeft(p.a, v) : 0.0;
        return ul + (up - ul) * logistic(zz) * logistic(zb - zz);
    };
    std::vector<double> u(N), v(N), du(N), y(N);
    v[0] = 0.0;
    for (int i = 0; i + 1 < N; ++i) {
        const double h = z[i + 1] - z[i];
        auto r = ode::integrateScalar([&](double zz, double vv) { return p.eps * (p.gamma * vv - ublend(zz, vv)) / c; },
                                      z[i], z[i + 1], v[i], std::min(0.1, h), 1e-10, 1e-13);
        v[i + 1] = r.y.back();
    }
    for (int i = 0; i < N; ++i) u[i] = ublend(z[i], v[i]);
    for (int i = 0; i < N; ++i) {
        const int a = std::clamp(i - 1, 0, N - 3);
        const std::vector<double> xs(z.begin() + a, z.begin() + a + 3);
        const auto wts = fdWeights(z[i], xs, 1);
        du[i] = wts[0] * u[a] + wts[1] * u[a + 1] + wts[2] * u[a + 2];
    }
    y[N - 1] = 0.0;
    for (int i = N - 1; i > 0; --i) {
        const double z0 = z[i - 1], z1 = z[i];
        auto lin = [&](const std::vector<double>& q, double zz) {
            return q[i - 1] + (q[i] - q[i - 1]) * (zz - z0) / (z1 - z0);
        };
        auto r = ode::integrateScalar(
            [&](double zz, double yy) { return -c * yy - lin(u, zz) - k.g(lin(v, zz)) / k.alpha; }, z1, z0, y[i],
            std::min(0.5, z1 - z0), 1e-10, 1e-13);
        y[i - 1] = r.y.back();
    }
    Vec x(4 * N + 2);
    for (int i = 0; i < N; ++i) x.segment<4>(4 * i) = Vec4(u[i], v[i], du[i] / k.sigma, y[i]);
    x[4 * N] = c;
    x[4 * N + 1] = 0.0;
    return x;
}

// Move the back from zc to zn by stretching the plateau, keeping the front fixed.
Vec shiftGuess(const std::vector<double>& z, const Vec& x, double zc, double zn)
{
    const int N = int(z.size());
    const double a0 = 5.0, b0 = zc - 5.0, dz = zc - zn;
    Vec out = x;
    for (int i = 0; i < N; ++i) {
        const double s = z[i] < a0 ? z[i] : z[i] > b0 - dz ? z[i] + dz : a0 + (z[i] - a0) * (b0 - a0) / (b0 - dz - a0);
        const double sc = std::clamp(s, z.front(), z.back());
        int j = int(std::upper_bound(z.begin(), z.end(), sc) - z.begin());
        j = std::clamp(j, 1, N - 1);
        const double t = (sc - z[j - 1]) / (z[j] - z[j - 1]);
        out.segment<4>(4 * i) = (1 - t) * x.segment<4>(4 * (j - 1)) + t * x.segment<4>(4 * j);
    }
    return out;
}

} // namespace

SolveResult solveHomoclinic(const FhnParams& p, const SingularOrbit& orbit, const SolveOptions& opts)
{
    const auto k = fhnKinetics(p);
    const double cs = orbit.front.speed;
    const double zb0 = orbit.T1;
    double L = opts.L;
    if (L <= 0.0) {
        const double mu2 = model::asymptoticRates({k, cs}, 0.0)[1];
        L = std::ceil(zb0 + std::log(1e8) / std::abs(mu2));
    }
    const auto z = buildMesh(zb0, L, opts);
    Bvp bvp{k, z};
    bvp.i0 = nearestNode(z, 0.0);
    const int N = int(z.size());

    struct Pinned {
        double zb, p;
        Vec x;
    };
    std::vector<Pinned> hist;
    bvp.ib = nearestNode(z, zb0);
    Vec x = smoothGuess(p, orbit, z, zb0);
    auto r = newton(bvp, x, opts.maxIter, opts.verbose);
    if (!r.converged) throw SolverError("pinned homoclinic solve failed", r.residual);
    hist.push_back({z[bvp.ib], x[4 * N + 1], x});
    if (opts.verbose) std::fprintf(stderr, "pinned zb %.4f  p %.6e  c %.12f\n", hist.back().zb, hist.back().p, x[4 * N]);

    for (int it = 0; it < 16 && std::abs(hist.back().p) > 1e-10; ++it) {
        double zn;
        const auto& h2 = hist.back();
        if (hist.size() >= 2) {
            const auto& h1 = hist[hist.size() - 2];
            zn = h2.p != h1.p ? h2.zb - h2.p * (h2.zb - h1.zb) / (h2.p - h1.p) : h2.zb - 1.0;
            zn = std::clamp(zn, h2.zb - 5.0, h2.zb + 5.0);
        } else {
            zn = h2.zb - 2.0;
        }
        bvp.ib = nearestNode(z, zn);
        if (z[bvp.ib] == h2.zb) break;
        Vec xs = shiftGuess(z, h2.x, h2.zb, z[bvp.ib]);
        r = newton(bvp, xs, opts.maxIter, opts.verbose);
        if (!r.converged) throw SolverError("pinned homoclinic solve failed during back placement", r.residual);
        hist.push_back({z[bvp.ib], xs[4 * N + 1], xs});
        if (opts.verbose)
            std::fprintf(stderr, "pinned zb %.4f  p %.6e  c %.12f\n", hist.back().zb, hist.back().p, xs[4 * N]);
    }

    bvp.ib = -1;
    x = hist.back().x;
    r = newton(bvp, x, opts.maxIter, opts.verbose);
    const double res = maxCollocation(bvp, x);
    if (!r.converged || !(res < opts.residualTol))
        throw SolverError("homoclinic Newton did not converge (residual " + io::num(res) + ")", res);
    SolveResult out;
    out.c = x[4 * N];
    out.profile = toProfile({k, out.c}, z, x);
    out.residual = res;
    out.iterations = r.iterations;
    return out;
}

double collocationResidual(const model::SystemParams& params, const WaveProfile& w)
{
    Bvp bvp{params.kinetics, w.grid};
    bvp.i0 = nearestNode(w.grid, 0.0);
    const int N = int(w.size());
    Vec x(bvp.size());
    for (int i = 0; i < N; ++i)
        x.segment<4>(4 * i) = Vec4(w.u[i], w.v[i], w.du[i] / w.sigma, w.dv[i] / w.alpha);
    x[4 * N] = params.c;
    x[4 * N + 1] = 0.0;
    return maxCollocation(bvp, x);
}

} // namespace sev::wave
