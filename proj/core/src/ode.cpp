#include "sev/ode.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>

namespace sev::ode {

namespace odeint = boost::numeric::odeint;

template <int N>
std::size_t Trajectory<N>::bracket(double zq) const
{
    const std::size_t n = z.size();
    if (n < 2) return 0;
    const bool fwd = z.back() > z.front();
    std::size_t k;
    if (fwd) {
        auto it = std::upper_bound(z.begin(), z.end(), zq);
        k = std::size_t(it - z.begin());
        k = k == 0 ? 0 : k - 1;
    } else {
        auto it = std::upper_bound(z.begin(), z.end(), zq, [](double a, double b) { return a > b; });
        k = std::size_t(it - z.begin());
        k = k == 0 ? 0 : k - 1;
    }
    return std::min(k, n - 2);
}

template <int N>
typename Trajectory<N>::Vec Trajectory<N>::eval(double zq, double* ls) const
{
    if (z.empty()) throw DomainError("empty trajectory");
    if (zq < zmin() - 1e-12 || zq > zmax() + 1e-12)
        throw DomainError("trajectory evaluated outside its range at z = " + io::num(zq));
    if (z.size() == 1) {
        if (ls) *ls = logScale[0];
        return y[0];
    }
    const std::size_t k = bracket(zq);
    const double h = z[k + 1] - z[k];
    const double t = (zq - z[k]) / h;
    const double r = std::exp(logScale[k + 1] - logScale[k]);
    const Vec y1 = y[k + 1] * r, d1 = dy[k + 1] * r;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (ls) *ls = logScale[k];
    return h00 * y[k] + h10 * h * dy[k] + h01 * y1 + h11 * h * d1;
}

template struct Trajectory<4>;
template struct Trajectory<6>;

namespace {

template <int N>
Trajectory<N> run(const std::function<void(double, const Eigen::Matrix<double, N, 1>&, Eigen::Matrix<double, N, 1>&)>& f,
                  double z0, double z1, const Eigen::Matrix<double, N, 1>& y0, const Options& opts)
{
    using Vec = Eigen::Matrix<double, N, 1>;
    using State = std::array<double, N>;
    auto toState = [](const Vec& v) {
        State s;
        for (int i = 0; i < N; ++i) s[i] = v[i];
        return s;
    };
    auto toVec = [](const State& s) {
        Vec v;
        for (int i = 0; i < N; ++i) v[i] = s[i];
        return v;
    };
    // odeint's bounded dense stepper only runs forward: integrate in s = dir*z
    const double dir = z1 >= z0 ? 1.0 : -1.0;
    auto sys = [&](const State& x, State& dx, double s) {
        Vec xv = toVec(x), dv;
        f(dir * s, xv, dv);
        for (int i = 0; i < N; ++i) dx[i] = dir * dv[i];
    };

    Trajectory<N> tr;
    double ls = 0.0;
    Vec y = y0;
    if (opts.renormalize) {
        const double n = y.norm();
        if (n == 0.0) throw NumericalError("zero initial value");
        y /= n;
        ls = std::log(n);
    }
    auto record = [&](double t, const Vec& v) {
        Vec d;
        f(t, v, d);
        tr.z.push_back(t);
        tr.y.push_back(v);
        tr.dy.push_back(d);
        tr.logScale.push_back(ls);
    };
    record(z0, y);
    if (z0 == z1) return tr;

    auto stepper = odeint::make_dense_output(opts.atol, opts.rtol, opts.maxStep,
                                             odeint::runge_kutta_dopri5<State>());
    const double s1 = dir * z1;
    stepper.initialize(toState(y), dir * z0, std::min(0.01, opts.maxStep));
    const double y0norm = y.norm();
    std::size_t guard = 0;
    while (stepper.current_time() < s1) {
        if (++guard > 50000000) throw NumericalError("integrator step limit exceeded");
        auto span = stepper.do_step(sys);
        double tNew = dir * span.second;
        Vec yNew;
        bool done = false;
        if (span.second >= s1) {
            State st;
            stepper.calc_state(s1, st);
            yNew = toVec(st);
            tNew = z1;
            done = true;
        } else {
            yNew = toVec(stepper.current_state());
        }
        if (!yNew.allFinite())
            throw NumericalError("integrator produced non-finite values near z = " + io::num(tNew));
        if (opts.renormalize) {
            const double n = yNew.norm();
            yNew /= n;
            ls += std::log(n);
            record(tNew, yNew);
            if (!done) stepper.initialize(toState(yNew), span.second, stepper.current_time_step());
        } else {
            if (yNew.norm() > opts.growthLimit * std::max(1.0, y0norm))
                throw NumericalError("mode takeover: weighted solution grew beyond " + io::num(opts.growthLimit) +
                                     " near z = " + io::num(tNew) + " (try a larger L)");
            record(tNew, yNew);
        }
        if (done) break;
    }
    return tr;
}

} // namespace

Trajectory<4> integrate(const Rhs4& f, double z0, double z1, const Eigen::Matrix<double, 4, 1>& y0, const Options& opts)
{
    return run<4>(f, z0, z1, y0, opts);
}

Trajectory<6> integrate(const Rhs6& f, double z0, double z1, const Eigen::Matrix<double, 6, 1>& y0, const Options& opts)
{
    return run<6>(f, z0, z1, y0, opts);
}

ScalarResult integrateScalar(const std::function<double(double, double)>& f, double z0, double z1, double y0,
                             double maxStep, double rtol, double atol, const std::function<double(double)>& event)
{
    using State = std::array<double, 1>;
    const double dir = z1 >= z0 ? 1.0 : -1.0;
    auto sys = [&](const State& x, State& dx, double s) { dx[0] = dir * f(dir * s, x[0]); };
    ScalarResult out;
    out.z.push_back(z0);
    out.y.push_back(y0);
    if (z0 == z1) return out;
    const double s1 = dir * z1;
    auto stepper = odeint::make_dense_output(atol, rtol, maxStep, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(State{y0}, dir * z0, std::min(1e-3, maxStep));
    double evPrev = event ? event(y0) : 0.0;
    while (stepper.current_time() < s1) {
        auto span = stepper.do_step(sys);
        double sNew = span.second;
        State st = stepper.current_state();
        if (sNew >= s1) {
            stepper.calc_state(s1, st);
            sNew = s1;
        }
        if (event) {
            const double ev = event(st[0]);
            if ((evPrev < 0) != (ev < 0)) {
                double a = span.first, b = sNew;
                for (int it = 0; it < 200 && std::abs(b - a) > 1e-13 * (1 + std::abs(b)); ++it) {
                    const double m = 0.5 * (a + b);
                    State sm;
                    stepper.calc_state(m, sm);
                    if ((event(sm[0]) < 0) == (evPrev < 0)) a = m; else b = m;
                }
                State se;
                stepper.calc_state(b, se);
                out.z.push_back(dir * b);
                out.y.push_back(se[0]);
                out.hitEvent = true;
                out.zEvent = dir * b;
                return out;
            }
            evPrev = ev;
        }
        out.z.push_back(dir * sNew);
        out.y.push_back(st[0]);
        if (sNew == s1) break;
    }
    return out;
}

} // namespace sev::ode
