#include "sev/pipeline.hpp"
#include "sev/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sev::pipeline {

using json = nlohmann::ordered_json;

std::vector<double> defaultGrid(const model::SystemParams& params)
{
    return evans::uniformGrid(-0.5 * model::lambdaWindow(params), 2.0, 20);
}

namespace {

class Clock {
public:
    explicit Clock(std::map<std::string, double>& out) : out_(out) {}
    void lap(const std::string& name)
    {
        const auto t = std::chrono::steady_clock::now();
        out_[name] = std::chrono::duration<double>(t - last_).count();
        last_ = t;
    }

private:
    std::map<std::string, double>& out_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

int signOf(double x) { return (x > 0) - (x < 0); }

} // namespace

Analysis analyze(const model::SystemParams& params, const WaveProfile& wave, const Options& opts)
{
    Analysis a;
    a.params = params;
    a.L = wave.L;
    Clock clock(a.seconds);

    stage("setup", [&] {
        model::validate(params);
        a.clearance = model::essentialSpectrumClearance(params, model::defaultDispersionSamples(params));
    });

    const auto grid = opts.lambdaGrid.empty() ? defaultGrid(params) : opts.lambdaGrid;
    const auto al = stage("alignment", [&] { return bundle::alignTranslation(params, wave); });
    if (opts.runScan) {
        stage("evans scan", [&] {
            a.scan = evans::evansScan(params, wave, grid, al, opts.evans);
            a.atZero = evans::evansAt(params, wave, 0.0, al, opts.evans);
        });
        double m = 0.0;
        for (const auto& s : a.scan.samples) m = std::max(m, std::abs(s.D_wedge));
        a.zeroRatio = m > 0 ? std::abs(a.atZero.D_wedge) / m : INFINITY;
        clock.lap("evans_scan");
    }

    stage("strong solutions", [&] {
        a.zero = maslov::zeroData(params, wave, opts.solutions);
        a.lt = bundle::lazutkinTreschev(params, a.zero.u1, a.zero.u4);
        a.ltFloor = maslov::ltNoiseFloor(a.zero);
    });
    if (opts.flipLt) a.lt.value = -a.lt.value;
    clock.lap("strong_solutions");

    auto indexAt = [&](double tau, maslov::BetaTrace* trace, maslov::ReferencePlane* refOut) {
        const auto ref = maslov::referencePlane(a.zero, tau, opts.angleTol);
        const auto cps = maslov::findConjugatePoints(ref, a.zero, opts.scan, trace);
        const auto ep = maslov::endpointCrossing(ref, a.zero, opts.scan);
        if (refOut) *refOut = ref;
        return maslov::maslovIndex(cps, ep, tau);
    };
    stage("maslov", [&] {
        const double tau = opts.tau > 0 ? opts.tau : maslov::defaultTau(wave);
        a.maslov = indexAt(tau, &a.beta, &a.ref);
        a.betaMinusL = maslov::detectionBeta(a.ref, a.zero, a.beta.z.front());
        a.parity = maslov::parityCheck(a.maslov, a.lt.value, a.ref, a.zero, a.ltFloor);
        if (opts.perturbTau) {
            const double dt = 0.1 * (wave.L - tau);
            for (double t : {tau - dt, tau + dt}) {
                TauCheck tc;
                tc.tau = t;
                try {
                    tc.index = indexAt(t, nullptr, nullptr).index;
                    tc.ok = true;
                } catch (const Error& e) {
                    tc.error = e.what();
                }
                a.tauChecks.push_back(tc);
            }
        }
    });
    clock.lap("maslov");

    stage("derivative", [&] {
        double h = opts.fdStep;
        if (!(h > 0)) h = 1e-2 * model::lambdaWindow(params);
        a.derivative = evans::evansDerivativeAtZero(params, wave, al, a.lt, h, opts.evans);
    });
    clock.lap("derivative");

    a.routesAgree = a.parity.consistent && signOf(a.derivative.dPrime0) == signOf(a.derivative.fdCheck);
    a.consistent = a.routesAgree;
    return a;
}

std::string analysisJson(const Analysis& a)
{
    json j;
    const auto& w = *a.zero.wave;
    double mu = 0, mv = 0;
    for (std::size_t i = 0; i < w.size(); ++i) mu = std::max(mu, std::abs(w.u[i])), mv = std::max(mv, std::abs(w.v[i]));
    j["wave"] = {{"c", a.params.c}, {"L", a.L}, {"nodes", w.size()}, {"max_abs_u", mu}, {"max_abs_v", mv}};
    j["clearance"] = {{"clear", a.clearance.clear}, {"K_estimate", a.clearance.K_estimate}};

    json ev;
    if (!a.scan.samples.empty()) {
        double agree = 0.0;
        for (const auto& s : a.scan.samples) agree = std::max(agree, s.agreement);
        ev["lambda_min"] = a.scan.samples.front().lambda;
        ev["lambda_max"] = a.scan.samples.back().lambda;
        ev["points"] = a.scan.samples.size();
        ev["sign_changes"] = a.scan.signChanges.size();
        ev["max_agreement"] = agree;
        ev["D_at_lambda_max"] = a.scan.samples.back().D_wedge;
        ev["D_at_zero"] = a.atZero.D_wedge;
        ev["zero_ratio"] = a.zeroRatio;
        ev["warnings"] = a.scan.warnings;
    }
    j["evans"] = ev;

    j["lt"] = {{"value", a.lt.value}, {"drift", a.lt.drift}, {"noise_floor", a.ltFloor}};

    json m = json::parse(maslov::crossingJson(a.maslov, a.parity));
    m["reference"] = {{"min_angle", a.ref.minAngle},
                      {"lagrangian_residual", a.ref.lagrangian},
                      {"beta_minus_L", a.betaMinusL},
                      {"rho", a.zero.frame.rho}};
    json tc = json::array();
    for (const auto& t : a.tauChecks) {
        json x = {{"tau", t.tau}, {"ok", t.ok}};
        if (t.ok)
            x["index"] = t.index;
        else
            x["error"] = t.error;
        tc.push_back(x);
    }
    m["tau_checks"] = tc;
    j["maslov"] = m;

    j["parity"] = {{"consistent", a.parity.consistent},
                   {"lt_sign", a.parity.ltSign},
                   {"predicted", a.parity.predicted},
                   {"beta_slope_at_tau", a.parity.betaSlope},
                   {"beta_slope_predicted_sign", a.parity.slopePredicted},
                   {"beta_slope_consistent", a.parity.slopeConsistent},
                   {"detail", a.parity.detail}};
    const auto& d = a.derivative;
    j["derivative"] = {{"lt", d.lt},         {"melnikov", d.integral}, {"dPrime0", d.dPrime0},
                       {"fd_check", d.fdCheck}, {"fd_step", d.h},       {"relative_gap", d.relGap}};
    j["consistent"] = a.consistent;
    return j.dump(2);
}

} // namespace sev::pipeline
