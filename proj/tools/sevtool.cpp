// sevtool: analyze | evans-scan | beta-trace | wave
//
// Precedence: command-line flags > config file > built-in defaults.
// Exit codes: 0 ok, 1 operational error, 2 parity inconsistency (analyze).

#include "sev/error.hpp"
#include "sev/fhn.hpp"
#include "sev/io.hpp"
#include "sev/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#ifndef SEV_VERSION
#define SEV_VERSION "0.0.0"
#endif

using namespace sev;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config, out, preset;
    std::optional<double> lambdaMin, lambdaMax, tau, eps, a, gamma;
    std::optional<int> lambdaSteps;
    bool flipLt = false;
};

struct RunConfig {
    // system
    bool fhnPreset = false;
    wave::FhnParams fhn;
    std::vector<double> fc, gc;
    double sigma = 1.0, alpha = 1.0;
    std::optional<double> c;
    // wave
    std::string source = "solve";
    std::string path;
    wave::SolveOptions solver;
    // analysis
    std::optional<double> lambdaMin, lambdaMax;
    int steps = 20;
    double tau = 0.0;
    double rtol = 1e-10, atol = 1e-12, angleTol = 1e-3, regularityFloor = 1e-6;
    int threads = 0;
    // output
    std::string outDir = "out";
    json echo;
};

double num(const json& j, const char* key, double dflt)
{
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw SchemaError(std::string("config field '") + key + "' must be a number");
    return j[key].get<double>();
}

std::vector<double> coeffs(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_array()) throw SchemaError(std::string("kinetics needs an array '") + key + "'");
    std::vector<double> out;
    for (const auto& x : j[key]) {
        if (!x.is_number()) throw SchemaError(std::string("kinetics '") + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void positive(double x, const char* what)
{
    if (!(x > 0)) throw SchemaError(std::string(what) + " must be positive");
}

RunConfig loadConfig(const Flags& f)
{
    const fs::path cfgPath(f.config);
    if (!fs::exists(cfgPath)) throw SetupError("config file not found: " + f.config);
    json j;
    try {
        j = json::parse(io::readFile(f.config));
    } catch (const json::parse_error& e) {
        throw SchemaError("config " + f.config + " is not valid JSON: " + e.what());
    }
    RunConfig rc;
    rc.echo = j;

    const json sys = j.value("system", json::object());
    std::string preset = sys.value("preset", std::string());
    if (!f.preset.empty()) preset = f.preset;
    if (preset == "fhn") {
        rc.fhnPreset = true;
        rc.fhn.a = num(sys, "a", rc.fhn.a);
        rc.fhn.eps = num(sys, "eps", rc.fhn.eps);
        rc.fhn.gamma = num(sys, "gamma", rc.fhn.gamma);
    } else if (preset.empty()) {
        if (!sys.contains("kinetics")) throw SchemaError("system needs either preset \"fhn\" or a kinetics block");
        const auto& k = sys["kinetics"];
        rc.fc = coeffs(k, "f");
        rc.gc = coeffs(k, "g");
        rc.sigma = num(k, "sigma", 1.0);
        rc.alpha = num(k, "alpha", 1.0);
    } else {
        throw SchemaError("unknown preset '" + preset + "'");
    }
    if (sys.contains("c")) rc.c = num(sys, "c", 0.0);
    if (f.a) rc.fhn.a = *f.a;
    if (f.eps) rc.fhn.eps = *f.eps;
    if (f.gamma) rc.fhn.gamma = *f.gamma;

    const json wv = j.value("wave", json::object());
    rc.source = wv.value("source", rc.source);
    if (rc.source != "solve" && rc.source != "file" && rc.source != "analytic")
        throw SchemaError("wave.source must be solve, file or analytic");
    rc.path = wv.value("path", std::string());
    if (!rc.path.empty() && fs::path(rc.path).is_relative()) rc.path = (cfgPath.parent_path() / rc.path).string();
    if (rc.source == "file" && rc.path.empty()) throw SchemaError("wave.source = file needs wave.path");
    if (!rc.path.empty() && !fs::exists(rc.path)) throw SetupError("profile file not found: " + rc.path);
    const json so = wv.value("solver", json::object());
    rc.solver.residualTol = num(so, "residual_tol", rc.solver.residualTol);
    rc.solver.maxIter = int(num(so, "max_iter", rc.solver.maxIter));
    rc.solver.coreStep = num(so, "core_step", rc.solver.coreStep);
    rc.solver.L = num(so, "L", rc.solver.L);
    positive(rc.solver.residualTol, "wave.solver.residual_tol");
    positive(rc.solver.coreStep, "wave.solver.core_step");

    const json an = j.value("analysis", json::object());
    const json grid = an.value("evans_grid", json::object());
    if (grid.contains("lambda_min")) rc.lambdaMin = num(grid, "lambda_min", 0);
    if (grid.contains("lambda_max")) rc.lambdaMax = num(grid, "lambda_max", 0);
    rc.steps = int(num(grid, "steps", rc.steps));
    rc.tau = num(an, "tau_request", rc.tau);
    rc.threads = int(num(an, "threads", rc.threads));
    const json tol = an.value("tolerances", json::object());
    rc.rtol = num(tol, "ode_rtol", rc.rtol);
    rc.atol = num(tol, "ode_atol", rc.atol);
    rc.angleTol = num(tol, "angle_tol", rc.angleTol);
    rc.regularityFloor = num(tol, "regularity_floor", rc.regularityFloor);
    positive(rc.rtol, "analysis.tolerances.ode_rtol");
    positive(rc.atol, "analysis.tolerances.ode_atol");
    positive(rc.angleTol, "analysis.tolerances.angle_tol");
    positive(rc.regularityFloor, "analysis.tolerances.regularity_floor");

    if (f.lambdaMin) rc.lambdaMin = *f.lambdaMin;
    if (f.lambdaMax) rc.lambdaMax = *f.lambdaMax;
    if (f.lambdaSteps) rc.steps = *f.lambdaSteps;
    if (f.tau) rc.tau = *f.tau;
    if (rc.steps < 1) throw SchemaError("lambda steps must be at least 1");

    const json out = j.value("output", json::object());
    rc.outDir = out.value("directory", rc.outDir);
    if (fs::path(rc.outDir).is_relative() && f.out.empty()) rc.outDir = (cfgPath.parent_path() / rc.outDir).string();
    if (!f.out.empty()) rc.outDir = f.out;
    return rc;
}

struct Acquired {
    model::SystemParams params;
    std::shared_ptr<WaveProfile> wave;
    json info;
};

WaveProfile nagumoFixture(const wave::FhnParams& p)
{
    const auto fr = wave::nagumoFront(p.a);
    WaveProfile w;
    w.L = 40.0;
    w.sigma = 1.0;
    w.alpha = p.eps;
    w.c = fr.speed;
    for (int i = 0; i <= 2000; ++i) {
        const double z = -w.L + 2 * w.L * i / 2000.0;
        w.grid.push_back(z);
        w.u.push_back(fr.u(z));
        w.du.push_back(fr.du(z));
        w.ddu.push_back(fr.ddu(z));
        w.v.push_back(0.0);
        w.dv.push_back(0.0);
        w.ddv.push_back(0.0);
    }
    return w;
}

Acquired acquire(const RunConfig& rc, bool allowFront)
{
    return pipeline::stage("wave", [&] {
        Acquired a;
        if (rc.source == "analytic") {
            if (!rc.fhnPreset) throw SetupError("wave.source = analytic needs the fhn preset");
            if (!allowFront)
                throw SetupError("the analytic source is the Nagumo front fixture, not a pulse; use it with 'wave' only");
            a.wave = std::make_shared<WaveProfile>(nagumoFixture(rc.fhn));
            a.params = wave::fhnSystem(rc.fhn, a.wave->c);
            a.info = {{"source", "analytic"}, {"c", a.wave->c}};
            return a;
        }
        if (rc.source == "solve" && rc.fhnPreset && rc.path.empty()) {
            const auto orbit = wave::fhnSingularOrbit(rc.fhn);
            const auto r = wave::solveHomoclinic(rc.fhn, orbit, rc.solver);
            a.wave = std::make_shared<WaveProfile>(r.profile);
            a.params = wave::fhnSystem(rc.fhn, r.c);
            a.info = {{"source", "solve"}, {"c", r.c}, {"residual", r.residual}, {"iterations", r.iterations}};
            return a;
        }
        if (rc.path.empty()) throw SetupError("solving without the fhn preset needs wave.path as the initial guess");
        auto w = loadProfile(rc.path);
        const double c = rc.c.value_or(w.c);
        if (rc.fhnPreset) {
            a.params = wave::fhnSystem(rc.fhn, c);
        } else {
            a.params.kinetics = model::polynomialKinetics(rc.fc, rc.gc, rc.sigma, rc.alpha);
            a.params.c = c;
        }
        if (std::abs(w.sigma - a.params.kinetics.sigma) > 1e-12 || std::abs(w.alpha - a.params.kinetics.alpha) > 1e-12)
            throw SetupError("profile " + rc.path + " was made with different sigma/alpha than the configured system");
        if (rc.source == "solve") {
            const auto r = wave::solveHomoclinic(a.params, w, rc.solver);
            a.wave = std::make_shared<WaveProfile>(r.profile);
            a.params.c = r.c;
            a.info = {{"source", "solve"}, {"guess", rc.path}, {"c", r.c}, {"residual", r.residual}};
        } else {
            a.wave = std::make_shared<WaveProfile>(std::move(w));
            a.info = {{"source", "file"}, {"path", rc.path}, {"c", c}};
        }
        return a;
    });
}

pipeline::Options analysisOptions(const RunConfig& rc, const model::SystemParams& params, bool flipLt)
{
    pipeline::Options o;
    o.evans.threads = rc.threads;
    o.evans.bundle.ode.rtol = rc.rtol;
    o.evans.bundle.ode.atol = rc.atol;
    o.scan.threads = rc.threads;
    o.scan.regularityFloor = rc.regularityFloor;
    o.angleTol = rc.angleTol;
    o.tau = rc.tau;
    o.flipLt = flipLt;
    if (rc.lambdaMin || rc.lambdaMax || rc.steps != 20) {
        const auto d = pipeline::defaultGrid(params);
        o.lambdaGrid = evans::uniformGrid(rc.lambdaMin.value_or(d.front()), rc.lambdaMax.value_or(d.back()), rc.steps);
    }
    return o;
}

std::string outFile(const RunConfig& rc, const char* name)
{
    fs::create_directories(rc.outDir);
    return (fs::path(rc.outDir) / name).string();
}

json systemEcho(const RunConfig& rc, const model::SystemParams& p)
{
    json s;
    if (rc.fhnPreset)
        s = {{"preset", "fhn"}, {"a", rc.fhn.a}, {"eps", rc.fhn.eps}, {"gamma", rc.fhn.gamma}};
    else
        s = {{"kinetics", {{"f", rc.fc}, {"g", rc.gc}}}};
    s["sigma"] = p.kinetics.sigma;
    s["alpha"] = p.kinetics.alpha;
    s["c"] = p.c;
    s["turing"] = model::turingCheck(p);
    return s;
}

std::string stamp()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmdWave(const RunConfig& rc)
{
    const auto a = acquire(rc, true);
    const auto path = outFile(rc, "profile.json");
    io::writeFileAtomic(path, profileJson(*a.wave));
    std::cout << "wrote " << path << " (c = " << io::num(a.params.c) << ", " << a.wave->size() << " nodes)\n";
    return 0;
}

int cmdEvansScan(const RunConfig& rc)
{
    const auto a = acquire(rc, false);
    const auto o = analysisOptions(rc, a.params, false);
    const auto grid = o.lambdaGrid.empty() ? pipeline::defaultGrid(a.params) : o.lambdaGrid;
    const auto scan = pipeline::stage("evans scan", [&] {
        const auto al = bundle::alignTranslation(a.params, *a.wave);
        return evans::evansScan(a.params, *a.wave, grid, al, o.evans);
    });
    for (const auto& w : scan.warnings) std::cerr << "warning: " << w << '\n';
    const auto path = outFile(rc, "evans.csv");
    io::writeFileAtomic(path, evans::evansCsv(scan.samples));
    std::cout << "wrote " << path << " (" << scan.samples.size() << " rows, " << scan.signChanges.size()
              << " sign changes)\n";
    return 0;
}

int cmdBetaTrace(const RunConfig& rc)
{
    const auto a = acquire(rc, false);
    const auto o = analysisOptions(rc, a.params, false);
    maslov::BetaTrace trace;
    std::vector<maslov::ConjugatePoint> cps;
    double tau = 0.0;
    pipeline::stage("maslov", [&] {
        const auto d = maslov::zeroData(a.params, *a.wave, o.solutions);
        tau = rc.tau > 0 ? rc.tau : maslov::defaultTau(*a.wave);
        const auto ref = maslov::referencePlane(d, tau, o.angleTol);
        cps = maslov::findConjugatePoints(ref, d, o.scan, &trace);
    });
    const auto path = outFile(rc, "beta.csv");
    io::writeFileAtomic(path, maslov::betaCsv(trace));
    std::cout << "wrote " << path << " (" << trace.z.size() << " rows; " << cps.size()
              << " interior zeros plus the endpoint at tau = " << io::num(tau) << ")\n";
    return 0;
}

int cmdAnalyze(const RunConfig& rc, bool flipLt)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = acquire(rc, false);
    const double tWave = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto an = pipeline::analyze(a.params, *a.wave, analysisOptions(rc, a.params, flipLt));

    json report;
    report["tool"] = {{"name", "sevtool"}, {"version", SEV_VERSION}};
    report["system"] = systemEcho(rc, a.params);
    report["wave_source"] = a.info;
    const json body = json::parse(pipeline::analysisJson(an));
    for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
    if (rc.fhnPreset) {
        try {
            const auto s = fhn::singularVsFullComparison(rc.fhn, an);
            report["singular_comparison"] = {{"u_tau", s.uTau},          {"u_star", s.uStar},
                                             {"u_front", s.uFront},      {"front_error", s.frontError},
                                             {"cylinder_angle", s.cylinderAngle}, {"u_slow", s.uSlow},
                                             {"u_slow_star", s.uSlowStar}, {"slow_tangent_angle", s.slowTangentAngle}};
        } catch (const Error& e) {
            report["singular_comparison"] = {{"error", e.what()}};
        }
    }
    json timing = {{"wave", tWave}};
    for (const auto& [k, v] : an.seconds) timing[k] = v;
    report["metadata"] = {{"generated", stamp()}, {"timing_seconds", timing}, {"config", rc.echo}};

    io::writeFileAtomic(outFile(rc, "report.json"), report.dump(2) + "\n");
    io::writeFileAtomic(outFile(rc, "evans.csv"), evans::evansCsv(an.scan.samples));
    io::writeFileAtomic(outFile(rc, "beta.csv"), maslov::betaCsv(an.beta));

    std::cout << "c = " << io::num(a.params.c) << "\n"
              << "Maslov index " << an.maslov.index << " (" << an.maslov.crossings.size()
              << " interior crossings + endpoint)\n"
              << "Omega(u1,u4) = " << io::num(an.lt.value) << "\n"
              << "D'(0) = " << io::num(an.derivative.dPrime0) << " (finite difference "
              << io::num(an.derivative.fdCheck) << ")\n"
              << "parity: " << an.parity.detail << "\n"
              << "wrote report.json, evans.csv, beta.csv to " << rc.outDir << "\n";
    if (!an.consistent) {
        std::cerr << "PARITY INCONSISTENT: (-1)^index, sign(Omega) and the D'(0) routes disagree\n";
        return 2;
    }
    return 0;
}

void addCommon(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "JSON run configuration")->required();
    cmd->add_option("--out", f.out, "output directory (overrides output.directory)");
    cmd->add_option("--preset", f.preset, "system preset")->check(CLI::IsMember({"fhn"}));
    cmd->add_option("--lambda-min", f.lambdaMin);
    cmd->add_option("--lambda-max", f.lambdaMax);
    cmd->add_option("--lambda-steps", f.lambdaSteps);
    cmd->add_option("--tau", f.tau, "reference plane position");
    cmd->add_option("--eps", f.eps);
    cmd->add_option("--a", f.a);
    cmd->add_option("--gamma", f.gamma);
    cmd->add_flag("--debug-flip-lt", f.flipLt, "invert Omega(u1,u4) before the parity check (test hook)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symplectic Evans function and Maslov index for activator-inhibitor waves"};
    app.set_version_flag("--version", SEV_VERSION);
    app.require_subcommand(1);
    Flags f;
    auto* analyze = app.add_subcommand("analyze", "wave, Evans scan, Maslov index, parity, D'(0)");
    auto* scan = app.add_subcommand("evans-scan", "Evans function on a real lambda grid");
    auto* beta = app.add_subcommand("beta-trace", "detection function beta on (-L, tau)");
    auto* wv = app.add_subcommand("wave", "acquire the wave and write profile.json");
    for (auto* c : {analyze, scan, beta, wv}) addCommon(c, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const auto rc = loadConfig(f);
        if (*analyze) return cmdAnalyze(rc, f.flipLt);
        if (*scan) return cmdEvansScan(rc);
        if (*beta) return cmdBetaTrace(rc);
        return cmdWave(rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
