#pragma once

// The lambda-scan plus lambda = 0 chain on a given wave: Evans scan,
// strong solutions and Omega(u1,u4), conjugate points, Maslov index, parity
// and D'(0). Stage failures are rethrown with the stage name prefixed.

#include "sev/evans.hpp"
#include "sev/maslov.hpp"
#include "sev/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace sev::pipeline {

struct Options {
    evans::Options evans{};
    bundle::SolutionOptions solutions{};
    maslov::ScanOptions scan{};
    std::vector<double> lambdaGrid; // empty: defaultGrid
    bool runScan = true;
    double tau = 0.0;        // 0: maslov::defaultTau
    bool perturbTau = true;  // re-run at tau +- 0.1 (L - tau)
    double fdStep = 0.0;     // 0: 1e-2 delta; D varies on the scale of the real-rate window
    double angleTol = 1e-3;
    bool flipLt = false;     // test hook: invert Omega(u1,u4) before the checks
};

// 20 points on [-delta/2, 2]
std::vector<double> defaultGrid(const model::SystemParams& params);

struct TauCheck {
    double tau = 0.0;
    bool ok = false;
    int index = 0;
    std::string error;
};

struct Analysis {
    model::SystemParams params;
    double L = 0.0;
    model::Clearance clearance;

    evans::Scan scan;
    evans::EvansSample atZero;
    double zeroRatio = 0.0; // |D(0)| / max over the scan of |D|

    maslov::ZeroData zero; // keeps a pointer to the wave
    bundle::Invariant lt;
    double ltFloor = 0.0;
    maslov::ReferencePlane ref;
    maslov::BetaTrace beta;
    maslov::MaslovResult maslov;
    maslov::ParityVerdict parity;
    double betaMinusL = 0.0; // raw beta at the left end, compare rho
    std::vector<TauCheck> tauChecks;

    evans::DerivativeReport derivative;
    bool routesAgree = false; // sign(lt*melnikov) == sign(fd) and (-1)^index == sign(lt)
    bool consistent = false;

    std::map<std::string, double> seconds;
};

Analysis analyze(const model::SystemParams& params, const WaveProfile& wave, const Options& opts = {});

// Data part of the report (no timing).
std::string analysisJson(const Analysis& a);

// Run f, prefixing any sev::Error message with "stage: " and keeping its type.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f());

} // namespace sev::pipeline

#include "sev/error.hpp"

namespace sev::pipeline {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    const std::string p = std::string(name) + ": ";
    try {
        return f();
    } catch (const ParameterError& e) {
        throw ParameterError(p + e.what());
    } catch (const DomainError& e) {
        throw DomainError(p + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(p + e.what());
    } catch (const SolverError& e) {
        throw SolverError(p + e.what(), e.residual());
    } catch (const SetupError& e) {
        throw SetupError(p + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(p + e.what());
    } catch (const IrregularError& e) {
        throw IrregularError(p + e.what());
    } catch (const Error& e) {
        throw Error(p + e.what());
    }
}

} // namespace sev::pipeline
