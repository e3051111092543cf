#include "sev/profile.hpp"
#include "sev/error.hpp"
#include "sev/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sev {

namespace {

struct Quintic {
    double h0, h1, h2, g0, g1, g2; // weights for y0, h y0', h^2 y0'', y1, h y1', h^2 y1''
};

Quintic basis(double t)
{
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    return {1 - 10 * t3 + 15 * t4 - 6 * t5,
            t - 6 * t3 + 8 * t4 - 3 * t5,
            0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5,
            10 * t3 - 15 * t4 + 6 * t5,
            -4 * t3 + 7 * t4 - 3 * t5,
            0.5 * t3 - t4 + 0.5 * t5};
}

Quintic basisD1(double t)
{
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    return {-30 * t2 + 60 * t3 - 30 * t4,
            1 - 18 * t2 + 32 * t3 - 15 * t4,
            t - 4.5 * t2 + 6 * t3 - 2.5 * t4,
            30 * t2 - 60 * t3 + 30 * t4,
            -12 * t2 + 28 * t3 - 15 * t4,
            1.5 * t2 - 4 * t3 + 2.5 * t4};
}

Quintic basisD2(double t)
{
    const double t2 = t * t, t3 = t2 * t;
    return {-60 * t + 180 * t2 - 120 * t3,
            -36 * t + 96 * t2 - 60 * t3,
            1 - 9 * t + 18 * t2 - 10 * t3,
            60 * t - 180 * t2 + 120 * t3,
            -24 * t + 84 * t2 - 60 * t3,
            3 * t - 12 * t2 + 10 * t3};
}

double combine(const Quintic& b, double h, double y0, double d0, double s0, double y1, double d1, double s1)
{
    return b.h0 * y0 + b.h1 * h * d0 + b.h2 * h * h * s0 + b.g0 * y1 + b.g1 * h * d1 + b.g2 * h * h * s1;
}

} // namespace

ProfileSample WaveProfile::at(double z) const
{
    if (grid.size() < 2) throw DomainError("empty wave profile");
    if (z < grid.front() || z > grid.back()) return tailExtend(*this, z);
    auto it = std::upper_bound(grid.begin(), grid.end(), z);
    std::size_t i = std::size_t(it - grid.begin());
    if (i == 0) i = 1;
    if (i >= grid.size()) i = grid.size() - 1;
    const std::size_t k = i - 1;
    const double h = grid[i] - grid[k];
    const double t = (z - grid[k]) / h;

    // u'' and v'' are stored, third derivatives are not: value and first
    // derivative come from the quintic, second derivative from its d2.
    const Quintic b0 = basis(t), b1 = basisD1(t), b2 = basisD2(t);
    ProfileSample s;
    s.u = combine(b0, h, u[k], du[k], ddu[k], u[i], du[i], ddu[i]);
    s.v = combine(b0, h, v[k], dv[k], ddv[k], v[i], dv[i], ddv[i]);
    s.du = combine(b1, h, u[k], du[k], ddu[k], u[i], du[i], ddu[i]) / h;
    s.dv = combine(b1, h, v[k], dv[k], ddv[k], v[i], dv[i], ddv[i]) / h;
    s.ddu = combine(b2, h, u[k], du[k], ddu[k], u[i], du[i], ddu[i]) / (h * h);
    s.ddv = combine(b2, h, v[k], dv[k], ddv[k], v[i], dv[i], ddv[i]) / (h * h);
    return s;
}

Vec4 WaveProfile::state(double z) const
{
    const auto s = at(z);
    return {s.u, s.v, s.du / sigma, s.dv / alpha};
}

Vec4 WaveProfile::phiPrime(double z) const
{
    const auto s = at(z);
    return {s.du, s.dv, s.ddu / sigma, s.ddv / alpha};
}

void WaveProfile::checkShape() const
{
    const std::size_t n = grid.size();
    if (n < 5) throw SchemaError("profile grid needs at least 5 points");
    for (auto* a : {&u, &v, &du, &dv, &ddu, &ddv})
        if (a->size() != n) throw SchemaError("profile arrays differ in length from grid");
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1]))
            throw SchemaError("profile grid not strictly increasing at index " + std::to_string(i));
    if (!(L > 0)) throw SchemaError("profile L must be positive");
}

ProfileSample tailExtend(const WaveProfile& w, double z)
{
    // Exponential continuation along the decay rate at the nearer end;
    // value continuous at +-L, derivatives follow the exponential law.
    const bool right = z > 0;
    const std::size_t i = right ? w.grid.size() - 1 : 0;
    const double mu = right ? w.tails.muPlus : w.tails.muMinus;
    const double e = std::exp(mu * (z - w.grid[i]));
    ProfileSample s;
    s.u = w.u[i] * e;
    s.v = w.v[i] * e;
    s.du = mu * s.u;
    s.dv = mu * s.v;
    s.ddu = mu * s.du;
    s.ddv = mu * s.dv;
    return s;
}

TailData estimateTails(const WaveProfile& w)
{
    auto rate = [&](std::size_t i) {
        const double d = w.u[i] * w.u[i] + w.v[i] * w.v[i];
        if (d == 0.0) return 0.0;
        return (w.u[i] * w.du[i] + w.v[i] * w.dv[i]) / d;
    };
    return {rate(w.grid.size() - 1), rate(0)};
}

std::vector<double> fdWeights(double x0, const std::vector<double>& xs, int m)
{
    const int n = int(xs.size());
    std::vector<std::vector<double>> C(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    C[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2;
                C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3;
            C[j][0] = c4 * C[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = C[i][m];
    return out;
}

double derivativeConsistency(const WaveProfile& w)
{
    const std::size_t n = w.grid.size();
    double worst = 0.0;
    auto check = [&](const std::vector<double>& y, const std::vector<double>& dy) {
        double scale = 0.0;
        for (double d : dy) scale = std::max(scale, std::abs(d));
        if (scale == 0.0) return;
        for (std::size_t i = 2; i + 2 < n; ++i) {
            const std::vector<double> xs(w.grid.begin() + long(i) - 2, w.grid.begin() + long(i) + 3);
            const auto wts = fdWeights(w.grid[i], xs, 1);
            double fd = 0.0;
            for (int k = 0; k < 5; ++k) fd += wts[k] * y[i - 2 + k];
            worst = std::max(worst, std::abs(fd - dy[i]) / scale);
        }
    };
    check(w.u, w.du);
    check(w.v, w.dv);
    return worst;
}

std::string profileJson(const WaveProfile& w)
{
    std::ostringstream os;
    auto arr = [&](const char* name, const std::vector<double>& a, bool last) {
        os << "  \"" << name << "\": [";
        for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << io::num(a[i]);
        os << "]" << (last ? "\n" : ",\n");
    };
    os << "{\n  \"version\": 1,\n";
    os << "  \"params\": {\"sigma\": " << io::num(w.sigma) << ", \"alpha\": " << io::num(w.alpha)
       << ", \"c\": " << io::num(w.c) << "},\n";
    os << "  \"L\": " << io::num(w.L) << ",\n";
    arr("grid", w.grid, false);
    arr("u", w.u, false);
    arr("v", w.v, false);
    arr("du", w.du, false);
    arr("dv", w.dv, false);
    arr("ddu", w.ddu, false);
    arr("ddv", w.ddv, true);
    os << "}\n";
    return os.str();
}

void saveProfile(const WaveProfile& w, const std::string& path)
{
    io::writeFileAtomic(path, profileJson(w));
}

WaveProfile parseProfile(const std::string& text, const LoadOptions& opts)
{
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("profile is not valid JSON: ") + e.what());
    }
    auto need = [&](const json& o, const char* key) -> const json& {
        if (!o.is_object() || !o.contains(key)) throw SchemaError(std::string("profile missing field '") + key + "'");
        return o.at(key);
    };
    auto number = [&](const json& o, const char* key) {
        const json& x = need(o, key);
        if (!x.is_number()) throw SchemaError(std::string("profile field '") + key + "' is not a number");
        return x.get<double>();
    };
    auto array = [&](const char* key) {
        const json& x = need(j, key);
        if (!x.is_array()) throw SchemaError(std::string("profile field '") + key + "' is not an array");
        std::vector<double> out;
        out.reserve(x.size());
        for (const auto& e : x) {
            if (!e.is_number()) throw SchemaError(std::string("non-numeric entry in '") + key + "'");
            out.push_back(e.get<double>());
        }
        return out;
    };

    if (number(j, "version") != 1.0) throw SchemaError("unsupported profile version");
    WaveProfile w;
    const json& p = need(j, "params");
    w.sigma = number(p, "sigma");
    w.alpha = number(p, "alpha");
    w.c = number(p, "c");
    w.L = number(j, "L");
    w.grid = array("grid");
    w.u = array("u");
    w.v = array("v");
    w.du = array("du");
    w.dv = array("dv");
    w.ddu = array("ddu");
    w.ddv = array("ddv");
    w.checkShape();

    const std::size_t n = w.size();
    for (std::size_t i : {std::size_t(0), n - 1}) {
        const double amp = std::abs(w.u[i]) + std::abs(w.v[i]);
        if (!(amp < opts.tailTol))
            throw DomainError("profile tail tolerance violated at z = " + io::num(w.grid[i]) + ": |u|+|v| = " +
                              io::num(amp));
    }
    const double dc = derivativeConsistency(w);
    if (!(dc < opts.derivTol))
        throw DomainError("profile derivative arrays inconsistent with the grid values (relative error " +
                          io::num(dc) + ")");
    w.tails = estimateTails(w);
    return w;
}

WaveProfile loadProfile(const std::string& path, const LoadOptions& opts)
{
    std::string text;
    try {
        text = io::readFile(path);
    } catch (const Error&) {
        throw SchemaError("cannot read profile file: " + path);
    }
    return parseProfile(text, opts);
}

} // namespace sev
