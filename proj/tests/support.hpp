#pragma once

#include "sev/fhn.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

namespace sevtest {

// One solve + analysis per (a, eps, gamma) per process; the heavy tests share it.
inline const sev::fhn::FhnReport& fhnRun(double eps = 0.0005, double a = 0.25, double gamma = 0.0)
{
    static std::map<std::tuple<double, double, double>, std::unique_ptr<sev::fhn::FhnReport>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto& slot = cache[{eps, a, gamma}];
    if (!slot) slot = std::make_unique<sev::fhn::FhnReport>(sev::fhn::runFhn({a, eps, gamma}));
    return *slot;
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20240531);
    return g;
}

inline sev::Vec4 randomUnit()
{
    std::normal_distribution<double> n;
    sev::Vec4 x(n(rng()), n(rng()), n(rng()), n(rng()));
    return x.normalized();
}

} // namespace sevtest
