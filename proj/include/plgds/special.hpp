#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "errors.hpp"

namespace plgds {

inline constexpr double kZetaMinGap = 1e-6;
inline constexpr double kBisectTol = 1e-4;

// floor() that treats values within a relative 1e-10 of an integer as that
// integer, so inputs such as e^{ln 1000}/10^2 land on 10 rather than 9.
inline double snap_floor(double x) {
    double r = std::round(x);
    if (std::fabs(x - r) <= 1e-10 * std::fmax(1.0, std::fabs(x))) return r;
    return std::floor(x);
}

inline double partial_zeta(double s, std::uint64_t k) {
    double acc = 0.0;
    for (std::uint64_t j = k; j >= 1; --j) acc += std::pow(static_cast<double>(j), -s);
    return acc;
}

// Truncated sum plus the integral tail T^{1-s}/(s-1), refined by the first
// Euler-Maclaurin corrections. T is picked so the first omitted correction
// is below tol/2.
inline double zeta(double s, double tol = 1e-12) {
    if (!(s > 1.0 + kZetaMinGap))
        throw DivergentSeries("zeta: series diverges for s = " + std::to_string(s));
    if (!(tol > 0.0)) throw DomainError("zeta: tol must be positive");
    // next term ~ s(s+1)(s+2)(s+3)(s+4) T^{-s-5} / 30240
    double c = s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0;
    double T = std::pow(2.0 * c / tol, 1.0 / (s + 5.0));
    T = std::ceil(std::fmax(T, 16.0));
    auto n = static_cast<std::uint64_t>(T);
    double sum = partial_zeta(s, n - 1);
    double t = static_cast<double>(n);
    double tail = std::pow(t, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(t, -s) +
                  s * std::pow(t, -s - 1.0) / 12.0 -
                  s * (s + 1) * (s + 2) * std::pow(t, -s - 3.0) / 720.0;
    return sum + tail;
}

// Bisection for a sign change of g on [lo, hi]; g(lo) and g(hi) must differ
// in sign. Returns the endpoint on the side where g has the sign of g(hi).
template <class F>
double bisect(F g, double lo, double hi, double tol = kBisectTol) {
    double glo = g(lo);
    double ghi = g(hi);
    if ((glo > 0) == (ghi > 0)) throw InternalInvariantViolation("bisect: bracket has no sign change");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((gm > 0) == (ghi > 0))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace plgds
