#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Extended exponent arithmetic on [1, inf] with the usual conventions:
// 1' = inf, inf' = 1, x/inf = 0, inf/x = inf for finite x > 0, t^0 = 1.
// Every formula-constant below (phi, c_p, tau_p, the theorem right-hand
// sides) routes its edge cases through these helpers.

namespace hx::ex {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline bool is_inf(double x) { return std::isinf(x); }

inline double conj(double p) {
    if (p < 1.0) throw std::domain_error("conj: exponent must be >= 1");
    if (p == 1.0) return inf;
    if (is_inf(p)) return 1.0;
    return p / (p - 1.0);
}

// a/b on [0,inf] with a/inf = 0 (finite a) and inf/b = inf (finite b)
inline double div(double a, double b) {
    if (is_inf(a) && is_inf(b)) throw std::domain_error("div: inf/inf undefined");
    if (is_inf(a)) return inf;
    if (is_inf(b)) return 0.0;
    return a / b;
}

// x^e with t^0 = 1 (including x = inf) and x^(1/inf) = x^0 = 1
inline double pow(double x, double e) {
    if (e == 0.0) return 1.0;
    if (is_inf(x)) return inf;
    return std::pow(x, e);
}

}  // namespace hx::ex
