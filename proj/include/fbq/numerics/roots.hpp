#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace fbq {

// Finds x in [lo, hi] with g(x) = target for non-decreasing g, by bisection
// (no derivatives: g may have kinks or flat stretches). For a flat level set
// it converges to the left endpoint, matching the right-inverse convention
// inf{x : g(x) >= target}. Bracket is shrunk to width <= tol.
inline double find_root_increasing(const std::function<double(double)>& g, double target,
                                   double lo, double hi, double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("find_root_increasing: lo > hi");
    const double glo = g(lo);
    const double ghi = g(hi);
    if (target < glo || target > ghi) {
        throw std::domain_error("find_root_increasing: target " + std::to_string(target) +
                                " outside [g(lo), g(hi)] = [" + std::to_string(glo) + ", " +
                                std::to_string(ghi) + "]");
    }
    if (glo >= target) return lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // floating-point resolution
        if (g(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace fbq
