#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace fbq {

// Tolerances and subdivision budget for adaptive quadrature.
// On success the reported error estimate satisfies
//   err_estimate <= max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
};

struct IntegralResult {
    double value = 0.0;
    double err_estimate = 0.0;
};

// Thrown when the subdivision budget is exhausted before the tolerance is
// met, or when the integrand returns NaN. Carries the best estimate so far.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), err_estimate(err) {}
    double best_estimate;
    double err_estimate;
};

// Adaptive Gauss-Kronrod (7-15) with bisection of the worst interval.
// b may be +infinity, in which case the tail is mapped onto (0,1) via
// t = a + u/(1-u). Deterministic for fixed inputs.
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec = {});

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace fbq
