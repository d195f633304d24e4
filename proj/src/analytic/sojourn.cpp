#include "fbq/analytic/sojourn.hpp"

#include <cmath>

namespace fbq {

double one_minus_rho_x(const TrafficPoint& tp, double x) {
    return (1.0 - tp.rho) + tp.rho * eq_ccdf(*tp.dist, x);
}

double rho_x(const TrafficPoint& tp, double x) {
    return tp.rho * eq_cdf(*tp.dist, x);
}

double mean_sojourn_fb_of_size(const TrafficPoint& tp, double x) {
    if (x < 0.0) throw std::domain_error("mean_sojourn_fb_of_size requires x >= 0");
    const double omr = one_minus_rho_x(tp, x);
    if (!(omr > 0.0)) throw std::logic_error("rho_x >= 1 despite rho < 1");
    return x / omr + tp.lambda * m2(*tp.dist, x) / (2.0 * omr * omr);
}

double mean_waiting_fifo_trunc(const TrafficPoint& tp, double x) {
    if (tp.lambda == 0.0) return 0.0;
    const double second = m2(*tp.dist, x);
    if (std::isinf(second)) {
        throw InfiniteMomentError("mean_waiting_fifo_trunc: E[(B^x)^2] = inf");
    }
    return tp.lambda * second / (2.0 * one_minus_rho_x(tp, x));
}

double integrate_over_dist(const ServiceDistribution& d,
                           const std::function<double(double)>& h, const QuadratureSpec& spec) {
    double total = 0.0;
    for (const auto& [x, mass] : d.atoms()) {
        total += mass * h(x);
    }
    auto weighted = [&](double x) {
        const double w = density(d, x);
        return w == 0.0 ? 0.0 : w * h(x);
    };
    double lo = 0.0;
    const double hi = d.x_right();
    for (double bp : d.breakpoints()) {
        if (bp > lo && bp < hi) {
            total += integrate(weighted, lo, bp, spec).value;
            lo = bp;
        }
    }
    total += integrate(weighted, lo, hi, spec).value;
    return total;
}

double mean_sojourn_fb(const TrafficPoint& tp, const QuadratureSpec& spec) {
    if (tp.lambda == 0.0) return tp.dist->mean();
    auto body = [&](double x) { return mean_sojourn_fb_of_size(tp, x); };
    return integrate_over_dist(*tp.dist, body, spec);
}

double mean_sojourn_fb_alt(const TrafficPoint& tp, const QuadratureSpec& spec) {
    if (tp.lambda == 0.0) return tp.dist->mean();
    const ServiceDistribution& d = *tp.dist;
    const double log_term = -std::log1p(-tp.rho) / tp.lambda;

    auto second = [&](double x) {
        const double fbar = ccdf(d, x);
        if (fbar == 0.0) return 0.0;
        const double omr = one_minus_rho_x(tp, x);
        return x * fbar * fbar / (omr * omr);
    };
    auto third = [&](double x) {
        const double fbar = ccdf(d, x);
        if (fbar == 0.0) return 0.0;
        const double omr = one_minus_rho_x(tp, x);
        return m2(d, x) * fbar * fbar / (omr * omr * omr);
    };

    auto piecewise = [&](const std::function<double(double)>& f) {
        double total = 0.0;
        double lo = 0.0;
        const double hi = d.x_right();
        for (double bp : d.breakpoints()) {
            if (bp > lo && bp < hi) {
                total += integrate(f, lo, bp, spec).value;
                lo = bp;
            }
        }
        total += integrate(f, lo, hi, spec).value;
        return total;
    };

    return log_term + 2.0 * tp.lambda * piecewise(second) +
           tp.lambda * tp.lambda * piecewise(third);
}

double one_minus_rho_srpt(const TrafficPoint& tp, double t) {
    // 1 - lambda Int_0^t u dF(u), with the size-based load rewritten through
    // the tail so nothing cancels: Int_t^{xR} u dF = t Fbar(t) + Int_t Fbar.
    const ServiceDistribution& d = *tp.dist;
    return (1.0 - tp.rho) +
           tp.lambda * (t * ccdf(d, t) + upper_tail_integral(d, t));
}

double mean_sojourn_srpt(const TrafficPoint& tp, const QuadratureSpec& spec) {
    if (tp.lambda == 0.0) return tp.dist->mean();
    const ServiceDistribution& d = *tp.dist;
    QuadratureSpec inner_spec{spec.abs_tol, spec.rel_tol, spec.max_subdivisions};

    auto inner = [&](double x) {
        // Int_0^x dt / (1 - rho(t)), split at kinks below x.
        auto f = [&](double t) { return 1.0 / one_minus_rho_srpt(tp, t); };
        double total = 0.0;
        double lo = 0.0;
        for (double bp : d.breakpoints()) {
            if (bp > lo && bp < x) {
                total += integrate(f, lo, bp, inner_spec).value;
                lo = bp;
            }
        }
        total += integrate(f, lo, x, inner_spec).value;
        return total;
    };
    auto body = [&](double x) {
        const double omr = one_minus_rho_srpt(tp, x);
        return inner(x) + tp.lambda * m2(d, x) / (2.0 * omr * omr);
    };
    return integrate_over_dist(d, body, spec);
}

double chebyshev_tail_bound(const TrafficPoint& tp, double x, double y) {
    const double omr = one_minus_rho_x(tp, x);
    const double rx = 1.0 - omr;
    const double tm = truncated_mean(*tp.dist, x);
    if (tm == 0.0) return y > 0.0 ? 0.0 : 1.0;  // no work below x at all
    const double eqm = m2(*tp.dist, x) / (2.0 * tm);    // E[(B^x)*]
    const double eqm2 = m3(*tp.dist, x) / (3.0 * tm);   // E[((B^x)*)^2]
    const double omrho2 = (1.0 - tp.rho) * (1.0 - tp.rho);

    const double numer = (rx / omr) * (rx / omr) * eqm * eqm + (rx / omr) * eqm2 +
                         2.0 * rx * eqm * y / omrho2;
    const double base = omr * y / omrho2 - x - rx * eqm / omr;
    if (base <= 0.0) return 1.0;
    const double bound = numer / (base * base);
    return bound > 1.0 ? 1.0 : bound;
}

}  // namespace fbq
