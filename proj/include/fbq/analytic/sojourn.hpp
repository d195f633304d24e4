#pragma once

#include "fbq/dist/service.hpp"
#include "fbq/numerics/quadrature.hpp"

namespace fbq {

// One operating point of the M/GI/1 queue. Exactly one of lambda/rho is
// given; the other follows from E[B].
struct TrafficPoint {
    TrafficPoint(const ServiceDistribution& dist, double lambda, double rho)
        : dist(&dist), lambda(lambda), rho(rho) {
        if (!(rho >= 0.0 && rho < 1.0)) {
            throw std::domain_error("stability requires 0 <= rho < 1");
        }
    }
    static TrafficPoint from_rho(const ServiceDistribution& d, double rho) {
        return TrafficPoint(d, rho / d.mean(), rho);
    }
    static TrafficPoint from_lambda(const ServiceDistribution& d, double lambda) {
        return TrafficPoint(d, lambda, lambda * d.mean());
    }

    const ServiceDistribution* dist;
    double lambda;
    double rho;
};

// 1 - rho_x evaluated as (1 - rho) + rho*Gbar(x); never as 1 - lambda*E[B^x],
// which loses every digit once rho is within 1e-4 of one.
double one_minus_rho_x(const TrafficPoint& tp, double x);

// rho_x = rho G(x).
double rho_x(const TrafficPoint& tp, double x);

// E[T_FB(x)] = x/(1-rho_x) + lambda m2(x) / (2 (1-rho_x)^2).
double mean_sojourn_fb_of_size(const TrafficPoint& tp, double x);

// E[W(x)] = lambda m2(x) / (2 (1-rho_x)): Pollaczek-Khinchine mean of the
// queue with sizes truncated at x. x may be +infinity when E[B^2] < inf.
double mean_waiting_fifo_trunc(const TrafficPoint& tp, double x);

// E[T_FB]: mean_sojourn_fb_of_size integrated over dF (atoms summed exactly).
double mean_sojourn_fb(const TrafficPoint& tp, const QuadratureSpec& spec = {1e-10, 1e-9, 4000});

// Same quantity through the rewritten three-term form
//   (1/lambda) log(1/(1-rho)) + 2 lambda Int x Fbar^2/(1-rho_x)^2 dx
//                             + lambda^2 Int m2 Fbar^2/(1-rho_x)^3 dx.
double mean_sojourn_fb_alt(const TrafficPoint& tp,
                           const QuadratureSpec& spec = {1e-10, 1e-9, 4000});

// E[T_SRPT] = Int [ Int_0^x dt/(1-rho_t) + lambda m2(x)/(2(1-rho_x)^2) ] dF(x).
double mean_sojourn_srpt(const TrafficPoint& tp, const QuadratureSpec& spec = {1e-9, 1e-8, 4000});

// The Chebyshev bound on P((1-rho)^2 T_FB(x) > y); clamps to 1 when the
// squared denominator term is non-positive (vacuous regime).
double chebyshev_tail_bound(const TrafficPoint& tp, double x, double y);

// Int h dF over the continuous part and atoms, split at the family's kinks.
double integrate_over_dist(const ServiceDistribution& d,
                           const std::function<double(double)>& h, const QuadratureSpec& spec);

}  // namespace fbq
