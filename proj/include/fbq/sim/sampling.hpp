#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbq/analytic/sojourn.hpp"
#include "fbq/dist/service.hpp"

namespace fbq {

// One exact draw of W_x, the steady-state FIFO waiting time with sizes
// truncated at x: W = sum of K i.i.d. (B^x)* draws, K geometric with
// P(K=k) = (1-rho_x) rho_x^k. No warm-up bias.
double sample_waiting_trunc(const TrafficPoint& tp, double x, RandomStream& rng);

// One draw of T_FB(x) through the busy-period representation: the truncated
// workload started at W_x + x, drained at unit rate with Poisson(lambda)
// arrivals of size B ^ x, until it hits zero.
double sample_sojourn_fb_of_size(const TrafficPoint& tp, double x, RandomStream& rng,
                                 std::uint64_t max_events = 1'000'000'000ULL);

struct WToExpCheck {
    double ks;
    double target_mean;  // nu E[B*]
    double x;            // the truncation level x_rho^nu
};

// Draws n exact scaled samples (1-rho) W_{x_rho^nu} with
// x_rho^nu = Ginv(1 - ((1-rho)/rho)((1-nu)/nu)) and returns their KS distance
// to the Exponential with mean nu E[B*].
WToExpCheck check_w_to_exp(const ServiceDistribution& d, double nu, double rho, std::size_t n,
                           std::uint64_t seed);

}  // namespace fbq
