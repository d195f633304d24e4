#include "fbq/sim/sampling.hpp"

#include <cmath>

#include "fbq/sim/engine.hpp"
#include "fbq/sim/stats.hpp"

namespace fbq {

double sample_waiting_trunc(const TrafficPoint& tp, double x, RandomStream& rng) {
    const double rx = tp.rho * eq_cdf(*tp.dist, x);
    if (!(rx < 1.0)) throw std::domain_error("sample_waiting_trunc requires rho_x < 1");
    if (rx == 0.0) return 0.0;
    const std::uint64_t k =
        static_cast<std::uint64_t>(std::log(rng.next_uniform()) / std::log(rx));
    double w = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) {
        w += sample_eq_truncated(*tp.dist, x, rng);
    }
    return w;
}

double sample_sojourn_fb_of_size(const TrafficPoint& tp, double x, RandomStream& rng,
                                 std::uint64_t max_events) {
    if (!(x >= 0.0)) throw std::domain_error("sample_sojourn_fb_of_size requires x >= 0");
    double level = sample_waiting_trunc(tp, x, rng) + x;
    if (tp.lambda == 0.0) return level;
    double t = 0.0;
    std::uint64_t events = 0;
    while (true) {
        const double gap = rng.next_exponential(tp.lambda);
        if (level <= gap) return t + level;
        t += gap;
        level -= gap;
        level += std::min(sample(*tp.dist, rng), x);
        if (++events > max_events) {
            throw SimulationError("busy-period sampler hit the event wall");
        }
    }
}

WToExpCheck check_w_to_exp(const ServiceDistribution& d, double nu, double rho, std::size_t n,
                           std::uint64_t seed) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::domain_error("check_w_to_exp requires nu in (0,1)");
    if (nu <= 1.0 - rho) {
        throw std::domain_error("check_w_to_exp requires nu > 1 - rho");
    }
    const double u = 1.0 - (1.0 - rho) / rho * (1.0 - nu) / nu;
    const double x = g_inverse(d, u);
    const double target_mean = nu * d.eq_mean();

    TrafficPoint tp = TrafficPoint::from_rho(d, rho);
    RandomStream rng(seed, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = (1.0 - rho) * sample_waiting_trunc(tp, x, rng);
    }
    const double ks = empirical_ks(
        scaled, [target_mean](double w) { return -std::expm1(-w / target_mean); });
    return {ks, target_mean, x};
}

}  // namespace fbq
