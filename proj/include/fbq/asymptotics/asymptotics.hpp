#pragma once

#include <string>

#include "fbq/analytic/sojourn.hpp"
#include "fbq/dist/mda.hpp"
#include "fbq/dist/service.hpp"

namespace fbq {

enum class RateKind { FiniteVarianceRate, LogRate, AtomRate };

// The heavy-traffic dichotomy: which functional E[T_FB] tracks as rho -> 1,
// with its exact limit constant.
struct AsymptoticRegime {
    RateKind kind;
    double leading_constant;
    std::string rate_description;
};

AsymptoticRegime classify_regime(const ServiceDistribution& d);

// The limit constant r(H): (pi/(a-1))/sin(pi/(a-1)) * a/(a-1) for Frechet(a),
// 1 for Gumbel, (pi/(a+1))/sin(pi/(a+1)) * a/(a+1) for Weibull(a), 1 for the
// endpoint atom (the atom mass enters separately).
double r_of(const MdaInfo& mda);

struct GrowthFunctional {
    double value;             // Fbar(Ginv(rho)) / (1-rho)^2
    double via_failure_rate;  // E[B] h*(Ginv(rho)) / (1-rho), same quantity
};

GrowthFunctional growth_functional(const TrafficPoint& tp);

// Regime-dispatched closed-form mean:
//   log regime:   (a/(2-a)) E[B] log(1/(1-rho))
//   MDA regime:   r(H) E[B*] Fbar(Ginv(rho)) / (1-rho)^2
//   atom regime:  p E[B*] / (1-rho)^2
double asymptotic_mean_fb(const TrafficPoint& tp);

// The two Pareto closed forms (alpha in (1,2) and alpha > 2).
double asymptotic_mean_pareto(double alpha, double xl, double rho);

// Closed-form rows for Gumbel-MDA families (Exponential, Weibull, Gamma,
// LogNormal). The LogNormal row needs rho >= 0.99 for its nested log-log.
double gumbel_table_mean(const TrafficPoint& tp);

// FB/SRPT mean ratio limit: alpha^2 (Pareto alpha in (1,2)),
// alpha^{alpha/(alpha-1)} (Pareto alpha > 2), beta log(1/(1-rho)) (Weibull).
double srpt_ratio_asymptotic(const TrafficPoint& tp);

}  // namespace fbq
