#include "fbq/asymptotics/asymptotics.hpp"

#include <cmath>

namespace fbq {

namespace {

double log_bench(double rho) { return -std::log1p(-rho); }

}  // namespace

double r_of(const MdaInfo& mda) {
    return limit_constant(mda.cls, mda.alpha);
}

AsymptoticRegime classify_regime(const ServiceDistribution& d) {
    const MdaInfo info = mda_info(d);
    switch (info.cls) {
        case MdaClass::InfiniteVarianceRV:
            return {RateKind::LogRate, info.alpha / (2.0 - info.alpha) * d.mean(),
                    "log(1/(1-rho))"};
        case MdaClass::AtomAtEndpoint:
            return {RateKind::AtomRate, info.atom_mass * d.eq_mean(), "1/(1-rho)^2"};
        default:
            return {RateKind::FiniteVarianceRate, r_of(info) * d.eq_mean(),
                    "Fbar(Ginv(rho))/(1-rho)^2"};
    }
}

GrowthFunctional growth_functional(const TrafficPoint& tp) {
    const ServiceDistribution& d = *tp.dist;
    const double x = g_inverse(d, tp.rho);
    const double omr = 1.0 - tp.rho;
    GrowthFunctional g;
    g.value = ccdf(d, x) / (omr * omr);
    g.via_failure_rate = d.mean() * failure_rate_eq(d, x) / omr;
    return g;
}

double asymptotic_mean_fb(const TrafficPoint& tp) {
    const ServiceDistribution& d = *tp.dist;
    const MdaInfo info = mda_info(d);
    const double omr = 1.0 - tp.rho;
    switch (info.cls) {
        case MdaClass::InfiniteVarianceRV:
            return info.alpha / (2.0 - info.alpha) * d.mean() * log_bench(tp.rho);
        case MdaClass::AtomAtEndpoint:
            return info.atom_mass * d.eq_mean() / (omr * omr);
        default: {
            const double x = g_inverse(d, tp.rho);
            return r_of(info) * d.eq_mean() * ccdf(d, x) / (omr * omr);
        }
    }
}

double asymptotic_mean_pareto(double alpha, double xl, double rho) {
    if (!(alpha > 1.0) || alpha == 2.0) {
        throw std::domain_error("asymptotic_mean_pareto requires alpha in (1,2) or (2,inf)");
    }
    if (alpha < 2.0) {
        const double mean = alpha * xl / (alpha - 1.0);
        return alpha / (2.0 - alpha) * mean * log_bench(rho);
    }
    const double m2inf = alpha * xl * xl / (alpha - 2.0);
    const double arg = M_PI / (alpha - 1.0);
    return arg / (2.0 * std::sin(arg)) * m2inf * std::pow(alpha, alpha / (alpha - 1.0)) /
           (xl * std::pow(1.0 - rho, (alpha - 2.0) / (alpha - 1.0)));
}

double gumbel_table_mean(const TrafficPoint& tp) {
    const ServiceDistribution& d = *tp.dist;
    const double omr = 1.0 - tp.rho;
    const double lb = log_bench(tp.rho);
    if (const auto* e = std::get_if<Exponential>(&d.family())) {
        return d.second_moment() * e->mu / (2.0 * omr);
    }
    if (const auto* w = std::get_if<Weibull>(&d.family())) {
        return w->beta * std::pow(w->mu, 1.0 / w->beta) * d.second_moment() /
               (2.0 * omr * std::pow(lb, 1.0 / w->beta - 1.0));
    }
    if (const auto* g = std::get_if<GammaDist>(&d.family())) {
        return d.second_moment() * g->beta / (2.0 * omr);
    }
    if (const auto* ln = std::get_if<LogNormal>(&d.family())) {
        if (tp.rho < 0.99) {
            throw std::domain_error(
                "lognormal row is evaluated only for rho >= 0.99 (nested log-log)");
        }
        const double sl = std::sqrt(2.0 * lb);
        const double norming =
            std::exp(ln->mu + ln->sigma * (sl - (std::log(4.0 * M_PI) + std::log(lb)) / (2.0 * sl)));
        return std::exp(-ln->sigma * ln->sigma) * d.second_moment() * std::sqrt(lb) /
               (ln->sigma * std::sqrt(2.0) * omr * norming);
    }
    throw UnsupportedRegimeError("no closed-form row for family " + d.name());
}

double srpt_ratio_asymptotic(const TrafficPoint& tp) {
    const ServiceDistribution& d = *tp.dist;
    if (const auto* p = std::get_if<Pareto>(&d.family())) {
        if (p->alpha < 2.0) return p->alpha * p->alpha;
        if (p->alpha > 2.0) return std::pow(p->alpha, p->alpha / (p->alpha - 1.0));
        throw std::domain_error("alpha = 2 unsupported");
    }
    if (const auto* w = std::get_if<Weibull>(&d.family())) {
        return w->beta * log_bench(tp.rho);
    }
    throw UnsupportedRegimeError("FB/SRPT ratio limit available for Pareto and Weibull only");
}

}  // namespace fbq
