#include "fbq/tail/tail.hpp"

#include <cmath>

#include "fbq/numerics/special.hpp"

namespace fbq {

namespace {

constexpr double kSqrtPiInv = 0.56418958354775628695;  // 1/sqrt(pi)

// Certified bound: e^{-s} f(s) <= 2 sqrt(s/pi) e^{-s} <= 0.484 for all s >= 0.
constexpr double kKernelSup = 0.484;

}  // namespace

TailParams TailParams::from_p(double p_H, double eq_mean) {
    if (!(p_H > 0.0 && p_H < 2.0)) throw std::domain_error("TailParams requires p_H in (0,2)");
    if (!(eq_mean > 0.0)) throw std::domain_error("TailParams requires eq_mean > 0");
    return TailParams{p_H, eq_mean, gamma_fn(2.0 - p_H) * gamma_fn(1.0 + p_H)};
}

TailParams TailParams::from_mda(const MdaInfo& mda, double eq_mean) {
    if (!mda.p_H || !mda.r_H) {
        throw UnsupportedRegimeError("tail limit needs a finite-variance MDA class (got " +
                                     mda.class_name() + ")");
    }
    TailParams params{*mda.p_H, eq_mean, *mda.r_H};
    const double gamma_route = gamma_fn(2.0 - params.p_H) * gamma_fn(1.0 + params.p_H);
    if (std::abs(params.r_H - gamma_route) > 1e-10 * std::max(1.0, gamma_route)) {
        throw std::logic_error("r_H violates the Gamma normalization identity");
    }
    return params;
}

double f_kernel(double t) {
    if (t < 0.0) throw std::domain_error("f_kernel requires t >= 0");
    if (t == 0.0) return 0.0;
    const double s = std::sqrt(t);
    return 2.0 * s * kSqrtPiInv - 2.0 * t * erfcx(s);
}

double g_kernel(double t, double nu, double eq_mean) {
    if (!(nu > 0.0)) throw std::domain_error("g_kernel requires nu > 0");
    if (t < 0.0) throw std::domain_error("g_kernel requires t >= 0");
    const double scale = 4.0 * eq_mean * nu * nu;
    const double s = t / scale;
    if (s > 745.0) return 0.0;  // e^{-s} underflows; the product is below 1e-320
    return std::exp(-s) * f_kernel(s) / scale;
}

namespace {

// Shared evaluation of r^{-1} Int_0^1 8 nu K(nu) ((1-nu)/nu)^p dnu with
// endpoint-refined dyadic bands. left_tail_bound(eps) must bound the exact
// remainder Int_0^eps of the full integrand; the nu->1 remainder uses
// K <= k_sup_right.
double nu_mixture(const std::function<double(double)>& kernel, double p, double r_H,
                  double k_sup_right, const std::function<double(double)>& left_tail_bound,
                  const QuadratureSpec& spec) {
    auto integrand = [&](double nu) {
        const double k = kernel(nu);
        if (k == 0.0) return 0.0;
        return 8.0 * nu * k * std::pow((1.0 - nu) / nu, p) / r_H;
    };

    // nu -> 0: halve eps until the certified remainder is negligible.
    double eps = 0.25;
    while (left_tail_bound(eps) / r_H > 0.25 * spec.abs_tol) {
        eps *= 0.5;
        if (eps < 1e-290) break;
    }
    // nu -> 1: remainder over (1-delta, 1) is bounded by
    // 8 k_sup (delta/(1-delta))^p delta / r.
    double delta = 0.25;
    while (8.0 * k_sup_right * std::pow(delta / (1.0 - delta), p) * delta / r_H >
           0.25 * spec.abs_tol) {
        delta *= 0.5;
        if (delta < 1e-290) break;
    }

    // Per-band budget: bands are dyadic, so a few hundred at most.
    const QuadratureSpec band{spec.abs_tol / 1024.0, spec.rel_tol, spec.max_subdivisions};
    double total = 0.0;
    for (double a = eps; a < 0.5; a *= 2.0) {
        total += integrate(integrand, a, std::min(2.0 * a, 0.5), band).value;
    }
    for (double w = 0.5; w > delta; w *= 0.5) {
        total += integrate(integrand, 1.0 - w, std::min(1.0 - 0.5 * w, 1.0 - delta), band).value;
    }
    return total;
}

}  // namespace

double g_star(double t, const TailParams& params, const QuadratureSpec& spec) {
    if (t < 0.0) throw std::domain_error("g_star requires t >= 0");
    if (t == 0.0) return 0.0;
    const double E = params.eq_mean;
    const double p = params.p_H;

    auto kernel = [&](double nu) { return g_kernel(t, nu, E); };
    // Int_0^eps 8 nu g(t,nu) nu^{-p} dnu transformed to the s-scale:
    // <= (1/E)(4E/t)^{p/2} (2/sqrt(pi)) e^{-s}(sqrt(s)+1), s = t/(4E eps^2),
    // once s >= 1.
    auto left_bound = [&](double eps) {
        const double s = t / (4.0 * E * eps * eps);
        if (s < 1.0) return kInf;  // not yet in the certified region
        if (s > 745.0) return 0.0;
        return (1.0 / E) * std::pow(4.0 * E / t, 0.5 * p) * 2.0 * kSqrtPiInv * std::exp(-s) *
               (std::sqrt(s) + 1.0);
    };
    const double k_sup_right = kKernelSup / (4.0 * E * 0.5 * 0.5);
    return nu_mixture(kernel, p, params.r_H, k_sup_right, left_bound, spec);
}

double laplace_residual(double q, const TailParams& params, const QuadratureSpec& spec) {
    if (q < 0.0) throw std::domain_error("laplace_residual requires q >= 0");
    const double c = 4.0 * params.eq_mean * q;
    auto kernel = [c](double nu) {
        const double root = std::sqrt(1.0 + c * nu * nu);
        return 1.0 / (root * (root + 1.0) * (root + 1.0));
    };
    // K <= 1/4 everywhere: Int_0^eps <= 2 eps^{2-p}/(2-p).
    auto left_bound = [&](double eps) {
        return 2.0 * std::pow(eps, 2.0 - params.p_H) / (2.0 - params.p_H);
    };
    return nu_mixture(kernel, params.p_H, params.r_H, 0.25, left_bound, spec);
}

double ttail_limit(double q, const TailParams& params, const QuadratureSpec& spec) {
    if (q < 0.0) throw std::domain_error("ttail_limit requires q >= 0");
    if (q == 0.0) return 0.0;
    const double E = params.eq_mean;
    const double c = 4.0 * E * q;
    auto kernel = [c, E, q](double nu) {
        const double root = std::sqrt(1.0 + c * nu * nu);
        return E * q / (root * (root + 1.0) * (root + 1.0));
    };
    auto left_bound = [&](double eps) {
        return 2.0 * E * q * std::pow(eps, 2.0 - params.p_H) / (2.0 - params.p_H);
    };
    // The Proposition integral carries no 1/r(H); feed r = 1 and keep the
    // kernel bound consistent.
    return nu_mixture(kernel, params.p_H, 1.0, 0.25 * E * q, left_bound, spec);
}

double phi_limit(double nu, double q, double eq_mean) {
    if (!(nu > 0.0)) throw std::domain_error("phi_limit requires nu > 0");
    if (q < 0.0) throw std::domain_error("phi_limit requires q >= 0");
    const double z = 4.0 * eq_mean * q * nu * nu;
    return 2.0 * q * nu / (std::sqrt(1.0 + z) + 1.0);
}

double laplace_exponent(const TrafficPoint& tp, double x, double s) {
    if (s < 0.0) throw std::domain_error("laplace_exponent requires s >= 0");
    if (s == 0.0) return 0.0;
    const double omrho = 1.0 - tp.rho;
    const double theta = omrho * s;
    const double complement = truncated_lst_complement(*tp.dist, x, theta);
    return s / omrho - tp.lambda / (omrho * omrho) * complement;
}

}  // namespace fbq
