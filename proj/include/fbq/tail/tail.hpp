#pragma once

#include "fbq/analytic/sojourn.hpp"
#include "fbq/dist/mda.hpp"
#include "fbq/dist/service.hpp"
#include "fbq/numerics/quadrature.hpp"

namespace fbq {

// Parameters of the limiting residual-sojourn density g*: the tail exponent
// p(H) in (0,2), the equilibrium mean E[B*], and the normalizing constant
// r(H) = Gamma(2-p) Gamma(1+p).
struct TailParams {
    double p_H;
    double eq_mean;
    double r_H;

    static TailParams from_p(double p_H, double eq_mean);
    static TailParams from_mda(const MdaInfo& mda, double eq_mean);
};

// f(t) = 2 sqrt(t/pi) - 2 t e^t erfc(sqrt(t)), evaluated through erfcx so it
// never forms e^t. Laplace transform: 1/(sqrt(q)(sqrt(q)+1)^2).
double f_kernel(double t);

// g(t,nu) = e^{-s} f(s) / (4 E[B*] nu^2) with s = t/(4 E[B*] nu^2).
// Total mass in t is 1/4 for every nu.
double g_kernel(double t, double nu, double eq_mean);

// g*(t) = r^{-1} Int_0^1 8 nu g(t,nu) ((1-nu)/nu)^p dnu; the limit density of
// (1-rho)^2 T*_FB.
double g_star(double t, const TailParams& params,
              const QuadratureSpec& spec = {1e-10, 1e-9, 4000});

// Laplace transform of g*:
//   r^{-1} Int_0^1 8 nu / (sqrt(1+4Eq nu^2)(sqrt(1+4Eq nu^2)+1)^2) ((1-nu)/nu)^p dnu.
double laplace_residual(double q, const TailParams& params,
                        const QuadratureSpec& spec = {1e-11, 1e-10, 4000});

// The limit of P((1-rho)^2 T_FB > e(q)) / Fbar(Ginv(rho)); equals
// q r(H) E[B*] laplace_residual(q).
double ttail_limit(double q, const TailParams& params,
                   const QuadratureSpec& spec = {1e-11, 1e-10, 4000});

// Limit of the right inverse of the Laplace exponent:
// Phi(nu,q) = (sqrt(1+4 E[B*] q nu^2) - 1) / (2 E[B*] nu); solves
// s/nu + E[B*] s^2 = q.
double phi_limit(double nu, double q, double eq_mean);

// psi(x, rho, s) = s/(1-rho) - lambda/(1-rho)^2 (1 - E[e^{-(1-rho)s(B^x)}]);
// the Laplace exponent of the scaled truncated workload-drift process.
double laplace_exponent(const TrafficPoint& tp, double x, double s);

}  // namespace fbq
