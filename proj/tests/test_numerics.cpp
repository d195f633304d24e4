#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fbq/numerics/quadrature.hpp"
#include "fbq/numerics/random.hpp"
#include "fbq/numerics/roots.hpp"
#include "fbq/numerics/special.hpp"

namespace {

// Independent erfc oracle in long double: Maclaurin series of erf for small
// arguments, bottom-up continued fraction (A&S 7.1.14) for large. Never
// touches the implementation path (std::erfc / Lentz in double).
long double erfc_oracle(long double x) {
    const long double sqrt_pi = 1.772453850905516027298L;
    if (x < 3.0L) {
        long double term = x;
        long double sum = x;
        for (int n = 1; n < 300; ++n) {
            term *= -x * x / n;
            sum += term / (2 * n + 1);
            if (std::abs(term) < 1e-24L * std::abs(sum)) break;
        }
        return 1.0L - 2.0L / sqrt_pi * sum;
    }
    long double tail = 0.0L;  // bottom-up CF: 1/(x + (1/2)/(x + 1/(x + ...)))
    for (int k = 120; k >= 1; --k) {
        tail = (0.5L * k) / (x + tail);
    }
    return std::exp(-x * x) / (sqrt_pi * (x + tail));
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double poly_integral01(const std::vector<double>& coeffs) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] / (k + 1.0);
    return acc;
}

}  // namespace

TEST_CASE("integrate: polynomial and known integrals") {
    auto r = fbq::integrate([](double x) { return x; }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.err_estimate <= 1e-9);

    auto e = fbq::integrate([](double t) { return std::exp(-t); }, 0.0, fbq::kInf);
    CHECK(std::abs(e.value - 1.0) < 1e-9);
}

TEST_CASE("integrate: Laplace pair of the residual kernel at q = 1") {
    // f(t) = 2 sqrt(t/pi) - 2 t e^t erfc(sqrt(t)); Int e^{-t} f(t) dt = 1/4.
    auto f = [](double t) {
        const double s = std::sqrt(t);
        return 2.0 * std::sqrt(t / M_PI) - 2.0 * t * fbq::erfcx(s);
    };
    auto r = fbq::integrate([&](double t) { return std::exp(-t) * f(t); }, 0.0, fbq::kInf,
                            {1e-12, 1e-12, 4000});
    CHECK(std::abs(r.value - 0.25) < 1e-8);
}

TEST_CASE("integrate: failure carries best estimate and NaN names abscissa") {
    CHECK_THROWS_AS(fbq::integrate([](double x) { return std::cos(1.0 / (x + 1e-8)); }, 0.0, 1.0,
                                   {1e-15, 1e-15, 8}),
                    fbq::QuadratureError);
    try {
        fbq::integrate([](double x) { return x < 0.5 ? 1.0 : std::nan(""); }, 0.0, 1.0);
        CHECK(false);
    } catch (const fbq::QuadratureError& e) {
        CHECK(std::string(e.what()).find("NaN") != std::string::npos);
    }
}

TEST_CASE("integrate: linearity on random polynomials") {
    fbq::RandomStream rng(101, 0);
    for (int trial = 0; trial < 32; ++trial) {
        std::vector<double> f(6), g(6);
        for (auto& c : f) c = 4.0 * rng.next_uniform() - 2.0;
        for (auto& c : g) c = 4.0 * rng.next_uniform() - 2.0;
        const double a = 4.0 * rng.next_uniform() - 2.0;
        const double b = 4.0 * rng.next_uniform() - 2.0;
        auto combo = fbq::integrate(
            [&](double x) { return a * poly_eval(f, x) + b * poly_eval(g, x); }, 0.0, 1.0);
        const double expected = a * poly_integral01(f) + b * poly_integral01(g);
        CHECK(std::abs(combo.value - expected) < 1e-9 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("integrate: two distinct semi-infinite variable changes agree") {
    auto direct = fbq::integrate([](double t) { return std::exp(-t); }, 0.0, fbq::kInf,
                                 {1e-12, 1e-12, 4000});
    // t = u/(1-u^2): dt = (1+u^2)/(1-u^2)^2 du.
    auto other = fbq::integrate(
        [](double u) {
            const double om = 1.0 - u * u;
            return std::exp(-u / om) * (1.0 + u * u) / (om * om);
        },
        0.0, 1.0, {1e-12, 1e-12, 4000});
    CHECK(std::abs(direct.value - other.value) < 1e-10);
}

TEST_CASE("find_root_increasing") {
    auto id = [](double x) { return x; };
    CHECK(fbq::find_root_increasing(id, 0.5, 0.0, 1.0, 1e-13) == doctest::Approx(0.5));

    // G of Exponential(1) is Exponential(1): Ginv(1 - e^{-2}) = 2.
    auto g_exp = [](double x) { return -std::expm1(-x); };
    CHECK(fbq::find_root_increasing(g_exp, -std::expm1(-2.0), 0.0, 50.0, 1e-13) ==
          doctest::Approx(2.0).epsilon(1e-10));

    // G of Pareto(3,1) above x_L: G(x) = 1 - (1/3) x^{-2}; target 0.97 -> 10/3.
    auto g_par = [](double x) { return x <= 1.0 ? x / 1.5 : 1.0 - std::pow(x, -2.0) / 3.0; };
    CHECK(fbq::find_root_increasing(g_par, 0.97, 0.0, 100.0, 1e-13) ==
          doctest::Approx(10.0 / 3.0).epsilon(1e-10));

    // Flat level set: left endpoint.
    auto flat = [](double x) { return x < 0.25 ? 4.0 * x : (x < 0.75 ? 1.0 : 4.0 * x - 2.0); };
    CHECK(fbq::find_root_increasing(flat, 1.0, 0.0, 1.0, 1e-13) ==
          doctest::Approx(0.25).epsilon(1e-10));

    CHECK_THROWS_AS(fbq::find_root_increasing(id, 2.0, 0.0, 1.0, 1e-13), std::domain_error);
}

TEST_CASE("erfc and erfcx against the independent oracle") {
    CHECK(fbq::erfc(0.0) == 1.0);
    CHECK(std::abs(fbq::erfc(1.0) - 0.157299207050) < 1e-10);

    for (double x = 0.0; x <= 26.0; x += 0.37) {
        const long double ref = erfc_oracle(x);
        CHECK(std::abs(fbq::erfc(x) - static_cast<double>(ref)) <=
              1e-12 * static_cast<double>(ref));
    }
    for (double x = 0.5; x <= 30.0; x += 0.61) {
        const long double ref = erfc_oracle(x) * std::exp(static_cast<long double>(x) * x);
        CHECK(std::abs(fbq::erfcx(x) - static_cast<double>(ref)) <=
              1e-12 * static_cast<double>(ref));
    }
}

TEST_CASE("erfc continued-fraction lower bound") {
    for (double x : {0.5, 1.0, 2.0}) {
        const double lower = std::exp(-x * x) / (x * std::sqrt(M_PI)) *
                             (1.0 - (x * x + 1.5) / (2.0 * x * x * x * x + 6.0 * x * x + 1.5));
        CHECK(fbq::erfc(x) >= lower);
    }
}

TEST_CASE("erfc symmetry and scaled identity") {
    for (double x : {0.1, 1.0, 5.0}) {
        CHECK(std::abs(fbq::erfc(x) + fbq::erfc(-x) - 2.0) < 1e-12);
    }
    for (double x = 0.1; x <= 25.0; x += 0.83) {
        const double lhs = fbq::erfcx(x) * std::exp(-x * x);
        CHECK(std::abs(lhs - fbq::erfc(x)) <= 1e-12 * fbq::erfc(x));
    }
}

TEST_CASE("gamma_fn") {
    CHECK(fbq::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fbq::gamma_fn(4.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(std::abs(fbq::gamma_fn(0.5) - std::sqrt(M_PI)) < 1e-12 * std::sqrt(M_PI));
    CHECK_THROWS_AS(fbq::gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(fbq::gamma_fn(-1.5), std::domain_error);

    // Recurrence sweep against tgamma's own contract.
    for (double x = 0.25; x <= 29.0; x += 0.5) {
        CHECK(std::abs(fbq::gamma_fn(x + 1.0) - x * fbq::gamma_fn(x)) <=
              1e-12 * fbq::gamma_fn(x + 1.0));
    }
}

TEST_CASE("gamma_p/gamma_q: special values and complement") {
    // P(1, x) = 1 - e^{-x}.
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
        CHECK(std::abs(fbq::gamma_p(1.0, x) + std::expm1(-x)) < 1e-14);
        CHECK(std::abs(fbq::gamma_p(0.5, x) - (1.0 - erfc_oracle(std::sqrt(x)))) < 1e-13);
        CHECK(std::abs(fbq::gamma_p(3.7, x) + fbq::gamma_q(3.7, x) - 1.0) < 1e-13);
    }
}

TEST_CASE("RandomStream: determinism, open interval, moments") {
    fbq::RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    fbq::RandomStream s(42, 8);
    double sum = 0.0;
    bool open = true;
    for (int i = 0; i < 1000000; ++i) {
        const double u = s.next_uniform();
        open = open && u > 0.0 && u < 1.0;
        sum += u;
    }
    CHECK(open);
    CHECK(std::abs(sum / 1e6 - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 1e6));

    fbq::RandomStream e(42, 9);
    double esum = 0.0;
    for (int i = 0; i < 1000000; ++i) esum += e.next_exponential(2.0);
    CHECK(std::abs(esum / 1e6 - 0.5) < 3.0 * (0.5 / 1e3));

    CHECK_THROWS_AS(s.next_exponential(0.0), std::domain_error);
    CHECK_THROWS_AS(s.next_exponential(-1.0), std::domain_error);
}

TEST_CASE("RandomStream: distinct stream ids decorrelate") {
    fbq::RandomStream s0(42, 0), s1(42, 1);
    double dot = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        dot += (s0.next_uniform() - 0.5) * (s1.next_uniform() - 0.5);
    }
    // Correlation of independent uniforms: sd of the dot mean is 1/(12 sqrt(n)).
    CHECK(std::abs(dot / n) < 5.0 / (12.0 * std::sqrt(static_cast<double>(n))));
}
