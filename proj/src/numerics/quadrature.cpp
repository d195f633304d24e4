#include "fbq/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fbq {

namespace {

// Gauss-Kronrod 7-15 abscissae and weights (positive half, QUADPACK values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        return lhs.error < rhs.error;
    }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(center - half * kXgk[i]);
        fv[14 - i] = f(center + half * kXgk[i]);
    }
    fv[7] = f(center);
    for (int i = 0; i < 15; ++i) {
        if (std::isnan(fv[i])) {
            double x = (i < 7) ? center - half * kXgk[i]
                               : (i == 7 ? center : center + half * kXgk[14 - i]);
            throw QuadratureError("integrand returned NaN at x=" + std::to_string(x), 0.0, kInf);
        }
    }

    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kWgk[i] * (fv[i] + fv[14 - i]);
    }
    for (int i = 0; i < 3; ++i) {
        resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    }

    // QUADPACK-style scaled error estimate.
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i) {
        resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    }
    resasc *= half;

    double err = std::abs(resk - resg) * half;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return Panel{a, b, resk * half, err};
}

IntegralResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                const QuadratureSpec& spec) {
    if (a == b) return {0.0, 0.0};

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> panels;
    Panel first = evaluate_panel(f, a, b);
    double total = first.value;
    double active_err = first.error;
    double frozen_err = 0.0;  // panels at floating-point resolution
    panels.push(first);

    int subdivisions = 1;
    while (active_err + frozen_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (panels.empty()) break;  // only unsplittable panels remain
        if (subdivisions >= spec.max_subdivisions) {
            throw QuadratureError("quadrature did not converge within " +
                                      std::to_string(spec.max_subdivisions) + " subdivisions",
                                  total, active_err + frozen_err);
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            active_err -= worst.error;
            frozen_err += worst.error;
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        active_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    return {total, active_err + frozen_err};
}

}  // namespace

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec) {
    if (std::isinf(b)) {
        // t = a + u/(1-u) maps u in (0,1) onto (a, inf); dt = du/(1-u)^2.
        auto g = [&f, a](double u) {
            const double om = 1.0 - u;
            const double t = a + u / om;
            const double v = f(t);
            return v == 0.0 ? 0.0 : v / (om * om);
        };
        return integrate_finite(g, 0.0, 1.0, spec);
    }
    return integrate_finite(f, a, b, spec);
}

}  // namespace fbq
