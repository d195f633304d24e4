#include "fbq/sim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbq/numerics/quadrature.hpp"

namespace fbq {

double empirical_ks(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("empirical_ks: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        const double v = samples[i];
        std::size_t j = i;
        while (j < samples.size() && samples[j] == v) ++j;  // tied block [i, j)
        const double f_at = cdf(v);
        // cdf is right-continuous; its left limit at v is its value just
        // below v, which for doubles is the previous representable number.
        const double f_below = cdf(std::nextafter(v, -kInf));
        sup = std::max(sup, std::abs(f_at - static_cast<double>(j) / n));
        sup = std::max(sup, std::abs(f_below - static_cast<double>(i) / n));
        i = j;
    }
    return sup;
}

double empirical_ccdf_at(const std::vector<double>& sorted_samples, double y) {
    const auto above =
        sorted_samples.end() - std::upper_bound(sorted_samples.begin(), sorted_samples.end(), y);
    return static_cast<double>(above) / static_cast<double>(sorted_samples.size());
}

RatioEstimate regenerative_ratio(const std::vector<double>& cycle_sums,
                                 const std::vector<double>& cycle_counts) {
    if (cycle_sums.size() != cycle_counts.size() || cycle_sums.empty()) {
        throw std::invalid_argument("regenerative_ratio: mismatched or empty cycles");
    }
    const std::size_t m = cycle_sums.size();
    double sx = 0.0;
    double sn = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += cycle_sums[i];
        sn += cycle_counts[i];
    }
    const double r = sx / sn;
    if (m == 1) return {r, 0.0};
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dev = cycle_sums[i] - r * cycle_counts[i];
        sq += dev * dev;
    }
    const double nbar = sn / static_cast<double>(m);
    const double s2 = sq / static_cast<double>(m - 1);
    return {r, std::sqrt(s2 / static_cast<double>(m)) / nbar};
}

}  // namespace fbq
