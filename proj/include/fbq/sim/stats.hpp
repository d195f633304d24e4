#pragma once

#include <functional>
#include <vector>

namespace fbq {

// Kolmogorov-Smirnov sup-distance between the empirical CDF of samples and
// cdf. Throws std::invalid_argument on an empty sample.
double empirical_ks(std::vector<double> samples, const std::function<double(double)>& cdf);

// P(sample > y) for a sorted sample.
double empirical_ccdf_at(const std::vector<double>& sorted_samples, double y);

// Ratio estimate and regenerative standard error for per-cycle sums:
// estimates E[x]/E[n] from (x_i, n_i) cycle pairs.
struct RatioEstimate {
    double value;
    double std_error;
};
RatioEstimate regenerative_ratio(const std::vector<double>& cycle_sums,
                                 const std::vector<double>& cycle_counts);

}  // namespace fbq
