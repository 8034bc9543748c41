#pragma once

#include <functional>
#include <vector>

namespace frp::stats {

double mean(const std::vector<double>& v);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(const std::vector<double>& v);

/// CDF of the Marchenko-Pastur law with ratio 1 (support [0,4]):
/// F(x) = (2/pi) (theta + sin(2 theta)/2), theta = asin(sqrt(x)/2).
double mp1_cdf(double x);
/// Its density sqrt(x(4-x)) / (2 pi x) on (0,4].
double mp1_density(double x);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `sample`.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace frp::stats
