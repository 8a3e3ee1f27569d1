#pragma once

#include <functional>
#include <vector>

namespace rmedge {

double mean(const std::vector<double>& x);
// Unbiased sample variance.
double sample_variance(const std::vector<double>& x);
double std_error(const std::vector<double>& x);
// Standard error of the sample variance, sqrt((m4 - s^4 (N-3)/(N-1)) / N).
double variance_std_error(const std::vector<double>& x);
double quantile(std::vector<double> x, double q);
double median(std::vector<double> x);

// sup |F_n - F|
double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// c(alpha) sqrt((n+m)/(nm)), c(alpha) = sqrt(-ln(alpha/2)/2)
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha = 0.01);

}  // namespace rmedge
