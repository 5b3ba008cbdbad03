#pragma once

#include <span>
#include <vector>

namespace bsdelab {

double mean(std::span<const double> xs);
double variance(std::span<const double> xs); // unbiased
double standard_error(std::span<const double> xs);
double rmse(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> xs);

// Pearson correlation of two equally sized samples.
double correlation(std::span<const double> a, std::span<const double> b);

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);
// Critical value at significance alpha for sample sizes (n, m).
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

double normal_pdf(double x);
double normal_cdf(double x);

} // namespace bsdelab
