#pragma once

#include <functional>
#include <vector>

namespace fwpoly {

// Linear-interpolation quantile (R type-7). p in [0, 1].
double quantile(std::vector<double> xs, double p);

double mean(const std::vector<double>& xs);

// Standard normal CDF.
double normal_cdf(double x);

// Ordinary least squares y = a + b x with the standard error of b and the
// 95% confidence half-width (Student t, dof = n - 2).
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double ci95_half = 0.0;
    int n = 0;
};
SlopeFit ols_slope(const std::vector<double>& x, const std::vector<double>& y);

// Two-sided 95% Student-t critical value.
double t_crit_95(int dof);

// Kolmogorov-Smirnov distance between the sample and a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace fwpoly
