#pragma once

#include <vector>

namespace eierl {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // unbiased, n-1

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

/// Welch's unequal-variance t-test. Both samples need >= 2 values.
/// Degenerate zero-variance inputs: equal means -> p = 1, else p = 0.
WelchResult welch_t_test(const std::vector<double>& sample_a,
                         const std::vector<double>& sample_b);

/// CDF of Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Regularized incomplete beta function I_x(a, b), continued-fraction form.
double incomplete_beta(double a, double b, double x);

}  // namespace eierl
