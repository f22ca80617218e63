#pragma once

#include <span>

namespace ots {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> x);
double pooled_sd(std::span<const double> a, std::span<const double> b);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_greater = 0.5;  // one-sided p for mean(a) > mean(b)
};

/// Welch's unequal-variance t test. Identical samples give t = 0, p = 0.5.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

struct SignTestResult {
  int positive = 0;
  int negative = 0;
  double p_greater = 1.0;  // P(X >= positive) under Binomial(positive + negative, 1/2)
};

/// Paired sign test for a > b; ties are dropped.
SignTestResult sign_test(std::span<const double> a, std::span<const double> b);

}  // namespace ots
