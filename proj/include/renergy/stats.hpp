#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace renergy {

struct Interval {
  double lo = 0;
  double hi = 1;
  double halfwidth() const { return 0.5 * (hi - lo); }
};

// Wilson score interval for a binomial proportion.
Interval wilson_ci(std::uint64_t successes, std::uint64_t n, double level = 0.95);

// Two-sided standard normal quantile for a confidence level (1.96 at 0.95).
double normal_quantile_two_sided(double level);

// Pr(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

// Asymptotic critical value c/sqrt(n) with Pr(K > c) = level.
double ks_critical_value(std::size_t n, double level);

struct KsResult {
  double statistic = 0;  // sup |F_n - F|
  double critical = 0;
  double p_value = 1;    // asymptotic
  std::size_t n = 0;
  bool pass = false;     // statistic below the critical value
};

inline constexpr std::size_t kMinKsSamples = 100;

// One-sample Kolmogorov-Smirnov test against a continuous CDF. Sorts a copy
// of the samples. Throws InvalidParameter for fewer than kMinKsSamples.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                 double level = 0.01);

struct SampleMoments {
  double mean = 0;
  double variance = 0;  // unbiased
  std::size_t n = 0;

  double std_error() const;  // of the mean
};

SampleMoments sample_moments(const std::vector<double>& xs);

// Least-squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace renergy
