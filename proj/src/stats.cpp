#include "renergy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "renergy/errors.hpp"

namespace renergy {

double normal_quantile_two_sided(double level) {
  require(level > 0 && level < 1, "confidence level in (0, 1)");
  return boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + level));
}

Interval wilson_ci(std::uint64_t successes, std::uint64_t n, double level) {
  require(n >= 1, "wilson_ci: n >= 1");
  require(successes <= n, "wilson_ci: successes <= n");
  const double z = normal_quantile_two_sided(level);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lo = 0;
  if (successes == n) ci.hi = 1;
  return ci;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 0.2) return 1.0;  // the alternating series converges slowly here; Q > 0.999999
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(std::size_t n, double level) {
  require(level > 0 && level < 1, "ks level in (0, 1)");
  double lo = 0.2, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, double level) {
  require(samples.size() >= kMinKsSamples,
          "ks_test needs at least " + std::to_string(kMinKsSamples) + " samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.n = samples.size();
  r.critical = ks_critical_value(samples.size(), level);
  r.p_value = kolmogorov_survival(std::sqrt(n) * d);
  r.pass = d < r.critical;
  return r;
}

double SampleMoments::std_error() const {
  return n ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  SampleMoments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double mean = 0, m2 = 0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  m.mean = mean;
  m.variance = xs.size() > 1 ? m2 / static_cast<double>(xs.size() - 1) : 0.0;
  return m;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "ols_slope needs two or more paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace renergy
