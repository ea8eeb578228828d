#include "renergy/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "renergy/errors.hpp"

namespace renergy {

double ChannelSpec::noise_watts() const { return std::pow(10.0, (noise_dbm - 30.0) / 10.0); }

double ChannelSpec::ref_gain() const { return std::pow(10.0, -ref_loss_db / 10.0); }

ChannelSpec make_channel_spec(double alpha, double ref_loss_db, double ref_dist, double noise_dbm,
                              Fading fading) {
  require(std::isfinite(alpha) && alpha > 2, "channel.alpha > 2");
  require(std::isfinite(ref_loss_db), "channel.ref_loss_db finite");
  require(std::isfinite(ref_dist) && ref_dist > 0, "channel.ref_dist > 0");
  require(std::isfinite(noise_dbm), "channel.noise_dbm finite");
  if (const auto* c = std::get_if<ChiSquared>(&fading)) {
    require(c->omega >= 1, "channel.omega >= 1");
  } else {
    const auto& r = std::get<TruncatedRician>(fading);
    require(r.floor > 0 && r.floor < 1, "0 < channel.floor < 1");
    require(r.scatter > 0, "channel.rician_scatter > 0");
  }
  return ChannelSpec{alpha, ref_loss_db, ref_dist, noise_dbm, fading};
}

ChannelSpec normalized_channel(double alpha, Fading fading) {
  return make_channel_spec(alpha, 0.0, 1.0, 30.0, fading);
}

std::string describe(const Fading& f) {
  std::ostringstream os;
  if (const auto* c = std::get_if<ChiSquared>(&f)) {
    os << "chi2(" << c->omega << ")";
  } else {
    const auto& r = std::get<TruncatedRician>(f);
    os << "rician(floor=" << r.floor << ",scatter=" << r.scatter << ")";
  }
  return os.str();
}

FadingDraw sample_fading(const ChannelSpec& spec, Rng& rng) {
  if (const auto* c = std::get_if<ChiSquared>(&spec.fading)) {
    double h = 0;
    for (int k = 0; k < c->omega; ++k) h -= std::log(1.0 - rng.uniform());
    // A zero gain would make the required power infinite; it has probability 0
    // but 1 - u can round to 1.
    return {h > 0 ? h : std::numeric_limits<double>::min()};
  }
  const auto& r = std::get<TruncatedRician>(spec.fading);
  std::normal_distribution<double> g(0.0, std::sqrt(r.scatter / 2.0));
  const double re = 1.0 + g(rng);
  const double im = g(rng);
  return {std::max(re * re + im * im, r.floor)};
}

namespace {

// Density of |Z|^2 for Z = 1 + CN(0, s2).
double rician_power_pdf(double u, double s2) {
  if (u <= 0) return std::exp(-1.0 / s2) / s2;
  const double z = 2.0 * std::sqrt(u) / s2;
  return std::exp(-(u + 1.0) / s2) * std::cyl_bessel_i(0.0, z) / s2;
}

template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double rician_upper(double s2) {
  // Beyond (1 + 12 sigma)^2 the density is below e^-140.
  const double t = 1.0 + 12.0 * std::sqrt(s2);
  return t * t;
}

}  // namespace

double fading_cdf(double t, const ChannelSpec& spec) {
  if (t <= 0) return 0.0;
  if (const auto* c = std::get_if<ChiSquared>(&spec.fading)) {
    // Regularized lower incomplete gamma for integer shape.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < c->omega; ++k) {
      term *= t / k;
      sum += term;
    }
    return -std::expm1(-t) - (sum - 1.0) * std::exp(-t);
  }
  const auto& r = std::get<TruncatedRician>(spec.fading);
  if (t < r.floor) return 0.0;
  const double hi = std::min(t, rician_upper(r.scatter));
  return std::min(1.0, simpson([&](double u) { return rician_power_pdf(u, r.scatter); }, 0.0, hi, 20000));
}

double mean_inverse_fading(const ChannelSpec& spec) {
  if (const auto* c = std::get_if<ChiSquared>(&spec.fading)) {
    require_domain(c->omega >= 2, "E[1/H] is infinite for chi-squared fading with omega = 1");
    return 1.0 / (c->omega - 1);
  }
  const auto& r = std::get<TruncatedRician>(spec.fading);
  auto pdf = [&](double u) { return rician_power_pdf(u, r.scatter); };
  const double mass_at_floor = simpson(pdf, 0.0, r.floor, 2000);
  const double hi = rician_upper(r.scatter);
  const double tail = simpson([&](double u) { return pdf(u) / u; }, r.floor, hi, 40000);
  return mass_at_floor / r.floor + tail;
}

double path_gain(double d, const ChannelSpec& spec) {
  require_domain(d > 0, "path_gain: need d > 0");
  return spec.ref_gain() * std::pow(d / spec.ref_dist, -spec.alpha);
}

double clamped_path_gain(double d, const ChannelSpec& spec, bool& clamped) {
  const double floor = min_gain_distance(spec);
  clamped = d < floor;
  return path_gain(clamped ? floor : d, spec);
}

double required_power(double theta, double d, FadingDraw h, const ChannelSpec& spec) {
  require_domain(theta > 0, "required_power: need theta > 0");
  return theta * spec.noise_watts() / (h.h * path_gain(d, spec));
}

double effective_threshold(double theta, const ChannelSpec& spec) {
  return theta * spec.noise_watts() / (spec.ref_gain() * std::pow(spec.ref_dist, spec.alpha));
}

}  // namespace renergy
