#pragma once

#include <string>
#include <variant>

#include "renergy/rng.hpp"

namespace renergy {

// Gamma(omega, 1) power gain: the sum of omega unit-mean exponentials.
struct ChiSquared {
  int omega = 1;
  bool operator==(const ChiSquared&) const = default;
};

// max(|Z|^2, floor) with Z = 1 + (sqrt(scatter)/sqrt(2)) (G1 + i G2): a
// line-of-sight component of unit power plus circular Gaussian scatter of total
// power `scatter`, truncated below at `floor`.
struct TruncatedRician {
  double floor = 0.1;
  double scatter = 1.0;
  bool operator==(const TruncatedRician&) const = default;
};

using Fading = std::variant<ChiSquared, TruncatedRician>;

struct ChannelSpec {
  double alpha = 4;          // path-loss exponent
  double ref_loss_db = 70;   // path loss at ref_dist
  double ref_dist = 0.1;     // km
  double noise_dbm = -90;
  Fading fading = TruncatedRician{};

  bool operator==(const ChannelSpec&) const = default;

  double noise_watts() const;
  // Linear gain at the reference distance.
  double ref_gain() const;
};

ChannelSpec make_channel_spec(double alpha, double ref_loss_db, double ref_dist, double noise_dbm,
                              Fading fading);

// Unit noise, gain d^-alpha with d in km: the units the closed-form bounds use.
ChannelSpec normalized_channel(double alpha, Fading fading);

std::string describe(const Fading& f);

struct FadingDraw {
  double h = 1;
};

FadingDraw sample_fading(const ChannelSpec& spec, Rng& rng);

// Pr(H <= t).
double fading_cdf(double t, const ChannelSpec& spec);

// E[1/H]. Infinite for ChiSquared(1); that case throws DomainError. The
// truncated Rician value comes from numerical quadrature of its density.
double mean_inverse_fading(const ChannelSpec& spec);

// 10^(-ref_loss/10) (d/ref_dist)^-alpha. Throws DomainError for d <= 0.
double path_gain(double d, const ChannelSpec& spec);

// Distance floor used by the simulator in place of d <= ref_dist/100.
inline double min_gain_distance(const ChannelSpec& spec) { return spec.ref_dist / 100.0; }

// path_gain with d clamped to min_gain_distance; reports whether it clamped.
double clamped_path_gain(double d, const ChannelSpec& spec, bool& clamped);

// Transmit power at which the received SNR equals theta.
double required_power(double theta, double d, FadingDraw h, const ChannelSpec& spec);

// Threshold in normalized units: outage events under (theta, spec) coincide with
// those under (effective_threshold, unit noise, gain d^-alpha).
double effective_threshold(double theta, const ChannelSpec& spec);

}  // namespace renergy
