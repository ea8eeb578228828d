#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include "renergy/channel.hpp"
#include "renergy/energy_field.hpp"

namespace renergy {

enum class Scheme {
  ChannelIndependent,  // equal split of P0 over the K0 users
  ChannelInversion,    // per-user power theta * noise / (H * gain)
};

// How the typical user's cell population is drawn. Both target the same
// per-user outage probability (a Poisson cell seen from one of its users is the
// user plus an independent Poisson population).
enum class KSampling {
  Poisson,     // K0 ~ Poisson(lambda_u/lambda_b), every user counted
  SizeBiased,  // K0 = 1 + Poisson(lambda_u/lambda_b), only the tagged user counted
};

enum class VoltageRule {
  Fixed,  // LineSpec::voltage volts (infinity = lossless lines)
  Prop6,  // smallest voltage guaranteeing transfer efficiency tau everywhere
};

enum class DeliveryModel {
  Exact,     // delivered D solves D + beta D^2 d / V^2 = harvested
  TauFloor,  // delivered = tau * harvested
};

struct LineSpec {
  double beta = 1.0;  // loss constant: loss [W] = beta P^2 d / V^2 with d in km
  double tau = 0.9;   // target transfer efficiency
  VoltageRule rule = VoltageRule::Fixed;
  double voltage = std::numeric_limits<double>::infinity();
  DeliveryModel delivery = DeliveryModel::Exact;

  bool operator==(const LineSpec&) const = default;
};

struct DistributedSpec {
  double lambda_h = 15.6;  // harvester lattice density [1/km^2]
  double lambda_a = 0.78;  // aggregator lattice density [1/km^2]
  LineSpec line;

  double cluster_size() const { return lambda_h / lambda_a; }
  bool operator==(const DistributedSpec&) const = default;
};

struct ScenarioConfig {
  EnergyFieldSpec field;
  ChannelSpec channel;
  double lambda_b = 0.78;
  double lambda_u = 7.8;
  double theta = 8;
  double eta = 1;  // harvester aperture
  Scheme scheme = Scheme::ChannelIndependent;
  std::optional<DistributedSpec> distributed;  // empty: on-site harvesters
  double circuit_power = 0;                    // subtracted from P0
  KSampling k_sampling = KSampling::Poisson;
  double window_side = 0;  // 0 selects an automatic side
  bool wrap = true;

  double gamma_eta() const { return field.gamma * eta; }
  double mean_users() const { return lambda_u / lambda_b; }
  bool on_site() const { return !distributed.has_value(); }
  bool operator==(const ScenarioConfig&) const = default;
};

// Throws InvalidParameter naming the violated constraint.
void validate(const ScenarioConfig& cfg);

std::string_view to_string(Scheme s);
std::string_view to_string(KSampling k);
std::string_view to_string(VoltageRule r);
std::string_view to_string(DeliveryModel d);

}  // namespace renergy
