#include "renergy/scenario.hpp"

#include <cmath>
#include <variant>

#include "renergy/errors.hpp"

namespace renergy {

void validate(const ScenarioConfig& cfg) {
  const auto& f = cfg.field;
  require(f.gamma > 0, "field.gamma > 0");
  require(f.lambda_e > 0, "field.lambda_e > 0");
  require(f.nu > 0, "field.nu > 0");

  const auto& ch = cfg.channel;
  require(ch.alpha > 2, "channel.alpha > 2");
  require(ch.ref_dist > 0, "channel.ref_dist > 0");
  require(std::isfinite(ch.ref_loss_db), "channel.ref_loss_db finite");
  require(std::isfinite(ch.noise_dbm), "channel.noise_dbm finite");
  if (const auto* c = std::get_if<ChiSquared>(&ch.fading)) {
    require(c->omega >= 1, "channel.omega >= 1");
  } else {
    const auto& r = std::get<TruncatedRician>(ch.fading);
    require(r.floor > 0 && r.floor < 1, "0 < channel.rician_floor < 1");
    require(r.scatter > 0, "channel.rician_scatter > 0");
  }

  require(cfg.lambda_b > 0, "network.lambda_b > 0");
  require(cfg.lambda_u > 0, "network.lambda_u > 0");
  require(cfg.theta > 0, "theta > 0");
  require(cfg.eta > 0 && cfg.eta <= 1, "0 < eta <= 1");
  require(cfg.circuit_power >= 0, "scenario.circuit_power >= 0");
  require(cfg.window_side >= 0, "sim.window_side >= 0");

  if (cfg.distributed) {
    const auto& d = *cfg.distributed;
    require(d.lambda_a > 0, "aggregation.lambda_a > 0");
    require(d.lambda_h >= d.lambda_a, "aggregation.lambda_h >= aggregation.lambda_a");
    const double ratio = cfg.lambda_b / d.lambda_a;
    require(ratio >= 1 - 1e-9 && std::abs(ratio - std::round(ratio)) < 1e-6 * ratio,
            "network.lambda_b / aggregation.lambda_a integer-valued");
    const double size = d.cluster_size();
    require(std::abs(size - std::round(size)) < 1e-6 * size,
            "aggregation.lambda_h / aggregation.lambda_a integer-valued");
    require(d.line.beta > 0, "line.beta > 0");
    require(d.line.tau > 0 && d.line.tau < 1, "0 < line.tau < 1");
    require(d.line.voltage > 0, "line.voltage > 0");
  }
}

std::string_view to_string(Scheme s) {
  return s == Scheme::ChannelIndependent ? "independent" : "inversion";
}

std::string_view to_string(KSampling k) {
  return k == KSampling::Poisson ? "poisson" : "size_biased";
}

std::string_view to_string(VoltageRule r) { return r == VoltageRule::Fixed ? "fixed" : "prop6"; }

std::string_view to_string(DeliveryModel d) {
  return d == DeliveryModel::Exact ? "exact" : "tau_floor";
}

}  // namespace renergy
