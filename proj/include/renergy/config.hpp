#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "renergy/scenario.hpp"

namespace renergy {

struct SweepSpec {
  std::string key;  // any config key, or an alias: psi, gamma_eta, cluster_size
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<Scheme> schemes{Scheme::ChannelIndependent};
  std::optional<SweepSpec> sweep;
  std::uint64_t n_trials = 10000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::string output_path = "results.csv";

  bool operator==(const ExperimentConfig&) const = default;
};

// The simulation-section profile: lambda_b = 0.78, lambda_u = 7.8, alpha = 4,
// theta = 8, 70 dB at 100 m, -90 dBm noise, max(|CN(1,1)|^2, 0.1) fading,
// psi = 0.05, gamma eta = 1 kW on-site harvesters.
ExperimentConfig default_experiment();

// Sets one key on top of the current values. Derived keys (field.psi,
// scenario.gamma_eta, aggregation.cluster_size) are resolved against the
// current state. Throws InvalidParameter naming the key.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Canonical key for an alias (psi -> field.psi, ...); other keys unchanged.
std::string canonical_key(const std::string& key);

// Flat "key = value" text; '#' starts a comment. Unset keys keep the default
// profile; derived keys are applied after plain ones.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Plain keys only, at round-trip precision: parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& cfg);

// "KEY=v1,v2,..."
SweepSpec parse_sweep(const std::string& text);

// Scenario invariants plus: n_trials >= 1, workers >= 1, sweep values
// strictly increasing, sweep key known.
void validate(const ExperimentConfig& cfg);

// Shipped reproduction profiles.
ExperimentConfig fig4_profile();  // on-site, psi in [0.02, 0.5], both schemes
ExperimentConfig fig5_profile();  // distributed, psi = 0.05, gamma eta = 10 W, cluster-size sweep

// The scenario at one sweep point.
ScenarioConfig scenario_at(const ExperimentConfig& cfg, double sweep_value);

}  // namespace renergy
