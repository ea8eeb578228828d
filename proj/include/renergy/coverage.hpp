#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "renergy/scenario.hpp"

namespace renergy {

// Mobiles of the typical cell, positioned relative to the typical BS.
struct TypicalCell {
  std::vector<double> distance;       // km
  std::vector<FadingDraw> fading;
  std::vector<double> required;       // power for SNR = theta at each user [W]
  std::size_t counted = 0;            // users [0, counted) enter the estimator
  std::size_t clamped = 0;            // users closer than min_gain_distance
};

TypicalCell draw_typical_cell(const ScenarioConfig& cfg, Rng& users, Rng& fading);

// Outage indicator per user of the cell at transmit budget p0.
std::vector<bool> channel_independent_outages(const TypicalCell& cell, double p0);

struct InversionOutcome {
  std::vector<bool> outage;
  bool union_event = false;  // sum of required powers exceeds p0
};

// Users served in ascending order of required power until the budget runs
// out; this serves the largest possible number of users.
InversionOutcome channel_inversion_outages(const TypicalCell& cell, double p0);

// One trial with a fixed budget: draws K0 users in the typical hexagonal cell
// from rng and returns their outage indicators.
std::vector<bool> trial_channel_independent(const ScenarioConfig& cfg, double p0, Rng& rng);
InversionOutcome trial_channel_inversion(const ScenarioConfig& cfg, double p0, Rng& rng);

struct PowerStats {
  std::uint64_t n = 0;
  double sum = 0;
  double sum_sq = 0;
  double min = std::numeric_limits<double>::infinity();

  void add(double p);
  void merge(const PowerStats& o);
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const;  // unbiased
};

// Per-user tallies of one block of trials.
struct OutageTally {
  std::uint64_t trials = 0;
  std::uint64_t users = 0;
  std::uint64_t outages = 0;
  std::uint64_t outages_max_power = 0;  // still in outage at the maximum budget
  std::uint64_t union_users = 0;        // users in cells whose union event occurred
  std::uint64_t clamped = 0;
  PowerStats power;                     // typical-BS budget per trial

  void merge(const OutageTally& o);
};

// Evaluates one drawn cell at budget p0; p0_max is the budget at a flat field
// (eta*gamma on site), used to split outages into energy-randomness and
// max-power components.
void tally_cell(const ScenarioConfig& cfg, const TypicalCell& cell, double p0, double p0_max,
                OutageTally& tally);

struct OutageEstimate {
  double p_out = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double ci_halfwidth = 0;
  std::uint64_t n_trials = 0;
  std::uint64_t n_users_observed = 0;
  std::uint64_t n_outages = 0;
  double p_energy_random = 0;  // outages that vanish at the maximum budget
  double p_max_power = 0;      // outages that persist at the maximum budget
  double p_union = std::numeric_limits<double>::quiet_NaN();  // channel inversion only
  std::uint64_t n_clamped = 0;
  bool low_confidence = false;  // fewer than kMinUsers users observed
  PowerStats power;
  std::map<std::string, double> bound_values;
};

inline constexpr std::uint64_t kMinUsers = 100;

OutageEstimate finalize(const OutageTally& tally);

// Side of the default square window: large against the cell, the decay length
// and the energy-centre spacing.
double default_window_side(const ScenarioConfig& cfg);
Window onsite_window(const ScenarioConfig& cfg);

// On-site harvesters: P0 = eta * g(B0) - circuit power, fresh field per trial.
OutageEstimate simulate_onsite(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                               int workers = 1);

// Same estimator with a deterministic budget (flat-field control).
OutageEstimate simulate_fixed_power(const ScenarioConfig& cfg, double p0, std::uint64_t n_trials,
                                    std::uint64_t seed, int workers = 1);

}  // namespace renergy
