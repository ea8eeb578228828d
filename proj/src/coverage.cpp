#include "renergy/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "renergy/errors.hpp"
#include "renergy/parallel.hpp"
#include "renergy/stats.hpp"

namespace renergy {

TypicalCell draw_typical_cell(const ScenarioConfig& cfg, Rng& users, Rng& fading) {
  std::poisson_distribution<long> count(cfg.mean_users());
  std::size_t k = static_cast<std::size_t>(count(users));
  TypicalCell cell;
  cell.counted = k;
  if (cfg.k_sampling == KSampling::SizeBiased) {
    ++k;  // the tagged user, stored first
    cell.counted = 1;
  }
  const double radius = hex_circumradius(cfg.lambda_b);
  const double noise = cfg.channel.noise_watts();
  cell.distance.reserve(k);
  cell.fading.reserve(k);
  cell.required.reserve(k);
  for (std::size_t n = 0; n < k; ++n) {
    const double d = sample_in_hexagon(radius, users).norm();
    const FadingDraw h = sample_fading(cfg.channel, fading);
    bool clamped = false;
    const double gain = clamped_path_gain(d, cfg.channel, clamped);
    if (clamped && n < cell.counted) ++cell.clamped;
    cell.distance.push_back(d);
    cell.fading.push_back(h);
    cell.required.push_back(cfg.theta * noise / (h.h * gain));
  }
  return cell;
}

std::vector<bool> channel_independent_outages(const TypicalCell& cell, double p0) {
  const std::size_t k = cell.required.size();
  std::vector<bool> out(k);
  if (k == 0) return out;
  const double share = p0 / static_cast<double>(k);
  for (std::size_t n = 0; n < k; ++n) out[n] = share < cell.required[n];
  return out;
}

InversionOutcome channel_inversion_outages(const TypicalCell& cell, double p0) {
  const std::size_t k = cell.required.size();
  InversionOutcome res;
  res.outage.assign(k, false);
  if (k == 0) return res;
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cell.required[a] < cell.required[b]; });
  double spent = 0;
  bool exhausted = false;
  for (std::size_t i : order) {
    if (!exhausted && spent + cell.required[i] <= p0) {
      spent += cell.required[i];
    } else {
      exhausted = true;  // later users cost at least as much
      res.outage[i] = true;
    }
  }
  res.union_event = exhausted;
  return res;
}

namespace {

Rng users_stream(std::uint64_t seed, std::uint64_t trial) {
  return make_stream(seed, trial, StreamId::Users);
}

Rng fading_stream(std::uint64_t seed, std::uint64_t trial) {
  return make_stream(seed, trial, StreamId::Fading);
}

}  // namespace

std::vector<bool> trial_channel_independent(const ScenarioConfig& cfg, double p0, Rng& rng) {
  require(p0 >= 0, "P0 >= 0");
  return channel_independent_outages(draw_typical_cell(cfg, rng, rng), p0);
}

InversionOutcome trial_channel_inversion(const ScenarioConfig& cfg, double p0, Rng& rng) {
  require(p0 >= 0, "P0 >= 0");
  return channel_inversion_outages(draw_typical_cell(cfg, rng, rng), p0);
}

void PowerStats::add(double p) {
  ++n;
  sum += p;
  sum_sq += p * p;
  min = std::min(min, p);
}

void PowerStats::merge(const PowerStats& o) {
  n += o.n;
  sum += o.sum;
  sum_sq += o.sum_sq;
  min = std::min(min, o.min);
}

double PowerStats::variance() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double m = sum / nn;
  return std::max(0.0, (sum_sq - nn * m * m) / (nn - 1));
}

void OutageTally::merge(const OutageTally& o) {
  trials += o.trials;
  users += o.users;
  outages += o.outages;
  outages_max_power += o.outages_max_power;
  union_users += o.union_users;
  clamped += o.clamped;
  power.merge(o.power);
}

void tally_cell(const ScenarioConfig& cfg, const TypicalCell& cell, double p0, double p0_max,
                OutageTally& tally) {
  ++tally.trials;
  tally.power.add(p0);
  tally.clamped += cell.clamped;
  const std::size_t counted = cell.counted;
  if (counted == 0) return;
  tally.users += counted;
  if (cfg.scheme == Scheme::ChannelIndependent) {
    const auto out = channel_independent_outages(cell, p0);
    const auto out_max = channel_independent_outages(cell, p0_max);
    for (std::size_t n = 0; n < counted; ++n) {
      tally.outages += out[n];
      tally.outages_max_power += out[n] && out_max[n];
    }
  } else {
    const auto res = channel_inversion_outages(cell, p0);
    const auto res_max = channel_inversion_outages(cell, p0_max);
    for (std::size_t n = 0; n < counted; ++n) {
      tally.outages += res.outage[n];
      tally.outages_max_power += res.outage[n] && res_max.outage[n];
    }
    if (res.union_event) tally.union_users += counted;
  }
}

OutageEstimate finalize(const OutageTally& t) {
  OutageEstimate e;
  e.n_trials = t.trials;
  e.n_users_observed = t.users;
  e.n_outages = t.outages;
  e.n_clamped = t.clamped;
  e.power = t.power;
  e.low_confidence = t.users < kMinUsers;
  if (t.users == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    e.p_out = e.ci_lo = e.ci_hi = e.ci_halfwidth = e.p_energy_random = e.p_max_power = nan;
    return e;
  }
  const double n = static_cast<double>(t.users);
  e.p_out = static_cast<double>(t.outages) / n;
  const Interval ci = wilson_ci(t.outages, t.users);
  e.ci_lo = ci.lo;
  e.ci_hi = ci.hi;
  e.ci_halfwidth = ci.halfwidth();
  e.p_max_power = static_cast<double>(t.outages_max_power) / n;
  e.p_energy_random = static_cast<double>(t.outages - t.outages_max_power) / n;
  return e;
}

double default_window_side(const ScenarioConfig& cfg) {
  return std::max({10.0 / std::sqrt(cfg.lambda_b), 10.0 * std::sqrt(cfg.field.nu),
                   7.0 / std::sqrt(cfg.field.lambda_e)});
}

Window onsite_window(const ScenarioConfig& cfg) {
  const double side = cfg.window_side > 0 ? cfg.window_side : default_window_side(cfg);
  return make_window(side, side, cfg.wrap);
}

namespace {

OutageEstimate finish(const ScenarioConfig& cfg, const OutageTally& tally) {
  OutageEstimate e = finalize(tally);
  if (cfg.scheme == Scheme::ChannelInversion && tally.users > 0)
    e.p_union = static_cast<double>(tally.union_users) / static_cast<double>(tally.users);
  return e;
}

}  // namespace

OutageEstimate simulate_onsite(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                               int workers) {
  validate(cfg);
  require(cfg.on_site(), "simulate_onsite needs on-site harvesters");
  require(n_trials >= 1, "n_trials >= 1");
  const Window window = onsite_window(cfg);
  const Point bs = window.center();
  const double p0_max = std::max(0.0, cfg.gamma_eta() - cfg.circuit_power);

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    OutageTally tally;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng field_rng = make_stream(seed, t, StreamId::EnergyCenters);
      const FieldRealization real = realize_field(cfg.field, window, field_rng);
      const double p0 = std::max(0.0, cfg.eta * intensity_at(real, bs) - cfg.circuit_power);
      Rng users = users_stream(seed, t);
      Rng fading = fading_stream(seed, t);
      tally_cell(cfg, draw_typical_cell(cfg, users, fading), p0, p0_max, tally);
    }
    return tally;
  };
  return finish(cfg, run_blocks<OutageTally>(n_trials, workers, block));
}

OutageEstimate simulate_fixed_power(const ScenarioConfig& cfg, double p0, std::uint64_t n_trials,
                                    std::uint64_t seed, int workers) {
  validate(cfg);
  require(p0 >= 0, "P0 >= 0");
  require(n_trials >= 1, "n_trials >= 1");
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    OutageTally tally;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng users = users_stream(seed, t);
      Rng fading = fading_stream(seed, t);
      tally_cell(cfg, draw_typical_cell(cfg, users, fading), p0, p0, tally);
    }
    return tally;
  };
  return finish(cfg, run_blocks<OutageTally>(n_trials, workers, block));
}

}  // namespace renergy
