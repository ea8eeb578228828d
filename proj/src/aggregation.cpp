#include "renergy/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "renergy/errors.hpp"
#include "renergy/parallel.hpp"

namespace renergy {

double ClusterAssignment::mean_cluster_size() const {
  if (members.empty()) return 0.0;
  return static_cast<double>(aggregator_of.size()) / static_cast<double>(members.size());
}

ClusterAssignment build_clusters(double lambda_h, double lambda_a, const Window& window,
                                 const Point& aggregator_offset) {
  require(lambda_a > 0, "aggregator density > 0");
  require(lambda_h >= lambda_a, "harvester density >= aggregator density");
  ClusterAssignment c;
  c.harvesters = hex_lattice(lambda_h, window);
  c.aggregators = hex_lattice(lambda_a, window, aggregator_offset);
  const GridIndex index(c.aggregators.sites, window);
  const Index n = c.harvesters.sites.size();
  c.aggregator_of.resize(static_cast<std::size_t>(n));
  c.line_length.resize(static_cast<std::size_t>(n));
  c.members.assign(static_cast<std::size_t>(c.aggregators.sites.size()), {});
  for (Index i = 0; i < n; ++i) {
    const Nearest hit = index.nearest(c.harvesters.sites[i]);
    c.aggregator_of[static_cast<std::size_t>(i)] = hit.index;
    c.line_length[static_cast<std::size_t>(i)] = hit.distance;
    c.members[static_cast<std::size_t>(hit.index)].push_back(i);
  }
  for (const auto& m : c.members) ++c.size_histogram[m.size()];
  return c;
}

double line_loss(double p, double d, double v, double beta) {
  require_domain(v > 0, "line voltage > 0");
  if (std::isinf(v)) return 0.0;
  return beta * p * p * d / (v * v);
}

double required_voltage_prop6(double tau, double beta, double eta, double gamma, double lambda_a) {
  require_domain(tau > 0 && tau < 1, "0 < tau < 1");
  require(beta > 0 && eta > 0 && gamma > 0 && lambda_a > 0, "beta, eta, gamma, lambda_a > 0");
  const double k = std::sqrt(2.0 / (3.0 * std::sqrt(3.0)));
  return tau * std::sqrt(beta * eta * gamma / (1.0 - tau) * k) * std::pow(lambda_a, -0.25);
}

double delivered_power(double harvested, double d, double voltage, const LineSpec& line) {
  if (line.delivery == DeliveryModel::TauFloor) return line.tau * harvested;
  if (std::isinf(voltage) || d == 0 || harvested == 0) return harvested;
  const double c = line.beta * d / (voltage * voltage);
  // Positive root of c D^2 + D - P = 0, in the cancellation-free form.
  return 2.0 * harvested / (1.0 + std::sqrt(1.0 + 4.0 * c * harvested));
}

double line_voltage(const ScenarioConfig& cfg) {
  require(cfg.distributed.has_value(), "line voltage needs distributed harvesters");
  const auto& d = *cfg.distributed;
  if (d.line.rule == VoltageRule::Prop6)
    return required_voltage_prop6(d.line.tau, d.line.beta, cfg.eta, cfg.field.gamma, d.lambda_a);
  return d.line.voltage;
}

double worst_case_efficiency(const ScenarioConfig& cfg) {
  if (!cfg.distributed) return 1.0;
  const auto& line = cfg.distributed->line;
  const double d_max = hex_circumradius(cfg.distributed->lambda_a);
  return delivered_power(cfg.gamma_eta(), d_max, line_voltage(cfg), line) / cfg.gamma_eta();
}

double asymptotic_power_floor(double tau, double gamma, double eta, double lambda_h,
                              double lambda_b, double lambda_e, double nu) {
  require(gamma > 0 && eta > 0 && lambda_h > 0 && lambda_b > 0 && lambda_e > 0 && nu > 0,
          "power floor parameters > 0");
  require(tau >= 0, "tau >= 0");
  return tau * gamma * eta * lambda_h / lambda_b * -std::expm1(-lambda_e / lambda_h) *
         std::exp(-2.0 / (3.0 * std::sqrt(3.0) * nu * lambda_h));
}

Window distributed_window(const ScenarioConfig& cfg) {
  require(cfg.distributed.has_value(), "distributed window needs distributed harvesters");
  const double a = hex_spacing(cfg.distributed->lambda_a);
  const double side = cfg.window_side > 0 ? cfg.window_side : default_window_side(cfg);
  return commensurate_window(a, std::max(side, 4 * a), std::max(side, 2 * std::sqrt(3.0) * a),
                             cfg.wrap);
}

Deployment build_deployment(const ScenarioConfig& cfg) {
  validate(cfg);
  require(cfg.distributed.has_value(), "deployment needs distributed harvesters");
  const auto& d = *cfg.distributed;
  Deployment dep;
  dep.window = distributed_window(cfg);
  const Point offset = Point(0.013, 0.007) * hex_spacing(d.lambda_h);
  dep.clusters = build_clusters(d.lambda_h, d.lambda_a, dep.window, offset);
  dep.bss = hex_lattice(cfg.lambda_b, dep.window);
  const GridIndex index(dep.clusters.aggregators.sites, dep.window);
  dep.bs_aggregator.resize(static_cast<std::size_t>(dep.bss.sites.size()));
  dep.bs_per_aggregator.assign(dep.clusters.members.size(), 0);
  for (Index b = 0; b < dep.bss.sites.size(); ++b) {
    const Index a = index.nearest(dep.bss.sites[b]).index;
    dep.bs_aggregator[static_cast<std::size_t>(b)] = a;
    ++dep.bs_per_aggregator[static_cast<std::size_t>(a)];
  }
  dep.voltage = line_voltage(cfg);
  return dep;
}

Supply supplied_power(const Deployment& dep, const FieldRealization& real, const ScenarioConfig& cfg) {
  const auto& cl = dep.clusters;
  const auto& line = cfg.distributed->line;
  const std::size_t nh = cl.aggregator_of.size();
  Supply s;
  s.harvested.resize(nh);
  s.delivered.resize(nh);
  std::vector<double> intake(cl.members.size(), 0.0);
  for (std::size_t i = 0; i < nh; ++i) {
    const double p = cfg.eta * intensity_at(real, cl.harvesters.sites[static_cast<Index>(i)]);
    const double dlv = delivered_power(p, cl.line_length[i], dep.voltage, line);
    s.harvested[i] = p;
    s.delivered[i] = dlv;
    s.total_harvested += p;
    s.total_loss += p - dlv;
    intake[static_cast<std::size_t>(cl.aggregator_of[i])] += dlv;
  }
  for (std::size_t a = 0; a < intake.size(); ++a)
    if (dep.bs_per_aggregator[a] == 0) s.stranded += intake[a];
  s.bs_power.resize(dep.bs_aggregator.size());
  for (std::size_t b = 0; b < dep.bs_aggregator.size(); ++b) {
    const auto a = static_cast<std::size_t>(dep.bs_aggregator[b]);
    s.bs_power[b] = intake[a] / static_cast<double>(dep.bs_per_aggregator[a]);
  }
  return s;
}

double typical_bs_power(const Deployment& dep, const FieldRealization& real, const ScenarioConfig& cfg) {
  const auto& cl = dep.clusters;
  const auto& line = cfg.distributed->line;
  const auto a = static_cast<std::size_t>(dep.typical_aggregator());
  double intake = 0;
  for (Index i : cl.members[a]) {
    const double p = cfg.eta * intensity_at(real, cl.harvesters.sites[i]);
    intake += delivered_power(p, cl.line_length[static_cast<std::size_t>(i)], dep.voltage, line);
  }
  return intake / static_cast<double>(dep.bs_per_aggregator[a]);
}

double occupied_cell_fraction(const HexLattice& harvesters, const PointSet& centers, const Window& window) {
  if (harvesters.sites.empty()) return 0.0;
  std::vector<char> hit(static_cast<std::size_t>(harvesters.sites.size()), 0);
  const GridIndex index(harvesters.sites, window);
  for (Index c = 0; c < centers.size(); ++c) hit[static_cast<std::size_t>(index.nearest(centers[c]).index)] = 1;
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) /
         static_cast<double>(hit.size());
}

OutageEstimate simulate_distributed(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                    int workers) {
  require(n_trials >= 1, "n_trials >= 1");
  const Deployment dep = build_deployment(cfg);
  // A BS can at most receive its aggregator's peak intake.
  const auto a = static_cast<std::size_t>(dep.typical_aggregator());
  double peak = 0;
  for (Index i : dep.clusters.members[a])
    peak += delivered_power(cfg.gamma_eta(), dep.clusters.line_length[static_cast<std::size_t>(i)],
                            dep.voltage, cfg.distributed->line);
  peak /= static_cast<double>(dep.bs_per_aggregator[a]);
  const double p0_max = std::max(0.0, peak - cfg.circuit_power);

  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    OutageTally tally;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng field_rng = make_stream(seed, t, StreamId::EnergyCenters);
      const FieldRealization real = realize_field(cfg.field, dep.window, field_rng);
      const double p0 = std::max(0.0, typical_bs_power(dep, real, cfg) - cfg.circuit_power);
      Rng users = make_stream(seed, t, StreamId::Users);
      Rng fading = make_stream(seed, t, StreamId::Fading);
      tally_cell(cfg, draw_typical_cell(cfg, users, fading), p0, p0_max, tally);
    }
    return tally;
  };
  const OutageTally tally = run_blocks<OutageTally>(n_trials, workers, block);
  OutageEstimate e = finalize(tally);
  if (cfg.scheme == Scheme::ChannelInversion && tally.users > 0)
    e.p_union = static_cast<double>(tally.union_users) / static_cast<double>(tally.users);
  return e;
}

namespace {

struct PowerTally {
  PowerStats stats;
  void merge(const PowerTally& o) { stats.merge(o.stats); }
};

}  // namespace

PowerStats sample_typical_power(const ScenarioConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                int workers) {
  require(n_trials >= 1, "n_trials >= 1");
  const Deployment dep = build_deployment(cfg);
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    PowerTally tally;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng field_rng = make_stream(seed, t, StreamId::EnergyCenters);
      const FieldRealization real = realize_field(cfg.field, dep.window, field_rng);
      tally.stats.add(typical_bs_power(dep, real, cfg));
    }
    return tally;
  };
  return run_blocks<PowerTally>(n_trials, workers, block).stats;
}

}  // namespace renergy
