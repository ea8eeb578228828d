#include "renergy/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "renergy/errors.hpp"

namespace renergy {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw InvalidParameter(key + ": expected a number, got '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  if (t.empty() || t[0] == '-') throw InvalidParameter(key + ": expected a non-negative integer");
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw InvalidParameter(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidParameter(key + ": expected an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidParameter(key + ": expected true or false");
}

DistributedSpec& distributed(ExperimentConfig& c, const std::string& key) {
  if (!c.scenario.distributed)
    throw InvalidParameter(key + " needs scenario.architecture = distributed");
  return *c.scenario.distributed;
}

TruncatedRician& rician(ExperimentConfig& c, const std::string& key) {
  auto* r = std::get_if<TruncatedRician>(&c.scenario.channel.fading);
  if (!r) throw InvalidParameter(key + " needs channel.fading = rician");
  return *r;
}

ChiSquared& chi2(ExperimentConfig& c, const std::string& key) {
  auto* r = std::get_if<ChiSquared>(&c.scenario.channel.fading);
  if (!r) throw InvalidParameter(key + " needs channel.fading = chi2");
  return *r;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& v)>;

// Phase 0 keys change the structure other keys write into; phase 2 keys are
// derived from the values of plain keys.
struct KeyInfo {
  int phase;
  Setter set;
};

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table = [] {
    std::map<std::string, KeyInfo> t;
    auto num = [](auto member) {
      return [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
        member(c) = to_double(k, v);
      };
    };
    // structural
    t["scenario.architecture"] = {0, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      if (s == "onsite") c.scenario.distributed.reset();
      else if (s == "distributed") { if (!c.scenario.distributed) c.scenario.distributed = DistributedSpec{}; }
      else throw InvalidParameter(k + ": expected onsite or distributed");
    }};
    t["channel.fading"] = {0, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      auto& f = c.scenario.channel.fading;
      if (s == "rician") { if (!std::holds_alternative<TruncatedRician>(f)) f = TruncatedRician{}; }
      else if (s == "chi2") { if (!std::holds_alternative<ChiSquared>(f)) f = ChiSquared{2}; }
      else throw InvalidParameter(k + ": expected rician or chi2");
    }};
    t["channel.units"] = {0, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      if (s == "normalized") {
        c.scenario.channel = normalized_channel(c.scenario.channel.alpha, c.scenario.channel.fading);
      } else if (s != "physical") {
        throw InvalidParameter(k + ": expected physical or normalized");
      }
    }};

    // field
    t["field.kernel"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      try {
        c.scenario.field.kernel = kernel_from_string(trim(v));
      } catch (const std::exception&) {
        throw InvalidParameter(k + ": expected boolean_exp, shot_noise_exp or boolean_power_law");
      }
    }};
    t["field.gamma"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.field.gamma; })};
    t["field.lambda_e"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.field.lambda_e; })};
    t["field.nu"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.field.nu; })};

    // channel
    t["channel.alpha"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.channel.alpha; })};
    t["channel.ref_loss_db"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.channel.ref_loss_db; })};
    t["channel.ref_dist"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.channel.ref_dist; })};
    t["channel.noise_dbm"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.channel.noise_dbm; })};
    t["channel.omega"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      chi2(c, k).omega = to_int(k, v);
    }};
    t["channel.rician_floor"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      rician(c, k).floor = to_double(k, v);
    }};
    t["channel.rician_scatter"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      rician(c, k).scatter = to_double(k, v);
    }};

    // network and scenario
    t["network.lambda_b"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.lambda_b; })};
    t["network.lambda_u"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.lambda_u; })};
    t["scenario.theta"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.theta; })};
    t["scenario.eta"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.eta; })};
    t["scenario.circuit_power"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.circuit_power; })};
    t["scenario.scheme"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      if (s == "independent") c.schemes = {Scheme::ChannelIndependent};
      else if (s == "inversion") c.schemes = {Scheme::ChannelInversion};
      else if (s == "both") c.schemes = {Scheme::ChannelIndependent, Scheme::ChannelInversion};
      else throw InvalidParameter(k + ": expected independent, inversion or both");
      c.scenario.scheme = c.schemes.front();
    }};
    t["scenario.k_sampling"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      if (s == "poisson") c.scenario.k_sampling = KSampling::Poisson;
      else if (s == "size_biased") c.scenario.k_sampling = KSampling::SizeBiased;
      else throw InvalidParameter(k + ": expected poisson or size_biased");
    }};

    // aggregation
    t["aggregation.lambda_h"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      distributed(c, k).lambda_h = to_double(k, v);
    }};
    t["aggregation.lambda_a"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      distributed(c, k).lambda_a = to_double(k, v);
    }};
    t["aggregation.beta"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      distributed(c, k).line.beta = to_double(k, v);
    }};
    t["aggregation.tau"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      distributed(c, k).line.tau = to_double(k, v);
    }};
    t["aggregation.voltage"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      auto& line = distributed(c, k).line;
      if (trim(v) == "prop6") {
        line.rule = VoltageRule::Prop6;
      } else {
        line.rule = VoltageRule::Fixed;
        line.voltage = to_double(k, v);
      }
    }};
    t["aggregation.delivery"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      auto& line = distributed(c, k).line;
      if (s == "exact") line.delivery = DeliveryModel::Exact;
      else if (s == "tau_floor") line.delivery = DeliveryModel::TauFloor;
      else throw InvalidParameter(k + ": expected exact or tau_floor");
    }};

    // simulation and output
    t["sim.trials"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.n_trials = to_u64(k, v);
    }};
    t["sim.seed"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.master_seed = to_u64(k, v);
    }};
    t["sim.workers"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.workers = to_int(k, v);
    }};
    t["sim.window_side"] = {1, num([](ExperimentConfig& c) -> double& { return c.scenario.window_side; })};
    t["sim.wrap"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.scenario.wrap = to_bool(k, v);
    }};
    t["sweep.key"] = {1, [](ExperimentConfig& c, const std::string&, const std::string& v) {
      if (!c.sweep) c.sweep = SweepSpec{};
      c.sweep->key = canonical_key(trim(v));
    }};
    t["sweep.values"] = {1, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      if (!c.sweep) c.sweep = SweepSpec{};
      c.sweep->values.clear();
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) c.sweep->values.push_back(to_double(k, item));
    }};
    t["output.path"] = {1, [](ExperimentConfig& c, const std::string&, const std::string& v) {
      c.output_path = trim(v);
    }};

    // derived
    t["field.psi"] = {2, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.scenario.field.nu = to_double(k, v) / c.scenario.field.lambda_e;
    }};
    t["scenario.gamma_eta"] = {2, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.scenario.field.gamma = to_double(k, v) / c.scenario.eta;
    }};
    t["aggregation.cluster_size"] = {2, [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      auto& d = distributed(c, k);
      d.lambda_a = d.lambda_h / to_double(k, v);
    }};
    return t;
  }();
  return table;
}

}  // namespace

std::string canonical_key(const std::string& key) {
  if (key == "psi") return "field.psi";
  if (key == "gamma_eta") return "scenario.gamma_eta";
  if (key == "cluster_size") return "aggregation.cluster_size";
  if (key == "theta") return "scenario.theta";
  if (key == "lambda_h") return "aggregation.lambda_h";
  if (key == "lambda_a") return "aggregation.lambda_a";
  return key;
}

ExperimentConfig default_experiment() {
  ExperimentConfig c;
  c.scenario.field = make_field_spec(1000.0, 1.0, 0.05);
  c.scenario.channel = make_channel_spec(4, 70, 0.1, -90, TruncatedRician{0.1, 1.0});
  c.scenario.lambda_b = 0.78;
  c.scenario.lambda_u = 7.8;
  c.scenario.theta = 8;
  c.scenario.eta = 1;
  return c;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(canonical_key(key));
  if (it == table.end()) throw InvalidParameter("unknown config key '" + key + "'");
  it->second.set(cfg, it->first, value);
}

ExperimentConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = canonical_key(trim(line.substr(0, eq)));
    if (!key_table().count(key)) throw InvalidParameter("unknown config key '" + key + "'");
    if (seen.count(key)) throw InvalidParameter("duplicate config key '" + key + "'");
    seen[key] = lineno;
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  if (seen.count("field.psi") && seen.count("field.nu"))
    throw InvalidParameter("field.psi and field.nu are mutually exclusive");
  if (seen.count("aggregation.cluster_size") && seen.count("aggregation.lambda_a"))
    throw InvalidParameter("aggregation.cluster_size and aggregation.lambda_a are mutually exclusive");
  if (seen.count("scenario.gamma_eta") && seen.count("field.gamma"))
    throw InvalidParameter("scenario.gamma_eta and field.gamma are mutually exclusive");

  ExperimentConfig cfg = default_experiment();
  for (int phase = 0; phase <= 2; ++phase)
    for (const auto& [k, v] : entries)
      if (key_table().at(k).phase == phase) set_key(cfg, k, v);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& s = c.scenario;
  o << "scenario.architecture = " << (s.on_site() ? "onsite" : "distributed") << "\n";
  o << "channel.fading = " << (std::holds_alternative<ChiSquared>(s.channel.fading) ? "chi2" : "rician") << "\n";
  o << "field.kernel = " << to_string(s.field.kernel) << "\n";
  o << "field.gamma = " << fmt(s.field.gamma) << "\n";
  o << "field.lambda_e = " << fmt(s.field.lambda_e) << "\n";
  o << "field.nu = " << fmt(s.field.nu) << "\n";
  o << "channel.alpha = " << fmt(s.channel.alpha) << "\n";
  o << "channel.ref_loss_db = " << fmt(s.channel.ref_loss_db) << "\n";
  o << "channel.ref_dist = " << fmt(s.channel.ref_dist) << "\n";
  o << "channel.noise_dbm = " << fmt(s.channel.noise_dbm) << "\n";
  if (const auto* chi = std::get_if<ChiSquared>(&s.channel.fading)) {
    o << "channel.omega = " << chi->omega << "\n";
  } else {
    const auto& r = std::get<TruncatedRician>(s.channel.fading);
    o << "channel.rician_floor = " << fmt(r.floor) << "\n";
    o << "channel.rician_scatter = " << fmt(r.scatter) << "\n";
  }
  o << "network.lambda_b = " << fmt(s.lambda_b) << "\n";
  o << "network.lambda_u = " << fmt(s.lambda_u) << "\n";
  o << "scenario.theta = " << fmt(s.theta) << "\n";
  o << "scenario.eta = " << fmt(s.eta) << "\n";
  o << "scenario.circuit_power = " << fmt(s.circuit_power) << "\n";
  o << "scenario.scheme = "
    << (c.schemes.size() > 1 ? "both" : std::string(to_string(c.schemes.front()))) << "\n";
  o << "scenario.k_sampling = " << to_string(s.k_sampling) << "\n";
  if (s.distributed) {
    const auto& d = *s.distributed;
    o << "aggregation.lambda_h = " << fmt(d.lambda_h) << "\n";
    o << "aggregation.lambda_a = " << fmt(d.lambda_a) << "\n";
    o << "aggregation.beta = " << fmt(d.line.beta) << "\n";
    o << "aggregation.tau = " << fmt(d.line.tau) << "\n";
    o << "aggregation.voltage = " << (d.line.rule == VoltageRule::Prop6 ? "prop6" : fmt(d.line.voltage)) << "\n";
    o << "aggregation.delivery = " << to_string(d.line.delivery) << "\n";
  }
  o << "sim.trials = " << c.n_trials << "\n";
  o << "sim.seed = " << c.master_seed << "\n";
  o << "sim.workers = " << c.workers << "\n";
  o << "sim.window_side = " << fmt(s.window_side) << "\n";
  o << "sim.wrap = " << (s.wrap ? "true" : "false") << "\n";
  if (c.sweep) {
    o << "sweep.key = " << c.sweep->key << "\n";
    o << "sweep.values = ";
    for (std::size_t i = 0; i < c.sweep->values.size(); ++i) o << (i ? "," : "") << fmt(c.sweep->values[i]);
    o << "\n";
  }
  o << "output.path = " << c.output_path << "\n";
  return o.str();
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidParameter("--sweep expects KEY=v1,v2,...");
  ExperimentConfig scratch;
  set_key(scratch, "sweep.key", text.substr(0, eq));
  set_key(scratch, "sweep.values", text.substr(eq + 1));
  return *scratch.sweep;
}

void validate(const ExperimentConfig& cfg) {
  require(cfg.n_trials >= 1, "sim.trials >= 1");
  require(cfg.workers >= 1, "sim.workers >= 1");
  require(!cfg.schemes.empty(), "scenario.scheme names at least one scheme");
  validate(cfg.scenario);
  if (cfg.sweep) {
    require(key_table().count(cfg.sweep->key) > 0, "sweep.key '" + cfg.sweep->key + "' is a known key");
    require(!cfg.sweep->values.empty(), "sweep.values nonempty");
    for (std::size_t i = 1; i < cfg.sweep->values.size(); ++i)
      require(cfg.sweep->values[i] > cfg.sweep->values[i - 1], "sweep.values strictly increasing");
    for (double v : cfg.sweep->values) validate(scenario_at(cfg, v));
  }
}

ScenarioConfig scenario_at(const ExperimentConfig& cfg, double sweep_value) {
  if (!cfg.sweep) return cfg.scenario;
  ExperimentConfig copy = cfg;
  set_key(copy, cfg.sweep->key, fmt(sweep_value));
  return copy.scenario;
}

ExperimentConfig fig4_profile() {
  ExperimentConfig c = default_experiment();
  c.schemes = {Scheme::ChannelIndependent, Scheme::ChannelInversion};
  c.sweep = SweepSpec{"field.psi", {0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5}};
  c.n_trials = 100000;
  c.output_path = "fig4.csv";
  return c;
}

ExperimentConfig fig5_profile() {
  ExperimentConfig c = default_experiment();
  c.scenario.field.gamma = 10.0;
  c.scenario.distributed = DistributedSpec{};
  c.scenario.distributed->lambda_h = 15.6;
  c.scenario.distributed->lambda_a = 15.6 / 20;
  c.schemes = {Scheme::ChannelIndependent, Scheme::ChannelInversion};
  c.sweep = SweepSpec{"aggregation.cluster_size", {20, 40, 60, 80, 100, 160, 320}};
  c.n_trials = 20000;
  c.output_path = "fig5.csv";
  return c;
}

}  // namespace renergy
