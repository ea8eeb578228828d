// Command-line front end: run, sweep, validate-field, bounds, repro.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "renergy/aggregation.hpp"
#include "renergy/bounds.hpp"
#include "renergy/config.hpp"
#include "renergy/errors.hpp"
#include "renergy/harness.hpp"

using namespace renergy;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitLowConfidence = 3;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string sweep;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_sweep) {
  cmd->add_option("--config", o.config, "key=value configuration file");
  cmd->add_option("--out", o.out, "output CSV path");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point");
  cmd->add_option("--seed", o.seed, "master seed (overrides RENERGY_SEED)");
  cmd->add_option("--workers", o.workers, "worker threads");
  if (with_sweep) cmd->add_option("--sweep", o.sweep, "KEY=v1,v2,... sweep override");
}

// Precedence: command-line flag, then RENERGY_SEED, then the config file.
void apply(ExperimentConfig& cfg, const Overrides& o) {
  if (const char* env = std::getenv("RENERGY_SEED")) set_key(cfg, "sim.seed", env);
  if (!o.out.empty()) cfg.output_path = o.out;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.sweep.empty()) cfg.sweep = parse_sweep(o.sweep);
  validate(cfg);
}

ExperimentConfig base_config(const Overrides& o) {
  return o.config.empty() ? default_experiment() : load_config(o.config);
}

std::string show(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int run_and_write(const ExperimentConfig& cfg) {
  const SweepResult res = run_sweep(cfg);
  emit_csv(res.rows, cfg.output_path);
  write_timing(res, cfg.output_path + ".timing.csv");
  bool low = false;
  for (const auto& r : res.rows) {
    if (r.sweep_key != "none") std::cout << r.sweep_key << "=" << show(r.sweep_value) << " ";
    std::cout << r.scheme << " p_out=" << show(r.p_out)
              << " +/- " << show(r.ci_halfwidth) << " (users " << r.n_users << ")"
              << (r.low_confidence ? " LOW-CONFIDENCE" : "") << "\n";
    low = low || r.low_confidence;
  }
  std::cout << "wrote " << cfg.output_path << " (" << res.rows.size() << " rows)\n";
  return low ? kExitLowConfidence : 0;
}

int print_bounds(const ExperimentConfig& cfg) {
  for (Scheme s : cfg.schemes) {
    ScenarioConfig sc = cfg.scenario;
    sc.scheme = s;
    const BoundInputs in = bound_inputs(sc);
    std::cout << "# " << to_string(s) << ": psi=" << show(in.psi) << " gamma_eta=" << show(in.gamma_eta)
              << " theta_eff=" << show(in.theta) << " E[1/H]=" << show(in.e_h_inv) << " tau=" << show(in.tau)
              << "\n";
    for (const auto& [name, v] : bound_values(sc))
      std::cout << name << " = " << show(v.value) << (v.above_one() ? "  (> 1)" : "") << "\n";
    if (in.omega >= 2 && sc.on_site())
      std::cout << "asymptotic remainder ratio = " << show(asymptotic_remainder_ratio(in))
                << (in_asymptotic_regime(in) ? "" : "  (outside the asymptotic regime)") << "\n";
    if (sc.distributed) {
      const auto& d = *sc.distributed;
      std::cout << "power floor = "
                << show(asymptotic_power_floor(in.tau, sc.field.gamma, sc.eta, d.lambda_h, sc.lambda_b,
                                               sc.field.lambda_e, sc.field.nu))
                << " W\n";
    }
  }
  return 0;
}

int validate_field_cmd(const ExperimentConfig& cfg, std::uint64_t n) {
  if (cfg.scenario.field.kernel == Kernel::ShotNoiseExp)
    throw InvalidParameter("field.kernel: validate-field needs a Boolean kernel");
  const auto checks = validate_field(cfg.scenario.field, {0.05, 0.2, 1.0}, n, cfg.master_seed, cfg.workers);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.ks.pass ? "PASS" : "FAIL") << " " << to_string(cfg.scenario.field.kernel)
              << " psi=" << show(c.psi) << " D=" << show(c.ks.statistic) << " critical=" << show(c.ks.critical)
              << " p=" << show(c.ks.p_value) << " n=" << c.ks.n << "\n";
    ok = ok && c.ks.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage simulator for cellular networks powered by spatially random renewable energy"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o, field_o, bounds_o, repro_o;
  auto* run = app.add_subcommand("run", "simulate one configuration");
  add_common(run, run_o, false);
  auto* sweep = app.add_subcommand("sweep", "simulate a parameter sweep");
  add_common(sweep, sweep_o, true);
  auto* field = app.add_subcommand("validate-field", "KS test of the field marginal at psi = 0.05, 0.2, 1");
  add_common(field, field_o, false);
  auto* bounds = app.add_subcommand("bounds", "print the closed-form bounds for a configuration");
  add_common(bounds, bounds_o, false);
  auto* repro = app.add_subcommand("repro", "run a shipped figure profile");
  add_common(repro, repro_o, false);
  std::string figure;
  repro->add_option("figure", figure, "fig4 or fig5")->required()->check(CLI::IsMember({"fig4", "fig5"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      ExperimentConfig cfg = base_config(run_o);
      apply(cfg, run_o);
      return run_and_write(cfg);
    }
    if (*sweep) {
      ExperimentConfig cfg = base_config(sweep_o);
      apply(cfg, sweep_o);
      if (!cfg.sweep) throw InvalidParameter("sweep needs --sweep KEY=v1,... or sweep.key in the config");
      return run_and_write(cfg);
    }
    if (*field) {
      ExperimentConfig cfg = base_config(field_o);
      const bool trials_given = field_o.trials.has_value();
      apply(cfg, field_o);
      return validate_field_cmd(cfg, trials_given ? cfg.n_trials : 100000);
    }
    if (*bounds) {
      ExperimentConfig cfg = base_config(bounds_o);
      apply(cfg, bounds_o);
      return print_bounds(cfg);
    }
    if (*repro) {
      ExperimentConfig cfg = figure == "fig4" ? fig4_profile() : fig5_profile();
      apply(cfg, repro_o);
      return run_and_write(cfg);
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
