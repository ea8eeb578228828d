#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "renergy/config.hpp"
#include "renergy/coverage.hpp"
#include "renergy/stats.hpp"

namespace renergy {

// One sweep point under one scheme. Carries every parameter needed to rerun
// the point, the estimate and each bound column (NaN where a bound does not
// apply).
struct ResultRow {
  std::string sweep_key;
  double sweep_value = 0;
  std::string scheme;
  std::string architecture;
  std::string kernel;
  std::string fading;
  std::string k_sampling;
  double gamma = 0;
  double eta = 0;
  double gamma_eta = 0;
  double lambda_e = 0;
  double nu = 0;
  double psi = 0;
  double alpha = 0;
  double ref_loss_db = 0;
  double ref_dist = 0;
  double noise_dbm = 0;
  double fading_param = 0;  // omega, or the truncation floor
  double theta = 0;
  double theta_eff = 0;
  double lambda_b = 0;
  double lambda_u = 0;
  double lambda_h = 0;   // NaN on site
  double lambda_a = 0;   // NaN on site
  double cluster_size = 0;
  double tau = 0;        // guaranteed transfer efficiency
  double voltage = 0;
  double circuit_power = 0;
  double window_side = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_trials = 0;
  std::uint64_t n_users = 0;
  std::uint64_t n_outages = 0;
  std::uint64_t n_clamped = 0;
  double p_out = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double ci_halfwidth = 0;
  double p_energy_random = 0;
  double p_max_power = 0;
  double p_union = 0;
  double power_mean = 0;
  double power_var = 0;
  double power_min = 0;
  double power_floor = 0;  // asymptotic aggregation floor; NaN on site
  int low_confidence = 0;
  std::map<std::string, double> bounds;  // every name in kBoundNames
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<double> wall_seconds;  // per row; kept out of the CSV so it stays reproducible
};

// Simulates one scenario and assembles its row.
ResultRow run_point(const ScenarioConfig& sc, const std::string& sweep_key, double sweep_value,
                    std::uint64_t n_trials, std::uint64_t seed, int workers);

// One row per sweep value per scheme. Every point reuses the master seed, so
// neighbouring points and the two schemes see common random numbers.
SweepResult run_sweep(const ExperimentConfig& cfg);

const std::vector<std::string>& csv_columns();

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> parse_csv(std::istream& in);

// Writes path and a gnuplot companion at path + ".gp". Throws std::runtime_error
// when the file cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

std::string plot_script(const std::string& csv_path, const std::string& x_column);

// Square torus on which the field at the centre follows the plane law up to
// a negligible truncation: side max(10 sqrt(nu), 7 / sqrt(lambda_e)).
Window field_window(const EnergyFieldSpec& spec);

// Field intensity at the window centre over n independent realizations,
// ordered by trial.
std::vector<double> sample_field_at_center(const EnergyFieldSpec& spec, std::uint64_t n,
                                           std::uint64_t seed, int workers = 1);

struct FieldCheck {
  double psi = 0;
  KsResult ks;
};

// KS test of the sampled marginal against the closed-form CDF of a Boolean
// kernel, one case per psi (nu = psi / lambda_e).
std::vector<FieldCheck> validate_field(const EnergyFieldSpec& base, const std::vector<double>& psis,
                                       std::uint64_t n, std::uint64_t seed, int workers = 1,
                                       double level = 0.01);

// Per-row wall times as "row,seconds" lines.
void write_timing(const SweepResult& result, const std::string& path);

}  // namespace renergy
