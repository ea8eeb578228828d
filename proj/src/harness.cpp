#include "renergy/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "renergy/aggregation.hpp"
#include "renergy/bounds.hpp"
#include "renergy/errors.hpp"
#include "renergy/parallel.hpp"

namespace renergy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
  return v;
}

struct Column {
  std::string name;
  std::function<std::string(const ResultRow&)> get;
  std::function<void(ResultRow&, const std::string&)> set;
};

template <typename T>
Column col(const char* name, T ResultRow::*m) {
  Column c;
  c.name = name;
  if constexpr (std::is_same_v<T, std::string>) {
    c.get = [m](const ResultRow& r) { return r.*m; };
    c.set = [m](ResultRow& r, const std::string& s) { r.*m = s; };
  } else if constexpr (std::is_same_v<T, double>) {
    c.get = [m](const ResultRow& r) { return fmt(r.*m); };
    c.set = [m](ResultRow& r, const std::string& s) { r.*m = parse_num(s); };
  } else {
    c.get = [m](const ResultRow& r) { return std::to_string(r.*m); };
    c.set = [m](ResultRow& r, const std::string& s) { r.*m = static_cast<T>(std::stoull(s)); };
  }
  return c;
}

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = [] {
    std::vector<Column> c = {
        col("sweep_key", &ResultRow::sweep_key),
        col("sweep_value", &ResultRow::sweep_value),
        col("scheme", &ResultRow::scheme),
        col("architecture", &ResultRow::architecture),
        col("kernel", &ResultRow::kernel),
        col("fading", &ResultRow::fading),
        col("k_sampling", &ResultRow::k_sampling),
        col("gamma", &ResultRow::gamma),
        col("eta", &ResultRow::eta),
        col("gamma_eta", &ResultRow::gamma_eta),
        col("lambda_e", &ResultRow::lambda_e),
        col("nu", &ResultRow::nu),
        col("psi", &ResultRow::psi),
        col("alpha", &ResultRow::alpha),
        col("ref_loss_db", &ResultRow::ref_loss_db),
        col("ref_dist", &ResultRow::ref_dist),
        col("noise_dbm", &ResultRow::noise_dbm),
        col("fading_param", &ResultRow::fading_param),
        col("theta", &ResultRow::theta),
        col("theta_eff", &ResultRow::theta_eff),
        col("lambda_b", &ResultRow::lambda_b),
        col("lambda_u", &ResultRow::lambda_u),
        col("lambda_h", &ResultRow::lambda_h),
        col("lambda_a", &ResultRow::lambda_a),
        col("cluster_size", &ResultRow::cluster_size),
        col("tau", &ResultRow::tau),
        col("voltage", &ResultRow::voltage),
        col("circuit_power", &ResultRow::circuit_power),
        col("window_side", &ResultRow::window_side),
        col("seed", &ResultRow::seed),
        col("n_trials", &ResultRow::n_trials),
        col("n_users", &ResultRow::n_users),
        col("n_outages", &ResultRow::n_outages),
        col("n_clamped", &ResultRow::n_clamped),
        col("p_out", &ResultRow::p_out),
        col("ci_lo", &ResultRow::ci_lo),
        col("ci_hi", &ResultRow::ci_hi),
        col("ci_halfwidth", &ResultRow::ci_halfwidth),
        col("p_energy_random", &ResultRow::p_energy_random),
        col("p_max_power", &ResultRow::p_max_power),
        col("p_union", &ResultRow::p_union),
        col("power_mean", &ResultRow::power_mean),
        col("power_var", &ResultRow::power_var),
        col("power_min", &ResultRow::power_min),
        col("power_floor", &ResultRow::power_floor),
        col("low_confidence", &ResultRow::low_confidence),
    };
    for (const char* b : kBoundNames) {
      const std::string name = b;
      c.push_back({"bound_" + name,
                   [name](const ResultRow& r) {
                     const auto it = r.bounds.find(name);
                     return fmt(it == r.bounds.end() ? kNaN : it->second);
                   },
                   [name](ResultRow& r, const std::string& s) { r.bounds[name] = parse_num(s); }});
    }
    return c;
  }();
  return cols;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ResultRow run_point(const ScenarioConfig& sc, const std::string& sweep_key, double sweep_value,
                    std::uint64_t n_trials, std::uint64_t seed, int workers) {
  validate(sc);
  require(n_trials >= 1, "sim.trials >= 1");
  ResultRow r;
  r.sweep_key = sweep_key;
  r.sweep_value = sweep_value;
  r.scheme = std::string(to_string(sc.scheme));
  r.architecture = sc.on_site() ? "onsite" : "distributed";
  r.kernel = std::string(to_string(sc.field.kernel));
  r.k_sampling = std::string(to_string(sc.k_sampling));
  if (const auto* chi = std::get_if<ChiSquared>(&sc.channel.fading)) {
    r.fading = "chi2";
    r.fading_param = chi->omega;
  } else {
    r.fading = "rician";
    r.fading_param = std::get<TruncatedRician>(sc.channel.fading).floor;
  }
  r.gamma = sc.field.gamma;
  r.eta = sc.eta;
  r.gamma_eta = sc.gamma_eta();
  r.lambda_e = sc.field.lambda_e;
  r.nu = sc.field.nu;
  r.psi = sc.field.psi();
  r.alpha = sc.channel.alpha;
  r.ref_loss_db = sc.channel.ref_loss_db;
  r.ref_dist = sc.channel.ref_dist;
  r.noise_dbm = sc.channel.noise_dbm;
  r.theta = sc.theta;
  r.theta_eff = effective_threshold(sc.theta, sc.channel);
  r.lambda_b = sc.lambda_b;
  r.lambda_u = sc.lambda_u;
  r.circuit_power = sc.circuit_power;
  r.seed = seed;

  OutageEstimate e;
  if (sc.on_site()) {
    r.lambda_h = r.lambda_a = r.cluster_size = r.voltage = r.power_floor = kNaN;
    r.tau = 1;
    r.window_side = onsite_window(sc).width;
    e = simulate_onsite(sc, n_trials, seed, workers);
  } else {
    const auto& d = *sc.distributed;
    r.lambda_h = d.lambda_h;
    r.lambda_a = d.lambda_a;
    r.cluster_size = d.cluster_size();
    r.voltage = line_voltage(sc);
    r.tau = worst_case_efficiency(sc);
    r.window_side = distributed_window(sc).width;
    r.power_floor = asymptotic_power_floor(r.tau, sc.field.gamma, sc.eta, d.lambda_h, sc.lambda_b,
                                           sc.field.lambda_e, sc.field.nu);
    e = simulate_distributed(sc, n_trials, seed, workers);
  }
  r.n_trials = e.n_trials;
  r.n_users = e.n_users_observed;
  r.n_outages = e.n_outages;
  r.n_clamped = e.n_clamped;
  r.p_out = e.p_out;
  r.ci_lo = e.ci_lo;
  r.ci_hi = e.ci_hi;
  r.ci_halfwidth = e.ci_halfwidth;
  r.p_energy_random = e.p_energy_random;
  r.p_max_power = e.p_max_power;
  r.p_union = e.p_union;
  r.power_mean = e.power.mean();
  r.power_var = e.power.variance();
  r.power_min = e.power.n ? e.power.min : kNaN;
  r.low_confidence = e.low_confidence ? 1 : 0;
  for (const char* b : kBoundNames) r.bounds[b] = kNaN;
  for (const auto& [name, v] : bound_values(sc)) r.bounds[name] = v.value;
  return r;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  SweepResult out;
  std::vector<double> values = cfg.sweep ? cfg.sweep->values : std::vector<double>{kNaN};
  const std::string key = cfg.sweep ? cfg.sweep->key : "none";
  for (double v : values) {
    ScenarioConfig sc = cfg.sweep ? scenario_at(cfg, v) : cfg.scenario;
    for (Scheme s : cfg.schemes) {
      sc.scheme = s;
      const auto t0 = std::chrono::steady_clock::now();
      out.rows.push_back(run_point(sc, key, v, cfg.n_trials, cfg.master_seed, cfg.workers));
      out.wall_seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
  }
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : columns()) n.push_back(c.name);
    return n;
  }();
  return names;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  require(!rows.empty(), "no rows to write");
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string cell = cols[i].get(r);
      if (cell.find_first_of(",\n\"") != std::string::npos)
        throw std::runtime_error("CSV cell contains a separator: '" + cell + "'");
      out << (i ? "," : "") << cell;
    }
    out << "\n";
  }
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  const auto header = split(line);
  const auto& cols = columns();
  if (header.size() != cols.size()) throw std::runtime_error("CSV header does not match the column set");
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (header[i] != cols[i].name) throw std::runtime_error("unexpected CSV column '" + header[i] + "'");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols.size()) throw std::runtime_error("CSV row has the wrong number of cells");
    ResultRow r;
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].set(r, cells[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string plot_script(const std::string& csv_path, const std::string& x_column) {
  std::ostringstream o;
  o << "# gnuplot -p " << csv_path << ".gp\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set logscale y\n"
    << "set xlabel '" << x_column << "'\n"
    << "set ylabel 'outage probability'\n"
    << "set grid\n"
    << "f = '" << csv_path << "'\n"
    << "sel(s) = (strcol('scheme') eq s) ? column('p_out') : NaN\n"
    << "bnd(s) = (strcol('scheme') eq s) ? column(s eq 'independent' ? 'bound_prop1' : 'bound_prop3') : NaN\n"
    << "plot f using (column('sweep_value')):(sel('independent')) with linespoints title 'independent', \\\n"
    << "     f using (column('sweep_value')):(sel('inversion')) with linespoints title 'inversion', \\\n"
    << "     f using (column('sweep_value')):(bnd('independent')) with lines dashtype 2 title 'bound (independent)', \\\n"
    << "     f using (column('sweep_value')):(bnd('inversion')) with lines dashtype 2 title 'bound (inversion)'\n";
  return o.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(rows, out);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
  }
  std::ofstream gp(path + ".gp", std::ios::binary);
  if (!gp) throw std::runtime_error("cannot write '" + path + ".gp'");
  gp << plot_script(path, rows.front().sweep_key);
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return parse_csv(in);
}

Window field_window(const EnergyFieldSpec& spec) {
  const double side = std::max(10.0 * std::sqrt(spec.nu), 7.0 / std::sqrt(spec.lambda_e));
  return make_window(side, side, true);
}

namespace {

struct Samples {
  std::vector<double> values;
  void merge(const Samples& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
};

}  // namespace

std::vector<double> sample_field_at_center(const EnergyFieldSpec& spec, std::uint64_t n,
                                           std::uint64_t seed, int workers) {
  require(n >= 1, "sample count >= 1");
  const Window w = field_window(spec);
  const Point x = w.center();
  auto block = [&](std::uint64_t begin, std::uint64_t end) {
    Samples s;
    s.values.reserve(end - begin);
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = make_stream(seed, t, StreamId::EnergyCenters);
      s.values.push_back(intensity_at(realize_field(spec, w, rng), x));
    }
    return s;
  };
  return run_blocks<Samples>(n, workers, block).values;
}

std::vector<FieldCheck> validate_field(const EnergyFieldSpec& base, const std::vector<double>& psis,
                                       std::uint64_t n, std::uint64_t seed, int workers, double level) {
  require(base.kernel != Kernel::ShotNoiseExp, "the shot-noise field has no closed-form marginal");
  std::vector<FieldCheck> out;
  for (double psi : psis) {
    EnergyFieldSpec spec = base;
    spec.nu = psi / spec.lambda_e;
    const auto xs = sample_field_at_center(spec, n, seed, workers);
    std::function<double(double)> cdf;
    if (spec.kernel == Kernel::BooleanMaxExp)
      cdf = [spec](double x) { return x <= 0 ? 0.0 : cdf_boolean_exp(std::min(x, spec.gamma), spec); };
    else
      cdf = [spec](double x) { return x <= 0 ? 0.0 : cdf_boolean_plaw(std::min(x, spec.gamma), spec); };
    out.push_back({psi, ks_test(xs, cdf, level)});
  }
  return out;
}

void write_timing(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "row,wall_seconds\n";
  for (std::size_t i = 0; i < result.wall_seconds.size(); ++i)
    out << i << "," << fmt(result.wall_seconds[i]) << "\n";
}

}  // namespace renergy
