#include "renergy/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "renergy/aggregation.hpp"
#include "renergy/errors.hpp"

namespace renergy {

namespace {

constexpr double kPi = std::numbers::pi;

// 2 / (3 sqrt 3): squared circumradius of a unit-area hexagon.
double hex_r2() { return 2.0 / (3.0 * std::sqrt(3.0)); }

void require_omega2(const BoundInputs& in) {
  require_domain(in.omega >= 2, "chi-squared omega >= 2 (E[1/H] is infinite for omega = 1)");
}

// First term shared by Lemma 1 and the chi-squared expansions.
double pa_term(const BoundInputs& in, double e_h_inv) {
  const double pp = kPi * in.psi;
  const double base = c2(in.alpha) * in.theta * e_h_inv * in.lambda_u /
                      (in.gamma_eta * std::pow(in.lambda_b, 1.0 + in.alpha / 2.0));
  return 2.0 / (2.0 + in.alpha * pp) * std::pow(base, std::min(pp, 1.0));
}

// (gamma_eta / (R_max^alpha theta))^-omega
double tail_scale(const BoundInputs& in) {
  return std::pow(in.gamma_eta / (max_distance_alpha(in.alpha, in.lambda_b) * in.theta), -in.omega);
}

}  // namespace

double c2(double alpha) { return std::pow(hex_r2(), alpha / 2.0); }

double c3(double alpha) { return 2.0 / (2.0 + alpha) * c2(alpha); }

double max_distance_alpha(double alpha, double lambda_b) {
  return std::pow(hex_r2() / lambda_b, alpha / 2.0);
}

BoundInputs bound_inputs(const ScenarioConfig& cfg) {
  BoundInputs in;
  in.psi = cfg.field.psi();
  in.gamma_eta = cfg.gamma_eta();
  in.theta = effective_threshold(cfg.theta, cfg.channel);
  in.alpha = cfg.channel.alpha;
  in.lambda_b = cfg.lambda_b;
  in.lambda_u = cfg.lambda_u;
  in.lambda_e = cfg.field.lambda_e;
  in.nu = cfg.field.nu;
  if (const auto* c = std::get_if<ChiSquared>(&cfg.channel.fading)) {
    in.omega = c->omega;
    in.e_h_inv = c->omega >= 2 ? 1.0 / (c->omega - 1) : std::numeric_limits<double>::infinity();
  } else {
    in.omega = 0;
    in.e_h_inv = mean_inverse_fading(cfg.channel);
  }
  if (cfg.distributed) {
    in.lambda_h = cfg.distributed->lambda_h;
    in.tau = worst_case_efficiency(cfg);
  } else {
    in.tau = 1.0;
  }
  return in;
}

double lemma1_pa_bound(const BoundInputs& in) { return pa_term(in, in.e_h_inv); }

double lemma2_pb_bound(const BoundInputs& in) {
  return c3(in.alpha) * in.theta * in.lambda_u * in.e_h_inv /
         (in.gamma_eta * std::pow(in.lambda_b, 1.0 + in.alpha / 2.0));
}

double prop1_bound(const BoundInputs& in) { return lemma1_pa_bound(in) + lemma2_pb_bound(in); }

double poisson_moment(double mu, int omega) {
  require(omega >= 0, "moment order >= 0");
  require(mu >= 0, "Poisson mean >= 0");
  if (omega == 0) return 1.0;
  double total = 0;
  double mu_m = 1;
  double m_fact = 1;
  for (int m = 1; m <= omega; ++m) {
    mu_m *= mu;
    m_fact *= m;
    // m! S(omega, m) = sum_k (-1)^(m-k) C(m, k) k^omega
    double s = 0;
    double binom = 1;  // C(m, 0)
    for (int k = 0; k <= m; ++k) {
      if (k > 0) binom = binom * (m - k + 1) / k;
      s += ((m - k) % 2 ? -1.0 : 1.0) * binom * std::pow(static_cast<double>(k), omega);
    }
    total += mu_m / m_fact * s;
  }
  return total;
}

std::pair<double, double> prop2_asymptotic(const BoundInputs& in) {
  require_omega2(in);
  const double first = pa_term(in, std::tgamma(in.omega - 1.0));
  const double second = poisson_moment(in.mean_users(), in.omega) / std::tgamma(in.omega + 1.0) *
                        tail_scale(in);
  return {first, second};
}

std::pair<double, double> prop4_asymptotic(const BoundInputs& in) {
  require_omega2(in);
  const double first = pa_term(in, std::tgamma(in.omega - 1.0));
  const double second = in.mean_users() / std::tgamma(in.omega + 1.0) * tail_scale(in);
  return {first, second};
}

double asymptotic_remainder_ratio(const BoundInputs& in) {
  require_omega2(in);
  // Pr(H <= s) = s^w / w! (1 - w s / (w + 1) + ...), s = K R^alpha theta / gamma_eta.
  const double s = max_distance_alpha(in.alpha, in.lambda_b) * in.theta / in.gamma_eta;
  const double mu = in.mean_users();
  const double k_ratio = poisson_moment(mu, in.omega + 1) / poisson_moment(mu, in.omega);
  return in.omega / (in.omega + 1.0) * s * k_ratio;
}

double prop5_bound(const BoundInputs& in) {
  const double denom = in.tau * in.gamma_eta * std::pow(in.lambda_b, in.alpha / 2.0) * in.lambda_h *
                       -std::expm1(-in.lambda_e / in.lambda_h) *
                       std::exp(-2.0 / (3.0 * std::sqrt(3.0) * in.nu * in.lambda_h));
  return c3(in.alpha) * in.theta * in.e_h_inv * in.lambda_u / denom;
}

double prop7_bound(const BoundInputs& in) {
  require_omega2(in);
  const double pp = kPi * in.psi;
  const double first = std::pow(in.theta / (pp * in.gamma_eta), in.omega) * std::exp(pp) *
                       std::pow(hex_r2() / in.lambda_b, in.alpha * in.omega / 2.0) *
                       poisson_moment(in.mean_users(), in.omega);
  return first + lemma2_pb_bound(in);
}

std::map<std::string, BoundValue> bound_values(const ScenarioConfig& cfg) {
  std::map<std::string, BoundValue> out;
  const BoundInputs in = bound_inputs(cfg);
  const bool finite_h = std::isfinite(in.e_h_inv);
  const bool chi2 = in.omega >= 2;
  auto put = [&](const char* name, double v) { out[name] = BoundValue{v, true}; };

  if (cfg.distributed) {
    if (finite_h) put("prop5", prop5_bound(in));
    return out;
  }
  const bool indep = cfg.scheme == Scheme::ChannelIndependent;
  switch (cfg.field.kernel) {
    case Kernel::BooleanMaxExp:
      if (!finite_h) break;
      put("lemma1", lemma1_pa_bound(in));
      put("lemma2", lemma2_pb_bound(in));
      put(indep ? "prop1" : "prop3", prop1_bound(in));
      if (chi2) {
        const auto [a, b] = indep ? prop2_asymptotic(in) : prop4_asymptotic(in);
        put(indep ? "prop2" : "prop4", a + b);
      }
      break;
    case Kernel::BooleanMaxPowerLaw:
      if (chi2 && indep) put("prop7", prop7_bound(in));
      break;
    case Kernel::ShotNoiseExp:
      break;
  }
  return out;
}

}  // namespace renergy
