#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "renergy/scenario.hpp"

namespace renergy {

// Parameters of the closed-form bounds, in normalized units: unit noise and
// gain d^-alpha with d in km, so theta is the effective threshold.
struct BoundInputs {
  double psi = 0.05;
  double gamma_eta = 1000;  // W
  double theta = 8;
  double alpha = 4;
  double lambda_b = 0.78;
  double lambda_u = 7.8;
  int omega = 2;            // chi-squared parameter; 0 when the fading is not chi-squared
  double e_h_inv = 1;       // E[1/H]
  double tau = 1;
  double lambda_h = 15.6;
  double lambda_e = 1;
  double nu = 0.05;

  double mean_users() const { return lambda_u / lambda_b; }
};

// Bound inputs matching a scenario: threshold normalized by noise and
// reference loss, E[1/H] from the fading law (infinite for chi-squared(1)),
// tau from the worst-case line efficiency (1 for lossless lines).
BoundInputs bound_inputs(const ScenarioConfig& cfg);

// (2 / (3 sqrt 3))^(alpha/2)
double c2(double alpha);
// 2 / (2 + alpha) * c2
double c3(double alpha);

// Worst-case R^alpha over the disk circumscribing a cell of density lambda_b.
double max_distance_alpha(double alpha, double lambda_b);

double lemma1_pa_bound(const BoundInputs& in);
double lemma2_pb_bound(const BoundInputs& in);
// lemma1 + lemma2; also the channel-inversion bound.
double prop1_bound(const BoundInputs& in);
inline double prop3_bound(const BoundInputs& in) { return prop1_bound(in); }

// omega-th raw moment of Poisson(mu); 1 for omega = 0.
double poisson_moment(double mu, int omega);

// Leading terms of the chi-squared large-gamma_eta expansions. Throw
// DomainError for omega < 2.
std::pair<double, double> prop2_asymptotic(const BoundInputs& in);
std::pair<double, double> prop4_asymptotic(const BoundInputs& in);

// Ratio of the first neglected order to the leading second term of the
// expansions above; they are treated as bounds only when this is small.
double asymptotic_remainder_ratio(const BoundInputs& in);
inline constexpr double kAsymptoticRemainderMax = 0.1;
inline bool in_asymptotic_regime(const BoundInputs& in) {
  return asymptotic_remainder_ratio(in) < kAsymptoticRemainderMax;
}

// Distributed harvesters with sparse aggregators.
double prop5_bound(const BoundInputs& in);

// Power-law decay field, chi-squared fading. Throws DomainError for omega < 2.
double prop7_bound(const BoundInputs& in);

struct BoundValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  bool applicable = false;
  bool above_one() const { return applicable && value > 1; }
};

// Every bound that applies to the scenario's kernel, architecture, scheme and
// fading, keyed by name (lemma1, lemma2, prop1, prop2, prop3, prop4, prop5,
// prop7). Bounds that do not apply are absent.
std::map<std::string, BoundValue> bound_values(const ScenarioConfig& cfg);

// Fixed order of the bound columns in result tables.
inline constexpr const char* kBoundNames[] = {"lemma1", "lemma2", "prop1", "prop2",
                                              "prop3",  "prop4",  "prop5", "prop7"};

}  // namespace renergy
