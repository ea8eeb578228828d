#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracle_values.hpp"
#include "renergy/energy_field.hpp"
#include "renergy/errors.hpp"
#include "renergy/harness.hpp"
#include "renergy/stats.hpp"

using namespace renergy;

namespace {

EnergyFieldSpec spec_psi(double psi, Kernel k = Kernel::BooleanMaxExp, double gamma = 1.0) {
  return make_field_spec(gamma, 1.0, psi, k);
}

}  // namespace

TEST_CASE("decay kernels") {
  CHECK(decay_exp(0.0, 1.0) == 1.0);
  CHECK(decay_exp(1.0, 1.0) == doctest::Approx(0.36788).epsilon(1e-4));
  CHECK(decay_power_law(1.0, 1.0) == 0.5);
  CHECK(decay_power_law(0.0, 2.0) == 1.0);
}

TEST_CASE("decay and field: worked examples") {
  CHECK(decay_exp(2.0, 1.0) < decay_exp(1.0, 1.0));
  CHECK(decay_power_law(3.0 * std::sqrt(2.0), 2.0) == doctest::Approx(0.1));
  const Window w = make_window(10, 10, false);
  PointSet c;
  c.points.resize(2, 2);
  c.points << 0, 1, 0, 0;
  const FieldRealization real(make_field_spec(1.0, 1.0, 1.0), c, w);
  CHECK(intensity_at(real, Point(0, 0)) == 1.0);
  CHECK(intensity_at(real, Point(0.4, 0)) == doctest::Approx(std::exp(-0.16)));
  CHECK(intensity_at(real, Point(0.4, 0), Kernel::ShotNoiseExp) == doctest::Approx(1.5498).epsilon(1e-4));

  CHECK(cdf_boolean_exp(0.5, spec_psi(1 / std::numbers::pi)) == doctest::Approx(0.5));
  CHECK(cdf_boolean_exp(0.9, spec_psi(0.05)) == doctest::Approx(0.98359).epsilon(1e-5));
  CHECK(cdf_boolean_plaw(0.5, spec_psi(1 / std::numbers::pi, Kernel::BooleanMaxPowerLaw)) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(cdf_boolean_plaw(0.1, spec_psi(0.05, Kernel::BooleanMaxPowerLaw)) ==
        doctest::Approx(0.2433).epsilon(1e-3));

  const EnergyFieldSpec e = spec_psi(0.3);
  CHECK(influence_radius(1.0, e) == 0.0);
  CHECK(influence_radius(std::exp(-1.0), e) == doctest::Approx(std::sqrt(e.nu)));
  CHECK(influence_radius(0.5, spec_psi(0.3, Kernel::BooleanMaxPowerLaw)) == doctest::Approx(std::sqrt(0.3)));

  const FieldMoments m = moments_boolean_exp(spec_psi(1 / std::numbers::pi));
  CHECK(m.mean == doctest::Approx(0.5));
  CHECK(m.variance == doctest::Approx(1.0 / 12));
  CHECK(moments_boolean_exp(spec_psi(100)).mean > 0.996);
  CHECK(shot_noise_mean(spec_psi(1 / std::numbers::pi, Kernel::ShotNoiseExp)) == doctest::Approx(1.0));
  CHECK(shot_noise_mean(spec_psi(0.1, Kernel::ShotNoiseExp)) / moments_boolean_exp(spec_psi(0.1)).mean ==
        doctest::Approx(1.3142).epsilon(1e-4));
}

TEST_CASE("empirical CDF at single levels over a million draws") {
  const EnergyFieldSpec e = spec_psi(0.05);
  const EnergyFieldSpec p = spec_psi(0.05, Kernel::BooleanMaxPowerLaw);
  const auto xe = sample_field_at_center(e, 1000000, 37);
  const auto xp = sample_field_at_center(p, 1000000, 37);
  auto frac = [](const std::vector<double>& xs, double t) {
    return static_cast<double>(std::count_if(xs.begin(), xs.end(), [t](double x) { return x <= t; })) /
           static_cast<double>(xs.size());
  };
  CHECK(std::abs(frac(xe, 0.9) - 0.98359) < 0.005);
  CHECK(std::abs(frac(xp, 0.1) - cdf_boolean_plaw(0.1, p)) < 0.005);
  const auto xs = sample_field_at_center(spec_psi(0.05, Kernel::ShotNoiseExp), 100000, 41);
  CHECK(sample_moments(xs).mean == doctest::Approx(0.05 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("intensity at a point from explicit centres") {
  const EnergyFieldSpec spec = make_field_spec(1.0, 1.0, 1.0);
  const Window w = make_window(100, 100, false);
  PointSet c;
  c.points.resize(2, 2);
  c.points << 50, 52, 50, 50;
  const FieldRealization real(spec, c, w);
  CHECK(intensity_at(real, Point(50, 50)) == doctest::Approx(1.0));
  CHECK(intensity_at(real, Point(51, 50)) == doctest::Approx(std::exp(-1.0)));
  CHECK(intensity_at(real, Point(51, 50), Kernel::ShotNoiseExp) == doctest::Approx(2 * std::exp(-1.0)));
  CHECK(intensity_at(real, Point(51, 50), Kernel::BooleanMaxPowerLaw) == doctest::Approx(0.5));
  const FieldRealization none(spec, PointSet{}, w);
  CHECK(intensity_at(none, Point(1, 1)) == 0.0);
}

TEST_CASE("marginal CDFs: closed-form values and domain") {
  const EnergyFieldSpec e = spec_psi(0.2);
  CHECK(cdf_boolean_exp(0.5, e) == doctest::Approx(std::pow(0.5, std::numbers::pi * 0.2)));
  CHECK(cdf_boolean_exp(1.0, e) == 1.0);
  CHECK(cdf_boolean_exp(0.0, e) == 0.0);
  CHECK_THROWS_AS(cdf_boolean_exp(1.5, e), DomainError);
  CHECK_THROWS_AS(cdf_boolean_exp(-0.1, e), DomainError);
  const EnergyFieldSpec p = spec_psi(0.2, Kernel::BooleanMaxPowerLaw);
  CHECK(cdf_boolean_plaw(0.5, p) == doctest::Approx(std::exp(-std::numbers::pi * 0.2)));
  CHECK(cdf_boolean_plaw(1.0, p) == 1.0);
  CHECK_THROWS_AS(cdf_boolean_plaw(0.0, p), DomainError);
  CHECK_THROWS_AS(make_field_spec(1.0, -1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(make_field_spec(0.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("Boolean exponential CDF is monotone with the right limits") {
  for (double psi : {0.02, 0.2, 1.0, 5.0}) {
    const EnergyFieldSpec e = spec_psi(psi);
    double prev = 0;
    for (int i = 1; i <= 100; ++i) {
      const double f = cdf_boolean_exp(i / 100.0, e);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(prev == 1.0);
  }
}

TEST_CASE("influence radius inverts the decay") {
  const EnergyFieldSpec e = spec_psi(0.3);
  const EnergyFieldSpec p = spec_psi(0.3, Kernel::BooleanMaxPowerLaw);
  for (double x : {0.01, 0.3, 0.9, 1.0}) {
    CHECK(decay_exp(influence_radius(x, e), e.nu) == doctest::Approx(x));
    CHECK(decay_power_law(influence_radius(x, p), p.nu) == doctest::Approx(x));
  }
}

TEST_CASE("moments and the flat-field limit") {
  const FieldMoments m = moments_boolean_exp(spec_psi(0.2, Kernel::BooleanMaxExp, 2.0));
  const double k = std::numbers::pi * 0.2;
  CHECK(m.mean == doctest::Approx(2 * k / (1 + k)));
  CHECK(m.variance == doctest::Approx(m.second_moment - m.mean * m.mean));
  const FieldMoments flat = moments_boolean_exp(spec_psi(1e6));
  CHECK(flat.mean == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(flat.variance < 1e-12);
  CHECK(shot_noise_mean(spec_psi(0.2, Kernel::ShotNoiseExp, 3.0)) == doctest::Approx(3 * k));
}

TEST_CASE("joint CDF: oracle values and limits") {
  const EnergyFieldSpec e = spec_psi(0.2);
  const double r = influence_radius(0.5, e);
  CHECK(joint_cdf_boolean_exp(0.5, 0.5, r, e) == doctest::Approx(oracle::kJointHalfAtR).epsilon(1e-12));
  CHECK(joint_cdf_boolean_exp(0.3, 0.7, 0.25, e) == doctest::Approx(oracle::kJointMixed).epsilon(1e-12));
  CHECK(joint_cdf_boolean_exp(0.1, 0.9, 0.2, e) == doctest::Approx(oracle::kJointContained).epsilon(1e-12));
  // coincident points: the joint law collapses to the marginal of the smaller level
  CHECK(joint_cdf_boolean_exp(0.4, 0.4, 0.0, e) == doctest::Approx(cdf_boolean_exp(0.4, e)));
  CHECK(joint_cdf_boolean_exp(0.3, 0.6, 0.0, e) == doctest::Approx(cdf_boolean_exp(0.3, e)));
  // disjoint influence disks: independence
  CHECK(joint_cdf_boolean_exp(0.4, 0.6, 10.0, e) ==
        doctest::Approx(cdf_boolean_exp(0.4, e) * cdf_boolean_exp(0.6, e)));
  // never below the product, never above either marginal
  for (double d : {0.05, 0.1, 0.3, 0.6}) {
    const double j = joint_cdf_boolean_exp(0.4, 0.6, d, e);
    CHECK(j >= cdf_boolean_exp(0.4, e) * cdf_boolean_exp(0.6, e) - 1e-15);
    CHECK(j <= cdf_boolean_exp(0.4, e) + 1e-15);
  }
  CHECK_THROWS_AS(joint_cdf_boolean_exp(0.4, 0.6, -1.0, e), DomainError);
}

TEST_CASE("shorthand overlap constant must be one half at zero separation") {
  // Writing the equal-level joint CDF as (x/gamma)^(2 pi psi (1 - Delta(d/r))),
  // Delta is the lens area over 2 pi r^2. The variant with 1/(2 pi) in front of
  // the arccosine gives 1/4 at d = 0, which would not reduce to the marginal.
  const EnergyFieldSpec e = spec_psi(0.2);
  const double x = 0.5;
  const double r = influence_radius(x, e);
  auto delta = [](double y) {
    return std::acos(y / 2) / std::numbers::pi - y / (4 * std::numbers::pi) * std::sqrt(4 - y * y);
  };
  auto delta_variant = [](double y) {
    return std::acos(y / 2) / (2 * std::numbers::pi) - y / (4 * std::numbers::pi) * std::sqrt(4 - y * y);
  };
  CHECK(delta(0) == doctest::Approx(0.5));
  CHECK(delta_variant(0) == doctest::Approx(0.25));
  const double k = std::numbers::pi * e.psi();
  for (double y : {0.0, 0.5, 1.0, 1.5}) {
    const double via_delta = std::pow(x, 2 * k * (1 - delta(y)));
    CHECK(joint_cdf_boolean_exp(x, x, y * r, e) == doctest::Approx(via_delta).epsilon(1e-12));
  }
  CHECK(std::pow(x, 2 * k * (1 - delta_variant(0))) != doctest::Approx(cdf_boolean_exp(x, e)));
}

TEST_CASE("sampled field marginal passes KS against the closed form") {
  for (double psi : {0.05, 0.2}) {
    const EnergyFieldSpec e = spec_psi(psi);
    const auto xs = sample_field_at_center(e, 20000, 17);
    const KsResult ks = ks_test(xs, [&](double x) { return cdf_boolean_exp(std::min(x, 1.0), e); });
    CHECK(ks.pass);
    CHECK(*std::max_element(xs.begin(), xs.end()) <= 1.0);
    const SampleMoments m = sample_moments(xs);
    const FieldMoments exact = moments_boolean_exp(e);
    CHECK(std::abs(m.mean - exact.mean) < 3 * m.std_error());
  }
  const EnergyFieldSpec p = spec_psi(0.2, Kernel::BooleanMaxPowerLaw);
  const auto xs = sample_field_at_center(p, 20000, 19);
  CHECK(ks_test(xs, [&](double x) { return x <= 0 ? 0.0 : cdf_boolean_plaw(std::min(x, 1.0), p); }).pass);
}

TEST_CASE("sum field dominates the max field pathwise and has the Campbell mean") {
  const EnergyFieldSpec e = spec_psi(0.2, Kernel::ShotNoiseExp);
  const Window w = field_window(e);
  std::vector<double> sums;
  bool dominates = true;
  int above_half_max = 0;
  int above_half_sum = 0;
  for (std::uint64_t t = 0; t < 5000; ++t) {
    Rng rng = make_stream(23, t, StreamId::EnergyCenters);
    const FieldRealization real = realize_field(e, w, rng);
    const double s = intensity_at(real, w.center(), Kernel::ShotNoiseExp);
    const double m = intensity_at(real, w.center(), Kernel::BooleanMaxExp);
    dominates = dominates && s >= m;
    above_half_max += m > 0.5;
    above_half_sum += s > 0.5;
    sums.push_back(s);
  }
  CHECK(dominates);
  CHECK(above_half_sum >= above_half_max);
  const SampleMoments m = sample_moments(sums);
  CHECK(std::abs(m.mean - shot_noise_mean(e)) < 3 * m.std_error());
}
