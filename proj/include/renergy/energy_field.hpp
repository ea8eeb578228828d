#pragma once

#include <cmath>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <string_view>

#include "renergy/geometry.hpp"

namespace renergy {

enum class Kernel {
  BooleanMaxExp,       // g = gamma * max_Y exp(-|X-Y|^2 / nu)
  ShotNoiseExp,        // g = gamma * sum_Y exp(-|X-Y|^2 / nu)
  BooleanMaxPowerLaw,  // g = gamma * max_Y 1 / (1 + |X-Y|^2 / nu)
};

std::string_view to_string(Kernel k);
Kernel kernel_from_string(std::string_view s);

struct EnergyFieldSpec {
  double gamma = 1;     // peak intensity, carried as harvestable watts per unit aperture
  double lambda_e = 1;  // energy-centre density [1/km^2]
  double nu = 1;        // shape parameter [km^2]
  Kernel kernel = Kernel::BooleanMaxExp;

  bool operator==(const EnergyFieldSpec&) const = default;

  // Characteristic parameter; the marginal law of the Boolean field depends on
  // (gamma, psi) only.
  double psi() const { return nu * lambda_e; }
};

EnergyFieldSpec make_field_spec(double gamma, double lambda_e, double nu,
                                Kernel kernel = Kernel::BooleanMaxExp);

template <typename Scalar>
Scalar decay_exp(Scalar d, Scalar nu) {
  using std::exp;
  return exp(-d * d / nu);
}

template <typename Scalar>
Scalar decay_power_law(Scalar d, Scalar nu) {
  return Scalar(1) / (Scalar(1) + d * d / nu);
}

// Decay evaluated from a squared distance.
inline double kernel_decay_sq(Kernel k, double d2, double nu) {
  return k == Kernel::BooleanMaxPowerLaw ? 1.0 / (1.0 + d2 / nu) : std::exp(-d2 / nu);
}

// Area of the intersection of two disks with radii r1, r2 whose centres are d apart.
template <typename Scalar>
Scalar lens_area(Scalar r1, Scalar r2, Scalar d) {
  using std::acos;
  using std::sqrt;
  using std::abs;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (r1 <= 0 || r2 <= 0 || d >= r1 + r2) return Scalar(0);
  if (d <= abs(r1 - r2)) {
    const Scalar r = r1 < r2 ? r1 : r2;
    return pi * r * r;
  }
  auto clamp1 = [](Scalar c) { return c > 1 ? Scalar(1) : (c < -1 ? Scalar(-1) : c); };
  const Scalar c1 = clamp1((r1 * r1 + d * d - r2 * r2) / (2 * d * r1));
  const Scalar c2 = clamp1((r2 * r2 + d * d - r1 * r1) / (2 * d * r2));
  const Scalar h = (r1 * r1 + d * d - r2 * r2) / (2 * d);
  const Scalar s = r1 * r1 - h * h;
  return r1 * r1 * acos(c1) + r2 * r2 * acos(c2) - d * sqrt(s > 0 ? s : Scalar(0));
}

// One draw of the energy-centre process together with a bucket index for
// repeated evaluation. Immutable once built.
class FieldRealization {
public:
  FieldRealization(const EnergyFieldSpec& spec, PointSet centers, const Window& window);

  const EnergyFieldSpec& spec() const { return spec_; }
  const PointSet& centers() const { return index_.set(); }
  const Window& window() const { return index_.window(); }
  const GridIndex& index() const { return index_; }

private:
  EnergyFieldSpec spec_;
  GridIndex index_;
};

FieldRealization realize_field(const EnergyFieldSpec& spec, const Window& window, Rng& rng);

// Field intensity at x under the realization's own kernel.
double intensity_at(const FieldRealization& real, const Point& x);
// Same centres, different kernel (used to compare max and sum fields pathwise).
double intensity_at(const FieldRealization& real, const Point& x, Kernel kernel);

// Pr(g(X) <= x) for the Boolean exponential field: (x/gamma)^(pi psi).
double cdf_boolean_exp(double x, const EnergyFieldSpec& spec);
// Pr(g(X) <= x) for the Boolean power-law field: exp(-pi psi (gamma/x - 1)).
double cdf_boolean_plaw(double x, const EnergyFieldSpec& spec);

// Distance at which a single centre's decayed intensity equals x.
double influence_radius(double x, const EnergyFieldSpec& spec);

struct FieldMoments {
  double mean = 0;
  double second_moment = 0;
  double variance = 0;
};

FieldMoments moments_boolean_exp(const EnergyFieldSpec& spec);

// Campbell mean of the shot-noise field: pi gamma psi.
double shot_noise_mean(const EnergyFieldSpec& spec);

// Joint CDF Pr(g(X1) <= x1, g(X2) <= x2) of the Boolean exponential field at
// two points distance d apart, from the exact lens area of the two
// influence disks.
double joint_cdf_boolean_exp(double x1, double x2, double d, const EnergyFieldSpec& spec);

// Plain-text raster "x y g" (one row per grid node) for heat-map plots.
void write_raster(const FieldRealization& real, Index nx, Index ny, std::ostream& out);

}  // namespace renergy
