#include "renergy/energy_field.hpp"

#include <ostream>
#include <string>

#include "renergy/errors.hpp"

namespace renergy {

std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::BooleanMaxExp: return "boolean_exp";
    case Kernel::ShotNoiseExp: return "shot_noise_exp";
    case Kernel::BooleanMaxPowerLaw: return "boolean_power_law";
  }
  return "?";
}

Kernel kernel_from_string(std::string_view s) {
  if (s == "boolean_exp") return Kernel::BooleanMaxExp;
  if (s == "shot_noise_exp") return Kernel::ShotNoiseExp;
  if (s == "boolean_power_law") return Kernel::BooleanMaxPowerLaw;
  throw InvalidParameter("field.kernel must be one of boolean_exp, shot_noise_exp, boolean_power_law (got '" +
                         std::string(s) + "')");
}

EnergyFieldSpec make_field_spec(double gamma, double lambda_e, double nu, Kernel kernel) {
  require(std::isfinite(gamma) && gamma > 0, "field.gamma > 0");
  require(std::isfinite(lambda_e) && lambda_e > 0, "field.lambda_e > 0");
  require(std::isfinite(nu) && nu > 0, "field.nu > 0");
  return EnergyFieldSpec{gamma, lambda_e, nu, kernel};
}

FieldRealization::FieldRealization(const EnergyFieldSpec& spec, PointSet centers, const Window& window)
    : spec_(spec), index_(centers, window) {}

FieldRealization realize_field(const EnergyFieldSpec& spec, const Window& window, Rng& rng) {
  return FieldRealization(spec, sample_ppp(spec.lambda_e, window, rng), window);
}

double intensity_at(const FieldRealization& real, const Point& x) {
  return intensity_at(real, x, real.spec().kernel);
}

double intensity_at(const FieldRealization& real, const Point& x, Kernel kernel) {
  const auto& spec = real.spec();
  const auto& centers = real.centers();
  if (centers.empty()) return 0.0;
  if (kernel != Kernel::ShotNoiseExp) {
    // Both decays are strictly decreasing, so the max sits at the nearest centre.
    const double d = real.index().nearest(x).distance;
    return spec.gamma * kernel_decay_sq(kernel, d * d, spec.nu);
  }
  const Window& w = real.window();
  double sum = 0;
  for (Index i = 0; i < centers.size(); ++i) {
    const double dx = x.x() - centers.points(0, i);
    const double dy = x.y() - centers.points(1, i);
    if (!w.wrap) {
      sum += std::exp(-(dx * dx + dy * dy) / spec.nu);
      continue;
    }
    for (int ix = -1; ix <= 1; ++ix) {
      for (int iy = -1; iy <= 1; ++iy) {
        const double ex = dx + ix * w.width;
        const double ey = dy + iy * w.height;
        sum += std::exp(-(ex * ex + ey * ey) / spec.nu);
      }
    }
  }
  return spec.gamma * sum;
}

double cdf_boolean_exp(double x, const EnergyFieldSpec& spec) {
  require(spec.kernel == Kernel::BooleanMaxExp, "cdf_boolean_exp needs kernel boolean_exp");
  require_domain(x >= 0 && x <= spec.gamma, "cdf_boolean_exp: need 0 <= x <= gamma");
  return std::pow(x / spec.gamma, std::numbers::pi * spec.psi());
}

double cdf_boolean_plaw(double x, const EnergyFieldSpec& spec) {
  require(spec.kernel == Kernel::BooleanMaxPowerLaw, "cdf_boolean_plaw needs kernel boolean_power_law");
  require_domain(x > 0 && x <= spec.gamma, "cdf_boolean_plaw: need 0 < x <= gamma");
  return std::exp(-std::numbers::pi * spec.psi() * (spec.gamma / x - 1.0));
}

double influence_radius(double x, const EnergyFieldSpec& spec) {
  require_domain(x > 0 && x <= spec.gamma, "influence_radius: need 0 < x <= gamma");
  if (spec.kernel == Kernel::BooleanMaxPowerLaw) return std::sqrt(spec.nu * (spec.gamma / x - 1.0));
  return std::sqrt(spec.nu * std::log(spec.gamma / x));
}

FieldMoments moments_boolean_exp(const EnergyFieldSpec& spec) {
  require(spec.kernel == Kernel::BooleanMaxExp, "moments_boolean_exp needs kernel boolean_exp");
  const double k = std::numbers::pi * spec.psi();
  const double g = spec.gamma;
  return {k * g / (1 + k), k * g * g / (2 + k), k * g * g / ((2 + k) * (1 + k) * (1 + k))};
}

double shot_noise_mean(const EnergyFieldSpec& spec) {
  require(spec.kernel == Kernel::ShotNoiseExp, "shot_noise_mean needs kernel shot_noise_exp");
  return std::numbers::pi * spec.gamma * spec.psi();
}

double joint_cdf_boolean_exp(double x1, double x2, double d, const EnergyFieldSpec& spec) {
  require(spec.kernel == Kernel::BooleanMaxExp, "joint_cdf_boolean_exp needs kernel boolean_exp");
  require_domain(x1 > 0 && x1 <= spec.gamma && x2 > 0 && x2 <= spec.gamma,
                 "joint_cdf_boolean_exp: need 0 < x1, x2 <= gamma");
  require_domain(d >= 0, "joint_cdf_boolean_exp: need d >= 0");
  const double r1 = influence_radius(x1, spec);
  const double r2 = influence_radius(x2, spec);
  const double base = std::pow(x1 * x2 / (spec.gamma * spec.gamma), std::numbers::pi * spec.psi());
  return base * std::exp(spec.lambda_e * lens_area(r1, r2, d));
}

void write_raster(const FieldRealization& real, Index nx, Index ny, std::ostream& out) {
  require(nx > 0 && ny > 0, "raster size > 0");
  const Window& w = real.window();
  out.precision(9);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Point p((static_cast<double>(i) + 0.5) * w.width / static_cast<double>(nx),
                    (static_cast<double>(j) + 0.5) * w.height / static_cast<double>(ny));
      out << p.x() << ' ' << p.y() << ' ' << intensity_at(real, p) << '\n';
    }
  }
}

}  // namespace renergy
