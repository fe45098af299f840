#pragma once

#include <span>
#include <variant>
#include <vector>

namespace horoflow {

/// Geodesic sphere of the given radius whose centre sits at hyperbolic
/// distance `offset` from the origin along the direction (axis_polar,
/// axis_azimuth). offset < radius keeps the origin inside, so the sphere is a
/// radial graph. With offset 0 this is the centred sphere r = radius.
struct GeodesicSphereProfile {
  double radius = 1.0;
  double offset = 0.0;
  double axis_polar = 0.0;
  double axis_azimuth = 0.0;
};

/// r(u) = sum_l c_l P_l(cos u), u the polar angle.
struct LegendreProfile {
  std::vector<double> coefficients;
};

/// Real spherical harmonic P_l^|m|(cos t) * (cos m p | sin |m| p), unnormalized.
struct HarmonicMode {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

/// r = base + sum of modes; two-sphere only.
struct HarmonicProfile {
  double base = 1.0;
  std::vector<HarmonicMode> modes;
};

using RadialProfile = std::variant<GeodesicSphereProfile, LegendreProfile, HarmonicProfile>;

double radial_value(const RadialProfile& profile, double polar, double azimuth);
bool is_axisymmetric(const RadialProfile& profile);

/// Trigonometric interpolation of 2*pi-periodic samples taken at
/// x0 + 2*pi*i/N (N even) evaluated at `targets`.
std::vector<double> periodic_interpolate(std::span<const double> samples, double x0,
                                         std::span<const double> targets);

/// Cosine coefficients a_l of cell-centred samples on [0, pi]:
/// f(u_i) = a_0/2 + sum_{l>=1} a_l cos(l u_i).
std::vector<double> cosine_coefficients(std::span<const double> samples);
std::vector<double> cosine_synthesis(std::span<const double> coefficients, std::size_t nodes);

/// Weights for \int_0^pi f(u) sin^power(u) du on the cell-centred grid
/// u_i = (i + 1/2) pi / N, exact for cosine polynomials of degree < N.
/// Results are cached per (N, power).
const std::vector<double>& polar_weights(int nodes, int power);

}  // namespace horoflow
