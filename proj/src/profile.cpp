#include "horoflow/profile.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "horoflow/error.hpp"

namespace horoflow {
namespace {

constexpr double kPi = std::numbers::pi;

double sphere_radial(const GeodesicSphereProfile& s, double polar, double azimuth) {
  require(s.radius > 0.0 && s.offset >= 0.0 && s.offset < s.radius, ErrorCode::InvalidInput,
          "geodesic sphere needs 0 <= offset < radius");
  // cos of the angle between the sample direction and the centre direction
  const double cos_gamma = std::sin(polar) * std::sin(s.axis_polar) * std::cos(azimuth - s.axis_azimuth) +
                           std::cos(polar) * std::cos(s.axis_polar);
  // Points at distance r along the ray satisfy
  //   cosh r cosh d - sinh r sinh d cos_gamma = cosh R.
  const double a = std::cosh(s.offset);
  const double b = std::sinh(s.offset) * cos_gamma;
  const double norm = std::sqrt(a * a - b * b);
  return std::atanh(b / a) + std::acosh(std::cosh(s.radius) / norm);
}

double legendre_radial(const LegendreProfile& p, double polar) {
  const double x = std::cos(polar);
  // Bonnet recursion
  double value = 0.0;
  double prev = 1.0;
  double cur = x;
  for (std::size_t l = 0; l < p.coefficients.size(); ++l) {
    double pl;
    if (l == 0) {
      pl = 1.0;
    } else if (l == 1) {
      pl = x;
    } else {
      const double next = ((2.0 * l - 1.0) * x * cur - (l - 1.0) * prev) / static_cast<double>(l);
      prev = cur;
      cur = next;
      pl = next;
    }
    value += p.coefficients[l] * pl;
  }
  return value;
}

double harmonic_radial(const HarmonicProfile& h, double polar, double azimuth) {
  double value = h.base;
  const double x = std::cos(polar);
  for (const auto& mode : h.modes) {
    const int am = std::abs(mode.m);
    require(mode.l >= 0 && am <= mode.l, ErrorCode::InvalidInput, "harmonic mode needs |m| <= l");
    const double plm = std::assoc_legendre(static_cast<unsigned>(mode.l), static_cast<unsigned>(am), x);
    const double angular = mode.m >= 0 ? std::cos(am * azimuth) : std::sin(am * azimuth);
    value += mode.amplitude * plm * angular;
  }
  return value;
}

}  // namespace

double radial_value(const RadialProfile& profile, double polar, double azimuth) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GeodesicSphereProfile>) {
          return sphere_radial(p, polar, azimuth);
        } else if constexpr (std::is_same_v<P, LegendreProfile>) {
          return legendre_radial(p, polar);
        } else {
          return harmonic_radial(p, polar, azimuth);
        }
      },
      profile);
}

bool is_axisymmetric(const RadialProfile& profile) {
  if (const auto* s = std::get_if<GeodesicSphereProfile>(&profile)) {
    return s->offset == 0.0 || std::sin(s->axis_polar) == 0.0;
  }
  if (const auto* h = std::get_if<HarmonicProfile>(&profile)) {
    for (const auto& m : h->modes)
      if (m.m != 0 && m.amplitude != 0.0) return false;
  }
  return true;
}

std::vector<double> periodic_interpolate(std::span<const double> samples, double x0,
                                         std::span<const double> targets) {
  const std::size_t n = samples.size();
  require(n >= 2 && n % 2 == 0, ErrorCode::InvalidInput, "periodic interpolation needs an even sample count");
  const std::size_t half = n / 2;
  std::vector<double> a(half + 1, 0.0);
  std::vector<double> b(half + 1, 0.0);
  for (std::size_t l = 0; l <= half; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = 2.0 * kPi * static_cast<double>(l * i % n) / static_cast<double>(n);
      a[l] += samples[i] * std::cos(angle);
      b[l] += samples[i] * std::sin(angle);
    }
    a[l] *= 2.0 / static_cast<double>(n);
    b[l] *= 2.0 / static_cast<double>(n);
  }
  std::vector<double> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double x = targets[t] - x0;
    double value = 0.5 * a[0] + 0.5 * a[half] * std::cos(static_cast<double>(half) * x);
    for (std::size_t l = 1; l < half; ++l) {
      value += a[l] * std::cos(static_cast<double>(l) * x) + b[l] * std::sin(static_cast<double>(l) * x);
    }
    out[t] = value;
  }
  return out;
}

std::vector<double> cosine_coefficients(std::span<const double> samples) {
  const std::size_t n = samples.size();
  std::vector<double> a(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      a[l] += samples[i] * std::cos(static_cast<double>(l) * (static_cast<double>(i) + 0.5) * kPi / static_cast<double>(n));
    }
    a[l] *= 2.0 / static_cast<double>(n);
  }
  return a;
}

std::vector<double> cosine_synthesis(std::span<const double> coefficients, std::size_t nodes) {
  std::vector<double> out(nodes, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = (static_cast<double>(i) + 0.5) * kPi / static_cast<double>(nodes);
    double value = 0.5 * coefficients[0];
    for (std::size_t l = 1; l < coefficients.size(); ++l) value += coefficients[l] * std::cos(static_cast<double>(l) * u);
    out[i] = value;
  }
  return out;
}

namespace {

// \int_0^pi cos(l u) sin^m(u) du
double cosine_moment(int l, int m) {
  if (l % 2 != 0) return 0.0;
  const double a = 0.5 * (m + l) + 1.0;
  const double b = 0.5 * (m - l) + 1.0;
  double inv_gamma_ab;
  if (b <= 0.0 && b == std::floor(b)) {
    return 0.0;
  } else if (b > 0.0) {
    inv_gamma_ab = std::exp(-std::lgamma(a) - std::lgamma(b));
  } else {
    // 1/Gamma(b) = sin(pi b) Gamma(1 - b) / pi
    inv_gamma_ab = std::sin(kPi * b) / kPi * std::exp(std::lgamma(1.0 - b) - std::lgamma(a));
  }
  const double sign = ((l / 2) % 2 == 0) ? 1.0 : -1.0;
  return kPi * sign * std::exp(std::lgamma(m + 1.0) - m * std::log(2.0)) * inv_gamma_ab;
}

}  // namespace

const std::vector<double>& polar_weights(int nodes, int power) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({nodes, power});
  if (!inserted) return it->second;
  require(nodes >= 1 && power >= 0, ErrorCode::InvalidInput, "polar weights need nodes >= 1, power >= 0");
  std::vector<double> moments(static_cast<std::size_t>(nodes));
  for (int l = 0; l < nodes; ++l) moments[static_cast<std::size_t>(l)] = cosine_moment(l, power);
  std::vector<double>& w = it->second;
  w.assign(static_cast<std::size_t>(nodes), 0.0);
  for (int i = 0; i < nodes; ++i) {
    const double u = (i + 0.5) * kPi / nodes;
    double acc = 0.5 * moments[0];
    for (int l = 1; l < nodes; ++l) acc += std::cos(l * u) * moments[static_cast<std::size_t>(l)];
    w[static_cast<std::size_t>(i)] = 2.0 / nodes * acc;
  }
  return w;
}

}  // namespace horoflow
