#include "crabnet/phy.hpp"

#include <cmath>
#include <numbers>

#include "crabnet/error.hpp"

namespace crabnet {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

ComplexVector spatial_signature(int n, double phi_deg) {
  if (n < 1) throw DomainError("spatial_signature: N must be >= 1");
  const double s = std::sin(phi_deg * kDeg);
  ComplexVector tilde(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) tilde[k] = std::polar(1.0, std::numbers::pi * k * s);
  ComplexVector out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int rep = 0; rep < n; ++rep) out.insert(out.end(), tilde.begin(), tilde.end());
  return out;
}

double hpbw_of(int n) {
  if (n < 1) throw DomainError("hpbw_of: N must be >= 1");
  return 102.0 / n;
}

int elements_for(double alpha_deg) {
  if (!(alpha_deg > 0.0)) throw DomainError("elements_for: alpha must be positive");
  return std::max(1, static_cast<int>(std::lround(102.0 / alpha_deg)));
}

ComplexVector beamforming_vector(int n, double phi_deg) {
  ComplexVector v = spatial_signature(n, phi_deg);
  const double scale = 1.0 / n;
  for (Complex& c : v) c *= scale;
  return v;
}

Beam Beam::make(double direction_deg, double hpbw_deg) {
  Beam b;
  b.null_ = false;
  b.direction_ = wrap360(direction_deg);
  b.hpbw_ = hpbw_deg;
  b.side_ = elements_for(hpbw_deg);
  return b;
}

bool beams_conflict(const Beam& a, const Beam& b) {
  if (a.is_null() || b.is_null()) return false;
  return circular_distance(a.direction(), b.direction()) < 0.5 * (a.hpbw() + b.hpbw());
}

bool covers(const GnbSite& site, const Beam& beam, Vec2 zone_center, double range_m) {
  if (beam.is_null()) return false;
  const double d = distance(site.position, zone_center);
  if (d < 1e-9 || d > range_m) return false;
  // Small slack so zones placed exactly on the half-width edge are not lost to rounding.
  return circular_distance(bearing(site.position, zone_center), beam.direction()) <=
         0.5 * beam.hpbw() + 1e-9;
}

double rate_rb(double signal_w, double interference_w, const RadioParams& radio) {
  if (signal_w < 0.0 || interference_w < 0.0) throw DomainError("rate_rb: negative power");
  const double noise = radio.noise_power_w();
  return radio.rb_bandwidth_hz * radio.tau() * std::log2(1.0 + signal_w / (noise + interference_w));
}

double panel_normal(const GnbSite& site, double direction_deg) {
  const double rel = wrap360(direction_deg - site.psi_deg);
  const double k = std::fmod(std::round(rel / 90.0), 4.0);
  return wrap360(site.psi_deg + 90.0 * k);
}

Complex array_factor(int n, double x) {
  const double half = 0.5 * std::numbers::pi * x;
  const double den = std::sin(half);
  if (std::abs(den) < 1e-9) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) acc += std::polar(1.0, std::numbers::pi * k * x);
    return acc;
  }
  return std::polar(std::sin(n * half) / den, (n - 1) * half);
}

}  // namespace crabnet
