#pragma once

#include <complex>
#include <vector>

#include "crabnet/params.hpp"
#include "crabnet/scenario.hpp"

namespace crabnet {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major complex matrix.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// UPA response toward azimuth phi (relative to the array normal): 1_N (x) s~,
/// [s~]_n = exp(j*pi*n*sin(phi)), n = 0..N-1. Length N^2, norm N.
ComplexVector spatial_signature(int n, double phi_deg);

/// Half-power beamwidth (deg) of an N x N array: 102 / N.
double hpbw_of(int n);
/// Array side producing the given HPBW: round(102 / alpha), at least 1.
int elements_for(double alpha_deg);

/// Unit-norm steering weights (1/N) s(N, phi).
ComplexVector beamforming_vector(int n, double phi_deg);

/// A gNB beam in the global frame. Side N uses N^2 array elements.
class Beam {
 public:
  Beam() = default;
  static Beam null() { return {}; }
  /// Beam toward `direction_deg` with HPBW `hpbw_deg`; array side from elements_for.
  static Beam make(double direction_deg, double hpbw_deg);

  bool is_null() const { return null_; }
  double direction() const { return direction_; }
  double hpbw() const { return hpbw_; }
  int side() const { return side_; }
  int elements() const { return null_ ? 0 : side_ * side_; }

  friend bool operator==(const Beam&, const Beam&) = default;

 private:
  bool null_ = true;
  double direction_ = 0.0;
  double hpbw_ = 0.0;
  int side_ = 0;
};

/// Two beams of one gNB overlap: circular distance of directions < mean HPBW.
bool beams_conflict(const Beam& a, const Beam& b);

/// Geometric coverage: beam non-null, zone center within hpbw/2 of the beam
/// direction (inclusive) and within range_m of the site.
bool covers(const GnbSite& site, const Beam& beam, Vec2 zone_center, double range_m);

/// Achieved bits of one RB in one frame slot: W tau log2(1 + P / (N0 W + I)).
double rate_rb(double signal_w, double interference_w, const RadioParams& radio);

/// Orientation of a gNB sector panel serving a beam: the site carries four panels
/// at psi + k*90 deg; a beam uses the one whose normal is closest to its direction.
double panel_normal(const GnbSite& site, double direction_deg);

/// Sum_{n<N} exp(j*pi*n*x): the one-dimensional array factor.
Complex array_factor(int n, double x);

}  // namespace crabnet
