#pragma once

// Hand-rolled generators shared by the unit, property and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>

#include "nlslab/grid.hpp"
#include "nlslab/multilinear.hpp"
#include "nlslab/multiplier.hpp"

namespace nlslab::testing {

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline cplx gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  return {re, n(rng)};
}

/// Complex Gaussian coefficients times <xi>^{-decay} on |k|_inf <= radius
/// (radius < 0 selects the dealiasing cutoff).
inline Spectrum random_spectrum(const Grid2D& grid, std::uint64_t seed, int radius = -1, double decay = 1.0) {
  std::mt19937_64 rng(seed);
  Spectrum s(grid);
  const int r = radius < 0 ? grid.cutoff : radius;
  for (int k1 = -r; k1 <= r; ++k1)
    for (int k2 = -r; k2 <= r; ++k2) {
      const Vec2 xi = s.xi(k1, k2);
      s.at(k1, k2) = gaussian(rng) * std::pow(1.0 + norm2(xi), -0.5 * decay);
    }
  return s;
}

/// Arbitrary (not band-limited) field with O(1) entries.
inline Field random_field(const Grid2D& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Field u(grid);
  for (auto& v : u.values()) v = gaussian(rng);
  return u;
}

inline Spectrum plane_wave(const Grid2D& grid, int k1, int k2, cplx amplitude = 1.0) {
  Spectrum s(grid);
  s.at(k1, k2) = amplitude;
  return s;
}

/// Real tuple in Sigma_4 with xi_1..xi_3 uniform in [-R, R]^2.
inline FrequencyTuple<4> random_tuple4(std::mt19937_64& rng, double R) {
  FrequencyTuple<4> t{};
  for (int j = 0; j < 3; ++j) t[j] = {uniform(rng, -R, R), uniform(rng, -R, R)};
  t[3] = {-(t[0][0] + t[1][0] + t[2][0]), -(t[0][1] + t[1][1] + t[2][1])};
  return t;
}

/// Tuple in Sigma_4 with every |xi_j| <= R.
inline FrequencyTuple<4> random_tuple4_in_ball(std::mt19937_64& rng, double R) {
  for (;;) {
    const FrequencyTuple<4> t = random_tuple4(rng, R / 1.5);
    bool ok = true;
    for (const auto& v : t) ok = ok && std::sqrt(norm2(v)) <= R;
    if (ok) return t;
  }
}

/// Integer lattice tuple in Sigma_4 with |k_j|_inf <= K, scaled by h.
inline FrequencyTuple<4> random_lattice_tuple4(std::mt19937_64& rng, int K, double h = 1.0) {
  for (;;) {
    int k[4][2];
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 2; ++c) k[j][c] = uniform_int(rng, -K, K);
    k[3][0] = -(k[0][0] + k[1][0] + k[2][0]);
    k[3][1] = -(k[0][1] + k[1][1] + k[2][1]);
    if (std::abs(k[3][0]) > K || std::abs(k[3][1]) > K) continue;
    FrequencyTuple<4> t{};
    for (int j = 0; j < 4; ++j) t[j] = {k[j][0] * h, k[j][1] * h};
    return t;
  }
}

inline FrequencyTuple<6> random_tuple6(std::mt19937_64& rng, double R) {
  FrequencyTuple<6> t{};
  Vec2 sum{0.0, 0.0};
  for (int j = 0; j < 5; ++j) {
    t[j] = {uniform(rng, -R, R), uniform(rng, -R, R)};
    sum = sum + t[j];
  }
  t[5] = -sum;
  return t;
}

inline double tuple_scale(const FrequencyTuple<4>& t) {
  double s = 0.0;
  for (const auto& v : t) s += norm2(v);
  return s;
}

inline IMethodParams random_params(std::mt19937_64& rng) {
  const double N = uniform(rng, 1.0, 8.0);
  return IMethodParams::make(N, uniform(rng, 0.3, 0.9), uniform(rng, 0.01, 0.5), rng() % 2 ? +1 : -1);
}

inline double rel_err(double a, double b) {
  const double d = std::max(std::abs(a), std::abs(b));
  return d == 0.0 ? 0.0 : std::abs(a - b) / d;
}

}  // namespace nlslab::testing
