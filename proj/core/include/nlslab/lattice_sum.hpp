#pragma once

// Deterministic quadrilinear sums over the retained frequency lattice.
//
// Both kernels evaluate
//     sum_{xi1+xi2+xi3+xi4 = 0}  Re[ M(xi) g1(xi1) g2(xi2) g3(xi3) g4(xi4) ]
// with every xi_j in the retained band |k|_inf <= K. Work is split into
// fixed tiles whose partial sums are compensated and then reduced in tile
// order, so the result does not depend on the number of worker threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/parallel.hpp"

namespace nlslab {

/// Dense indexing of the retained band: a = (k1 + K) n + (k2 + K), n = 2K + 1.
struct ActiveLattice {
  int K = 0;
  int n = 1;
  double scale = 1.0;  // 2 pi / L

  ActiveLattice() = default;
  explicit ActiveLattice(const Grid2D& g) : K(g.cutoff), n(2 * g.cutoff + 1), scale(g.freq_scale()) {}

  int size() const { return n * n; }
  int index(int k1, int k2) const { return (k1 + K) * n + (k2 + K); }
  int k1(int a) const { return a / n - K; }
  int k2(int a) const { return a % n - K; }
  int norm2(int a) const { return k1(a) * k1(a) + k2(a) * k2(a); }
  Vec2 xi(int a) const { return {k1(a) * scale, k2(a) * scale}; }
};

/// Coefficient function of one slot restricted to the retained band.
std::vector<cplx> active_coefficients(const Spectrum& spectrum, const ActiveLattice& lattice);

using QuadSlots = std::array<std::vector<cplx>, 4>;

struct LatticeSum {
  double value = 0.0;
  /// sum |M| (|Re p| + |Im p|) over all terms, when requested.
  double magnitude = 0.0;
};

namespace detail {

inline double re_mul(double s, const cplx& p) { return s * p.real(); }
inline double re_mul(const cplx& s, const cplx& p) { return s.real() * p.real() - s.imag() * p.imag(); }
inline double abs_of(double s) { return std::abs(s); }
inline double abs_of(const cplx& s) { return std::abs(s); }

inline LatticeSum reduce_tiles(const std::vector<double>& values, const std::vector<double>& magnitudes) {
  LatticeSum out;
  out.value = ordered_sum(values);
  out.magnitude = magnitudes.empty() ? 0.0 : ordered_sum(magnitudes);
  return out;
}

}  // namespace detail

/// Enumerates (xi1, xi2, xi3) and closes with xi4 = -(xi1+xi2+xi3).
/// `sym(a1, a2, a3, a4)` returns a real or complex symbol value. One tile per xi1.
template <bool WithMagnitude = false, class Symbol>
LatticeSum quadrilinear_sum(const ActiveLattice& lat, const QuadSlots& g, const Symbol& sym) {
  const int K = lat.K;
  const int n = lat.n;
  const int count = lat.size();
  std::vector<double> tile(count, 0.0);
  std::vector<double> tile_mag(WithMagnitude ? count : 0, 0.0);

  parallel_for(static_cast<std::size_t>(count), [&](std::size_t t) {
    const int a1 = static_cast<int>(t);
    const cplx g1 = g[0][a1];
    if (g1 == 0.0) return;
    const int x1 = lat.k1(a1), y1 = lat.k2(a1);
    KahanSum acc, mag;
    for (int a2 = 0; a2 < count; ++a2) {
      const cplx g12 = g1 * g[1][a2];
      if (g12 == 0.0) continue;
      const int sx = x1 + lat.k1(a2), sy = y1 + lat.k2(a2);
      const int x3lo = std::max(-K, -K - sx), x3hi = std::min(K, K - sx);
      const int y3lo = std::max(-K, -K - sy), y3hi = std::min(K, K - sy);
      for (int x3 = x3lo; x3 <= x3hi; ++x3) {
        const int x4 = -sx - x3;
        double row = 0.0, row_mag = 0.0;
        for (int y3 = y3lo; y3 <= y3hi; ++y3) {
          const int y4 = -sy - y3;
          const int a3 = (x3 + K) * n + (y3 + K);
          const int a4 = (x4 + K) * n + (y4 + K);
          const cplx p = g12 * g[2][a3] * g[3][a4];
          const auto s = sym(a1, a2, a3, a4);
          row += detail::re_mul(s, p);
          if constexpr (WithMagnitude) row_mag += detail::abs_of(s) * (std::abs(p.real()) + std::abs(p.imag()));
        }
        acc.add(row);
        if constexpr (WithMagnitude) mag.add(row_mag);
      }
    }
    tile[a1] = acc.value();
    if constexpr (WithMagnitude) tile_mag[a1] = mag.value();
  });
  return detail::reduce_tiles(tile, tile_mag);
}

/// Real parts of the slot coefficients in two layouts: forward (row-major
/// over k2) and with every row reversed, so that all four slot sequences
/// along a pair-parametrized row are contiguous and ascending.
struct PairSlots {
  std::vector<double> re1, im1, re3, im3;  // forward
  std::vector<double> re2, im2, re4, im4;  // rows reversed
};

/// Copy of per-mode values with every k2-row reversed.
std::vector<double> reverse_rows(std::span<const double> values, const ActiveLattice& lattice);
PairSlots make_pair_slots(const QuadSlots& g, const ActiveLattice& lattice);

/// Which lattice symmetries of the summand may be used to skip cells.
///   none:  no reduction
///   swap:  (p, q) ~ (q, p)          (xi2 <-> xi4, equal slots 2 and 4)
///   full:  also (p, q) ~ (-q, -p)   (xi1 <-> xi3, equal slots 1 and 3)
/// The symbol must be invariant under the same maps.
enum class PairSymmetry { none, swap, full };

namespace detail {

// Weight of cell (p, q): 0 unless it is the lexicographically smallest member
// of its orbit, else the orbit size.
inline int orbit_weight(PairSymmetry sym, int px, int py, int qx, int qy) {
  if (sym == PairSymmetry::none) return 1;
  std::array<std::array<int, 4>, 4> orbit{{{px, py, qx, qy}, {qx, qy, px, py}, {-qx, -qy, -px, -py}, {-px, -py, -qx, -qy}}};
  const int count = sym == PairSymmetry::swap ? 2 : 4;
  for (int i = 1; i < count; ++i)
    if (orbit[i] < orbit[0]) return 0;
  int distinct = 1;
  for (int i = 1; i < count; ++i) {
    bool seen = false;
    for (int j = 0; j < i; ++j) seen = seen || orbit[j] == orbit[i];
    if (!seen) ++distinct;
  }
  return distinct;
}

}  // namespace detail

/// Enumerates the pair (p, q) = (xi1 + xi2, xi1 + xi4) and then xi1, with
///   xi2 = p - xi1,  xi3 = xi1 - p - q,  xi4 = q - xi1,
/// and returns sum Re[ s(xi) g1 g2 g3 g4 ] for a real symbol s.
///
/// PairSymbol provides
///   Ctx  pair(int px, int py, int qx, int qy) const;   // Ctx has `bool active`
///   void fill(const Ctx&, int o1, int o2, int o3, int o4, int len, double* out) const;
/// `fill` writes the symbol along one row of xi1: slots 1 and 3 start at
/// forward offsets o1, o3 and slots 2 and 4 at row-reversed offsets o2, o4,
/// all advancing by one per entry. Inactive pairs are skipped. One tile per p.
template <class PairSymbol>
double pair_parametrized_sum(const ActiveLattice& lat, const PairSlots& g, const PairSymbol& sym,
                             PairSymmetry symmetry = PairSymmetry::none) {
  const int K = lat.K;
  const int n = lat.n;
  const int span = 4 * K + 1;
  const int tiles = span * span;
  std::vector<double> tile(tiles, 0.0);

  parallel_for(static_cast<std::size_t>(tiles), [&](std::size_t t) {
    const int px = static_cast<int>(t) / span - 2 * K;
    const int py = static_cast<int>(t) % span - 2 * K;
    std::vector<double> prod(n), s(n);
    KahanSum acc;
    for (int qx = -2 * K; qx <= 2 * K; ++qx) {
      const int x1lo = std::max({-K, px - K, qx - K, px + qx - K});
      const int x1hi = std::min({K, px + K, qx + K, px + qx + K});
      if (x1lo > x1hi) continue;
      for (int qy = -2 * K; qy <= 2 * K; ++qy) {
        const int y1lo = std::max({-K, py - K, qy - K, py + qy - K});
        const int y1hi = std::min({K, py + K, qy + K, py + qy + K});
        if (y1lo > y1hi) continue;
        const int weight = detail::orbit_weight(symmetry, px, py, qx, qy);
        if (weight == 0) continue;
        const auto ctx = sym.pair(px, py, qx, qy);
        if (!ctx.active) continue;
        const int len = y1hi - y1lo + 1;
        double cell = 0.0;
        for (int x1 = x1lo; x1 <= x1hi; ++x1) {
          const int x2 = px - x1, x3 = x1 - px - qx, x4 = qx - x1;
          const int o1 = (x1 + K) * n + (y1lo + K);
          const int o3 = (x3 + K) * n + (y1lo - py - qy + K);
          const int o2 = (x2 + K) * n + (K - (py - y1lo));
          const int o4 = (x4 + K) * n + (K - (qy - y1lo));
          const double* __restrict r1 = g.re1.data() + o1;
          const double* __restrict i1 = g.im1.data() + o1;
          const double* __restrict r2 = g.re2.data() + o2;
          const double* __restrict i2 = g.im2.data() + o2;
          const double* __restrict r3 = g.re3.data() + o3;
          const double* __restrict i3 = g.im3.data() + o3;
          const double* __restrict r4 = g.re4.data() + o4;
          const double* __restrict i4 = g.im4.data() + o4;
          double* __restrict pr = prod.data();
          for (int i = 0; i < len; ++i) {
            const double ar = r1[i] * r2[i] - i1[i] * i2[i], ai = r1[i] * i2[i] + i1[i] * r2[i];
            const double br = r3[i] * r4[i] - i3[i] * i4[i], bi = r3[i] * i4[i] + i3[i] * r4[i];
            pr[i] = ar * br - ai * bi;
          }
          sym.fill(ctx, o1, o2, o3, o4, len, s.data());
          double row = 0.0;
          for (int i = 0; i < len; ++i) row += s[i] * pr[i];
          cell += row;
        }
        acc.add(weight * cell);
      }
    }
    tile[t] = acc.value();
  });
  return ordered_sum(tile);
}

}  // namespace nlslab
