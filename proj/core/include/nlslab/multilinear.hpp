#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/lattice_sum.hpp"
#include "nlslab/multiplier.hpp"

namespace nlslab {

/// (xi_1, ..., xi_k) with xi_1 + ... + xi_k = 0.
template <int K>
using FrequencyTuple = std::array<Vec2, K>;

enum class SupportHint {
  none,
  /// Vanishes unless max_j |xi_j| > threshold.
  requires_max_gt_N,
};

/// Single-frequency factors of a product symbol prefactor * f1(xi1) ... fk(xik).
struct SeparableFactors {
  std::vector<std::function<double(const Vec2&)>> factors;
  cplx prefactor = 1.0;
};

/// A pure symbol on Sigma_k.
template <int K>
struct SymbolEvaluator {
  std::function<cplx(const FrequencyTuple<K>&)> fn;
  SupportHint support_hint = SupportHint::none;
  double support_threshold = 0.0;
  std::optional<SeparableFactors> separable;

  bool is_separable() const { return separable.has_value(); }
  cplx operator()(const FrequencyTuple<K>& t) const { return fn(t); }
};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm2(const Vec2& a) { return dot(a, a); }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a) { return {-a[0], -a[1]}; }

/// -|xi1|^2 + |xi2|^2 - ... - |xi_{k-1}|^2 + |xi_k|^2.
double alpha_k(std::span<const Vec2> tuple);
template <int K>
double alpha_k(const FrequencyTuple<K>& t) {
  return alpha_k(std::span<const Vec2>(t.data(), t.size()));
}

template <int K>
SymbolEvaluator<K> constant_symbol(cplx value) {
  SymbolEvaluator<K> s;
  s.fn = [value](const FrequencyTuple<K>&) { return value; };
  s.separable = SeparableFactors{std::vector<std::function<double(const Vec2&)>>(K, [](const Vec2&) { return 1.0; }),
                                 value};
  return s;
}

/// c * M.
template <int K>
SymbolEvaluator<K> scaled(const SymbolEvaluator<K>& m, cplx c) {
  SymbolEvaluator<K> s = m;
  s.fn = [f = m.fn, c](const FrequencyTuple<K>& t) { return c * f(t); };
  if (m.separable) s.separable->prefactor *= c;
  return s;
}

/// c * M * alpha_k.
template <int K>
SymbolEvaluator<K> times_alpha(const SymbolEvaluator<K>& m, cplx c = 1.0) {
  SymbolEvaluator<K> s;
  s.fn = [f = m.fn, c](const FrequencyTuple<K>& t) { return c * f(t) * alpha_k(t); };
  s.support_hint = m.support_hint;
  s.support_threshold = m.support_threshold;
  return s;
}

/// Average over G_k: permutations of odd slots, of even slots, and the
/// swap-conjugate map M -> conj M(xi2, xi1, ..., xi_k, xi_{k-1}).
template <int K>
SymbolEvaluator<K> symmetrize(const SymbolEvaluator<K>& m) {
  static_assert(K % 2 == 0 && K >= 2 && K <= 6);
  constexpr int H = K / 2;
  std::vector<std::array<int, H>> perms;
  std::array<int, H> p{};
  for (int i = 0; i < H; ++i) p[i] = i;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  SymbolEvaluator<K> s;
  s.fn = [f = m.fn, perms](const FrequencyTuple<K>& t) {
    cplx acc = 0.0;
    FrequencyTuple<K> a, b;
    for (const auto& po : perms) {
      for (const auto& pe : perms) {
        for (int i = 0; i < H; ++i) {
          a[2 * i] = t[2 * po[i]];
          a[2 * i + 1] = t[2 * pe[i] + 1];
        }
        for (int i = 0; i < H; ++i) {
          b[2 * i] = a[2 * i + 1];
          b[2 * i + 1] = a[2 * i];
        }
        acc += f(a) + std::conj(f(b));
      }
    }
    return acc / static_cast<double>(2 * perms.size() * perms.size());
  };
  s.support_hint = m.support_hint;
  s.support_threshold = m.support_threshold;
  return s;
}

/// X(M)(xi_1, ..., xi_{k+2}) = M(xi_123, xi_4, ..., xi_{k+2}).
template <int K>
SymbolEvaluator<K + 2> extend_X(const SymbolEvaluator<K>& m) {
  SymbolEvaluator<K + 2> s;
  s.fn = [f = m.fn](const FrequencyTuple<K + 2>& t) {
    FrequencyTuple<K> r;
    r[0] = t[0] + t[1] + t[2];
    for (int i = 1; i < K; ++i) r[i] = t[i + 2];
    return f(r);
  };
  return s;
}

/// Spectrum of conj(u): d(k) = conj(c(-k)).
Spectrum conjugate_spectrum(const Spectrum& spectrum);

/// L^2 Re sum_xi M(xi, -xi) |c(xi)|^2.
double eval_lambda2(const SymbolEvaluator<2>& m, const Spectrum& spectrum);

using TupleMask = std::function<bool(const FrequencyTuple<4>&)>;

/// L^2 Re sum_{Sigma_4} M(xi) c(xi1) d(xi2) c(xi3) d(xi4), d = conj_spectrum.
/// Direct enumeration over the retained band; rejects non-dealiased input.
double eval_lambda4_direct(const SymbolEvaluator<4>& m, const Spectrum& spectrum, const TupleMask& mask = {});

/// Same sum with arbitrary slot coefficient functions.
double lambda4_form(const SymbolEvaluator<4>& m, const std::array<const Spectrum*, 4>& slots,
                    const TupleMask& mask = {});

/// FFT quadrature for product symbols; rejects non-separable symbols.
double eval_lambda4_separable(const SymbolEvaluator<4>& m, const Spectrum& spectrum);
double lambda4_form_separable(const SeparableFactors& factors, const std::array<const Spectrum*, 4>& slots);

/// Lambda_6(X(M); u) as the quadrilinear form M(w^, conj u, u, conj u) with
/// w = P_K(|u|^2 u). Rejects symbols that fail a sampled G_4 symmetry check.
double eval_lambda6_substitution(const SymbolEvaluator<4>& m, const Spectrum& spectrum);
/// The same form without the symmetry check (for i times a symmetric symbol).
double lambda6_form(const SymbolEvaluator<4>& m, const Spectrum& spectrum);

/// Throws std::invalid_argument when M differs from its G_4 images on 100
/// sampled lattice tuples of the spectrum's retained band.
void require_g4_symmetric(const SymbolEvaluator<4>& m, const Grid2D& grid);

struct DerivativeIdentity {
  double chain_rule = 0.0;  // d/dt Lambda_4 with the semi-discrete rhs in each slot
  double formula = 0.0;     // Lambda_4(i M alpha_4) - sign * Lambda_6(4 i X(M))
  double scale = 0.0;       // magnitude of the individual terms
  double residual = 0.0;
};

/// Both sides of the differentiation formula and |a - b| / (|a| + |b| + eps),
/// eps = 1e-3 * scale. u is projected onto the retained band first. Returns
/// residual 0 for the zero field.
DerivativeIdentity derivative_identity(const SymbolEvaluator<4>& m, const Field& u, const IMethodParams& params);
double derivative_identity_residual(const SymbolEvaluator<4>& m, const Field& u, const IMethodParams& params);

}  // namespace nlslab
