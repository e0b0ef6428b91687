#include "nlslab/multilinear.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nlslab/solver.hpp"

namespace nlslab {

std::vector<cplx> active_coefficients(const Spectrum& spectrum, const ActiveLattice& lattice) {
  if (spectrum.grid().cutoff != lattice.K) throw std::invalid_argument("active_coefficients: cutoff mismatch");
  std::vector<cplx> out(lattice.size());
  for (int a = 0; a < lattice.size(); ++a) out[a] = spectrum.at(lattice.k1(a), lattice.k2(a));
  return out;
}

std::vector<double> reverse_rows(std::span<const double> values, const ActiveLattice& lattice) {
  std::vector<double> out(values.size());
  const int n = lattice.n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out[r * n + c] = values[r * n + (n - 1 - c)];
  return out;
}

PairSlots make_pair_slots(const QuadSlots& g, const ActiveLattice& lattice) {
  auto split = [&](const std::vector<cplx>& v, std::vector<double>& re, std::vector<double>& im, bool reversed) {
    re.resize(v.size());
    im.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      re[i] = v[i].real();
      im[i] = v[i].imag();
    }
    if (reversed) {
      re = reverse_rows(re, lattice);
      im = reverse_rows(im, lattice);
    }
  };
  PairSlots out;
  split(g[0], out.re1, out.im1, false);
  split(g[1], out.re2, out.im2, true);
  split(g[2], out.re3, out.im3, false);
  split(g[3], out.re4, out.im4, true);
  return out;
}

double alpha_k(std::span<const Vec2> tuple) {
  if (tuple.size() % 2 != 0) throw std::invalid_argument("alpha_k: k must be even");
  double sum = 0.0;
  for (std::size_t j = 0; j < tuple.size(); ++j) sum += (j % 2 == 0 ? -1.0 : 1.0) * norm2(tuple[j]);
  return sum;
}

Spectrum conjugate_spectrum(const Spectrum& spectrum) {
  Spectrum out(spectrum.grid());
  const int half = spectrum.grid().modes / 2;
  auto reflect = [half](int k) { return k == -half ? k : -k; };
  out.for_each_mode([&](int k1, int k2, cplx& c) { c = std::conj(spectrum.at(reflect(k1), reflect(k2))); });
  return out;
}

double eval_lambda2(const SymbolEvaluator<2>& m, const Spectrum& spectrum) {
  KahanSum acc;
  spectrum.for_each_mode([&](int k1, int k2, const cplx& c) {
    if (c == 0.0) return;
    const Vec2 xi = spectrum.xi(k1, k2);
    acc.add(m({xi, -xi}).real() * std::norm(c));
  });
  const double L = spectrum.grid().length;
  return L * L * acc.value();
}

namespace {

const Grid2D& common_grid(const std::array<const Spectrum*, 4>& slots) {
  for (const auto* s : slots)
    if (s == nullptr || !(s->grid() == slots[0]->grid()))
      throw std::invalid_argument("lambda4_form: slots must share one grid");
  return slots[0]->grid();
}

template <bool WithMagnitude>
LatticeSum form_sum(const SymbolEvaluator<4>& m, const std::array<const Spectrum*, 4>& slots, const TupleMask& mask) {
  const Grid2D& grid = common_grid(slots);
  for (const auto* s : slots)
    if (!s->is_dealiased()) throw std::invalid_argument("lambda4_form: spectrum is not dealiased");
  const ActiveLattice lat(grid);
  QuadSlots g;
  for (int j = 0; j < 4; ++j) g[j] = active_coefficients(*slots[j], lat);

  std::vector<Vec2> xi(lat.size());
  for (int a = 0; a < lat.size(); ++a) xi[a] = lat.xi(a);
  const bool prune = m.support_hint == SupportHint::requires_max_gt_N;
  std::vector<char> high(lat.size(), 1);
  if (prune)
    for (int a = 0; a < lat.size(); ++a) high[a] = std::sqrt(norm2(xi[a])) > m.support_threshold;

  auto sym = [&](int a1, int a2, int a3, int a4) -> cplx {
    if (prune && !(high[a1] || high[a2] || high[a3] || high[a4])) return 0.0;
    const FrequencyTuple<4> t{xi[a1], xi[a2], xi[a3], xi[a4]};
    if (mask && !mask(t)) return 0.0;
    return m.fn(t);
  };
  LatticeSum r = quadrilinear_sum<WithMagnitude>(lat, g, sym);
  const double L2 = grid.length * grid.length;
  r.value *= L2;
  r.magnitude *= L2;
  return r;
}

}  // namespace

double lambda4_form(const SymbolEvaluator<4>& m, const std::array<const Spectrum*, 4>& slots, const TupleMask& mask) {
  return form_sum<false>(m, slots, mask).value;
}

double eval_lambda4_direct(const SymbolEvaluator<4>& m, const Spectrum& spectrum, const TupleMask& mask) {
  if (!spectrum.is_dealiased()) throw std::invalid_argument("eval_lambda4_direct: spectrum is not dealiased");
  const Spectrum d = conjugate_spectrum(spectrum);
  return lambda4_form(m, {&spectrum, &d, &spectrum, &d}, mask);
}

double lambda4_form_separable(const SeparableFactors& factors, const std::array<const Spectrum*, 4>& slots) {
  if (factors.factors.size() != 4) throw std::invalid_argument("lambda4_form_separable: need four factors");
  const Grid2D& grid = common_grid(slots);
  int radius = 0;
  for (const auto* s : slots) radius = std::max(radius, s->support_radius());
  const int padded = product_grid_size(radius, 4);

  std::array<std::vector<cplx>, 4> v;
  for (int j = 0; j < 4; ++j) {
    Spectrum h = *slots[j];
    const auto& f = factors.factors[j];
    h.for_each_mode([&](int k1, int k2, cplx& c) {
      if (c != 0.0) c *= f(h.xi(k1, k2));
    });
    v[j] = sample_on_grid(h, padded);
  }
  KahanSum re, im;
  for (std::size_t i = 0; i < v[0].size(); ++i) {
    const cplx p = (v[0][i] * v[1][i]) * (v[2][i] * v[3][i]);
    re.add(p.real());
    im.add(p.imag());
  }
  const cplx mean = cplx(re.value(), im.value()) / (static_cast<double>(padded) * padded);
  return grid.length * grid.length * (factors.prefactor * mean).real();
}

double eval_lambda4_separable(const SymbolEvaluator<4>& m, const Spectrum& spectrum) {
  if (!m.is_separable()) throw std::invalid_argument("eval_lambda4_separable: symbol is not separable");
  const Spectrum d = conjugate_spectrum(spectrum);
  return lambda4_form_separable(*m.separable, {&spectrum, &d, &spectrum, &d});
}

void require_g4_symmetric(const SymbolEvaluator<4>& m, const Grid2D& grid) {
  const ActiveLattice lat(grid);
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> pick(-lat.K, lat.K);
  auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); };
  const double h = lat.scale;
  for (int checked = 0; checked < 100;) {
    int k[4][2];
    for (int j = 0; j < 3; ++j)
      for (int c = 0; c < 2; ++c) k[j][c] = pick(rng);
    k[3][0] = -(k[0][0] + k[1][0] + k[2][0]);
    k[3][1] = -(k[0][1] + k[1][1] + k[2][1]);
    if (std::abs(k[3][0]) > lat.K || std::abs(k[3][1]) > lat.K) continue;
    ++checked;
    FrequencyTuple<4> t;
    for (int j = 0; j < 4; ++j) t[j] = {k[j][0] * h, k[j][1] * h};
    const cplx v = m(t);
    const cplx v13 = m({t[2], t[1], t[0], t[3]});
    const cplx v24 = m({t[0], t[3], t[2], t[1]});
    const cplx vsc = std::conj(m({t[1], t[0], t[3], t[2]}));
    if (!close(v, v13) || !close(v, v24) || !close(v, vsc))
      throw std::invalid_argument("eval_lambda6_substitution: symbol is not G_4-symmetric");
  }
}

double lambda6_form(const SymbolEvaluator<4>& m, const Spectrum& spectrum) {
  if (!spectrum.is_dealiased()) throw std::invalid_argument("lambda6_form: spectrum is not dealiased");
  const Spectrum w = cubic_term(spectrum);
  const Spectrum d = conjugate_spectrum(spectrum);
  return lambda4_form(m, {&w, &d, &spectrum, &d});
}

double eval_lambda6_substitution(const SymbolEvaluator<4>& m, const Spectrum& spectrum) {
  require_g4_symmetric(m, spectrum.grid());
  return lambda6_form(m, spectrum);
}

DerivativeIdentity derivative_identity(const SymbolEvaluator<4>& m, const Field& u, const IMethodParams& params) {
  Spectrum c = forward_transform(u);
  c.dealias();
  DerivativeIdentity out;
  if (c.support_radius() == 0 && c.at(0, 0) == 0.0) return out;

  const Spectrum d = conjugate_spectrum(c);
  const Spectrum dc = rhs(c, params.sign);
  const Spectrum dd = conjugate_spectrum(dc);
  const Spectrum w = cubic_term(c);

  double scale = 0.0;
  KahanSum chain;
  for (const auto& slots : {std::array<const Spectrum*, 4>{&dc, &d, &c, &d}, std::array<const Spectrum*, 4>{&c, &dd, &c, &d},
                            std::array<const Spectrum*, 4>{&c, &d, &dc, &d}, std::array<const Spectrum*, 4>{&c, &d, &c, &dd}}) {
    const LatticeSum r = form_sum<true>(m, slots, {});
    chain.add(r.value);
    scale += r.magnitude;
  }
  const LatticeSum quartic = form_sum<true>(times_alpha(m, cplx(0.0, 1.0)), {&c, &d, &c, &d}, {});
  const LatticeSum sextic = form_sum<true>(scaled(m, cplx(0.0, 4.0)), {&w, &d, &c, &d}, {});
  scale += quartic.magnitude + sextic.magnitude;

  out.chain_rule = chain.value();
  out.formula = quartic.value - params.sign * sextic.value;
  out.scale = scale;
  const double eps = 1e-3 * scale;
  const double denom = std::abs(out.chain_rule) + std::abs(out.formula) + eps;
  out.residual = denom > 0.0 ? std::abs(out.chain_rule - out.formula) / denom : 0.0;
  return out;
}

double derivative_identity_residual(const SymbolEvaluator<4>& m, const Field& u, const IMethodParams& params) {
  return derivative_identity(m, u, params).residual;
}

}  // namespace nlslab
