#include "nlslab/symbols.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlslab/parallel.hpp"

namespace nlslab {

namespace {

double mag(const Vec2& v) { return std::sqrt(norm2(v)); }

double f_of(const Vec2& xi, const IMethodParams& p) {
  const double m = m_eval(mag(xi), p);
  return m * m * norm2(xi);
}

bool all_low(const FrequencyTuple<4>& t, double N) {
  return std::all_of(t.begin(), t.end(), [N](const Vec2& v) { return !(mag(v) > N); });
}

}  // namespace

double sigma2(const Vec2& xi1, const Vec2&, const IMethodParams& params) { return 0.5 * f_of(xi1, params); }

double sigma4(const FrequencyTuple<4>& t, const IMethodParams& params) {
  double prod = 0.25;
  for (const auto& v : t) prod *= m_eval(mag(v), params);
  return prod;
}

double x_sigma2_sym(const FrequencyTuple<4>& t, const IMethodParams& params) {
  return 0.25 * (-f_of(t[0], params) + f_of(t[1], params) - f_of(t[2], params) + f_of(t[3], params));
}

double alpha4(const FrequencyTuple<4>& t) { return -2.0 * dot(t[0] + t[1], t[0] + t[3]); }

std::optional<double> cos_resonance_angle(const FrequencyTuple<4>& t) {
  const Vec2 p = t[0] + t[1], q = t[0] + t[3];
  const double n12 = norm2(p), n14 = norm2(q);
  if (n12 == 0.0 || n14 == 0.0) return std::nullopt;
  return std::clamp(dot(p, q) / std::sqrt(n12 * n14), -1.0, 1.0);
}

bool in_omega_nr(const FrequencyTuple<4>& t, const IMethodParams& params) {
  if (all_low(t, params.N)) return true;
  const Vec2 p = t[0] + t[1], q = t[0] + t[3];
  return angle_nonresonant(dot(p, q), norm2(p), norm2(q), params.theta0);
}

double sigma4_tilde(const FrequencyTuple<4>& t, const IMethodParams& params) {
  if (all_low(t, params.N)) return 0.25;
  const Vec2 p = t[0] + t[1], q = t[0] + t[3];
  const double d = dot(p, q);
  if (!angle_nonresonant(d, norm2(p), norm2(q), params.theta0)) return 0.0;
  const double a = -2.0 * d;
  assert(a != 0.0);
  return x_sigma2_sym(t, params) / a;
}

SymbolEvaluator<2> sigma2_symbol(const IMethodParams& params) {
  SymbolEvaluator<2> s;
  s.fn = [params](const FrequencyTuple<2>& t) { return cplx(sigma2(t[0], t[1], params)); };
  return s;
}

SymbolEvaluator<4> sigma4_symbol(const IMethodParams& params) {
  SymbolEvaluator<4> s;
  s.fn = [params](const FrequencyTuple<4>& t) { return cplx(sigma4(t, params)); };
  auto factor = [params](const Vec2& xi) { return m_eval(mag(xi), params); };
  s.separable = SeparableFactors{{factor, factor, factor, factor}, 0.25};
  return s;
}

SymbolEvaluator<4> x_sigma2_sym_symbol(const IMethodParams& params) {
  SymbolEvaluator<4> s;
  s.fn = [params](const FrequencyTuple<4>& t) { return cplx(x_sigma2_sym(t, params)); };
  return s;
}

SymbolEvaluator<4> alpha4_symbol() {
  SymbolEvaluator<4> s;
  s.fn = [](const FrequencyTuple<4>& t) { return cplx(alpha4(t)); };
  return s;
}

SymbolEvaluator<4> sigma4_tilde_symbol(const IMethodParams& params) {
  SymbolEvaluator<4> s;
  s.fn = [params](const FrequencyTuple<4>& t) { return cplx(sigma4_tilde(t, params)); };
  return s;
}

SymbolEvaluator<4> sigma4_correction_symbol(const IMethodParams& params) {
  SymbolEvaluator<4> s;
  s.fn = [params](const FrequencyTuple<4>& t) { return cplx(sigma4_tilde(t, params) - sigma4(t, params)); };
  s.support_hint = SupportHint::requires_max_gt_N;
  s.support_threshold = params.N;
  return s;
}

namespace {

// Per-mode tables on the retained band, in forward and row-reversed layout.
struct LatticeTables {
  ActiveLattice lat;
  std::vector<double> f, m, low;        // forward
  std::vector<double> f_r, m_r, low_r;  // rows reversed
  double theta0 = 0.0;

  LatticeTables(const Grid2D& grid, const IMethodParams& params)
      : lat(grid), f(lat.size()), m(lat.size()), low(lat.size()), theta0(params.theta0) {
    for (int a = 0; a < lat.size(); ++a) {
      const Vec2 xi = lat.xi(a);
      const double r = mag(xi);
      m[a] = m_eval(r, params);
      f[a] = m[a] * m[a] * norm2(xi);
      low[a] = r > params.N ? 0.0 : 1.0;
    }
    f_r = reverse_rows(f, lat);
    m_r = reverse_rows(m, lat);
    low_r = reverse_rows(low, lat);
  }
};

struct PairClass {
  bool active = true;
  double inv_alpha = 0.0;  // 1/alpha4 on the non-resonant angle branch, else 0
};

PairClass classify(const LatticeTables& T, int px, int py, int qx, int qy) {
  const double h = T.lat.scale;
  const Vec2 p{px * h, py * h}, q{qx * h, qy * h};
  const double d = dot(p, q);
  PairClass c;
  if (angle_nonresonant(d, norm2(p), norm2(q), T.theta0)) c.inv_alpha = 1.0 / (-2.0 * d);
  return c;
}

// Row views of the tables for one fill call.
struct RowTables {
  const double *f1, *f2, *f3, *f4, *l1, *l2, *l3, *l4;
  RowTables(const LatticeTables& T, int o1, int o2, int o3, int o4)
      : f1(T.f.data() + o1), f2(T.f_r.data() + o2), f3(T.f.data() + o3), f4(T.f_r.data() + o4),
        l1(T.low.data() + o1), l2(T.low_r.data() + o2), l3(T.low.data() + o3), l4(T.low_r.data() + o4) {}
};

// sigma4_tilde: 1/4 on all-low tuples, x / alpha4 on the non-resonant branch.
struct TildeKernel {
  const LatticeTables& T;
  PairClass pair(int px, int py, int qx, int qy) const { return classify(T, px, py, qx, qy); }
  void fill(const PairClass& c, int o1, int o2, int o3, int o4, int len, double* __restrict out) const {
    const RowTables r(T, o1, o2, o3, o4);
    const double ia = 0.25 * c.inv_alpha;
    for (int i = 0; i < len; ++i) {
      const double L = r.l1[i] * r.l2[i] * r.l3[i] * r.l4[i];
      const double x = -r.f1[i] + r.f2[i] - r.f3[i] + r.f4[i];
      out[i] = (1.0 - L) * ia * x + 0.25 * L;
    }
  }
};

// sigma4_tilde - sigma4.
struct CorrectionKernel {
  const LatticeTables& T;
  PairClass pair(int px, int py, int qx, int qy) const { return classify(T, px, py, qx, qy); }
  void fill(const PairClass& c, int o1, int o2, int o3, int o4, int len, double* __restrict out) const {
    const RowTables r(T, o1, o2, o3, o4);
    const double* m1 = T.m.data() + o1;
    const double* m2 = T.m_r.data() + o2;
    const double* m3 = T.m.data() + o3;
    const double* m4 = T.m_r.data() + o4;
    const double ia = 0.25 * c.inv_alpha;
    for (int i = 0; i < len; ++i) {
      const double L = r.l1[i] * r.l2[i] * r.l3[i] * r.l4[i];
      const double x = -r.f1[i] + r.f2[i] - r.f3[i] + r.f4[i];
      const double s4 = 0.25 * (m1[i] * m2[i]) * (m3[i] * m4[i]);
      out[i] = (1.0 - L) * (ia * x - s4);
    }
  }
};

// x_sigma2_sym restricted to resonant tuples (max > N and angle-resonant).
struct ResonantXKernel {
  const LatticeTables& T;
  PairClass pair(int px, int py, int qx, int qy) const {
    PairClass c = classify(T, px, py, qx, qy);
    c.active = c.inv_alpha == 0.0;
    return c;
  }
  void fill(const PairClass&, int o1, int o2, int o3, int o4, int len, double* __restrict out) const {
    const RowTables r(T, o1, o2, o3, o4);
    for (int i = 0; i < len; ++i) {
      const double L = r.l1[i] * r.l2[i] * r.l3[i] * r.l4[i];
      out[i] = (1.0 - L) * 0.25 * (-r.f1[i] + r.f2[i] - r.f3[i] + r.f4[i]);
    }
  }
};

void require_band(const Spectrum& s, const char* who) {
  if (!s.is_dealiased()) throw std::invalid_argument(std::string(who) + ": spectrum is not dealiased");
}

QuadSlots standard_slots(const Spectrum& c, const Spectrum& d, const ActiveLattice& lat) {
  auto cc = active_coefficients(c, lat);
  auto dd = active_coefficients(d, lat);
  return {cc, dd, cc, dd};
}

}  // namespace

double lambda4_sigma4_tilde(const Spectrum& spectrum, const IMethodParams& params) {
  require_band(spectrum, "lambda4_sigma4_tilde");
  const LatticeTables T(spectrum.grid(), params);
  const PairSlots g = make_pair_slots(standard_slots(spectrum, conjugate_spectrum(spectrum), T.lat), T.lat);
  const double L = spectrum.grid().length;
  return L * L * pair_parametrized_sum(T.lat, g, TildeKernel{T}, PairSymmetry::full);
}

double lambda4_correction(const Spectrum& spectrum, const IMethodParams& params) {
  require_band(spectrum, "lambda4_correction");
  const LatticeTables T(spectrum.grid(), params);
  const PairSlots g = make_pair_slots(standard_slots(spectrum, conjugate_spectrum(spectrum), T.lat), T.lat);
  const double L = spectrum.grid().length;
  return L * L * pair_parametrized_sum(T.lat, g, CorrectionKernel{T}, PairSymmetry::full);
}

double modified_energy_tilde(const Spectrum& spectrum, const IMethodParams& params) {
  require_band(spectrum, "modified_energy_tilde");
  const double kinetic = eval_lambda2(sigma2_symbol(params), spectrum);
  const double bulk = eval_lambda4_separable(sigma4_symbol(params), spectrum);
  return kinetic + params.sign * (bulk + lambda4_correction(spectrum, params));
}

double modified_energy_tilde(const Field& u, const IMethodParams& params) {
  Spectrum c = forward_transform(u);
  c.dealias();
  return modified_energy_tilde(c, params);
}

double fixed_time_gap(const Spectrum& spectrum, const IMethodParams& params) {
  return std::abs(lambda4_correction(spectrum, params));
}

ModifiedEnergyRate modified_energy_rate(const Spectrum& spectrum, const IMethodParams& params) {
  require_band(spectrum, "modified_energy_rate");
  const LatticeTables T(spectrum.grid(), params);
  const Spectrum d = conjugate_spectrum(spectrum);
  const double L2 = spectrum.grid().length * spectrum.grid().length;
  ModifiedEnergyRate out;

  // Re[i s p] = Re[s (i p)]: the imaginary unit rides on the first slot.
  QuadSlots g = standard_slots(spectrum, d, T.lat);
  for (auto& v : g[0]) v *= cplx(0.0, -1.0);
  out.quartic = params.sign * L2 *
                pair_parametrized_sum(T.lat, make_pair_slots(g, T.lat), ResonantXKernel{T}, PairSymmetry::full);

  const Spectrum w = cubic_term(spectrum);
  g[0] = active_coefficients(w, T.lat);
  for (auto& v : g[0]) v *= cplx(0.0, 4.0);
  out.sextic = L2 * pair_parametrized_sum(T.lat, make_pair_slots(g, T.lat), TildeKernel{T}, PairSymmetry::swap);

  out.rate = out.quartic - out.sextic;
  return out;
}

AuditStratum parse_stratum(const std::string& name) {
  if (name == "all") return AuditStratum::all;
  if (name == "a") return AuditStratum::a;
  if (name == "b") return AuditStratum::b;
  if (name == "c") return AuditStratum::c;
  throw std::invalid_argument("unknown stratum '" + name + "' (expected all|a|b|c)");
}

std::string to_string(AuditStratum s) {
  switch (s) {
    case AuditStratum::all: return "all";
    case AuditStratum::a: return "a";
    case AuditStratum::b: return "b";
    case AuditStratum::c: return "c";
  }
  return "all";
}

namespace {

constexpr int kShards = 64;
constexpr double kHistLo = -8.0;
constexpr double kHistHi = 2.0;
constexpr int kHistBins = 40;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ShardResult {
  double max_ratio = -1.0;
  FrequencyTuple<4> argmax{};
  double max_cor = -1.0;
  FrequencyTuple<4> cor_argmax{};
  std::array<double, 3> stratum_max{};
  std::array<std::uint64_t, 3> stratum_count{};
  std::vector<std::uint64_t> hist = std::vector<std::uint64_t>(kHistBins, 0);
};

}  // namespace

SymbolAuditReport audit_symbol_bounds(const AuditConfig& config, std::uint64_t count) {
  if (count < 1) throw std::invalid_argument("audit_symbol_bounds: count must be >= 1");
  const IMethodParams& P = config.params;
  const double ref = std::isfinite(P.N) ? P.N : 1.0;
  std::vector<ShardResult> shards(kShards);

  parallel_for(kShards, [&](std::size_t j) {
    ShardResult& out = shards[j];
    std::mt19937_64 rng(splitmix64(config.seed ^ (0xa0761d6478bd642fULL * (j + 1))));
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    auto vec = [&](double r) {
      const double phi = 2.0 * std::numbers::pi * unit();
      return Vec2{r * std::cos(phi), r * std::sin(phi)};
    };
    auto comparable = [&](double R) { return R * (0.5 + 1.5 * unit()); };
    auto small = [&](double R) { return R * std::pow(10.0, -3.0 + 2.0 * unit()); };

    const std::uint64_t begin = count * j / kShards, end = count * (j + 1) / kShards;
    for (std::uint64_t i = begin; i < end; ++i) {
      int st = 0;
      switch (config.stratum) {
        case AuditStratum::all: st = static_cast<int>(i % 3); break;
        case AuditStratum::a: st = 0; break;
        case AuditStratum::b: st = 1; break;
        case AuditStratum::c: st = 2; break;
      }
      const double R = ref * std::pow(10.0, -1.0 + 3.0 * unit());
      const Vec2 x1 = vec(R);
      const Vec2 p = vec(st == 2 ? small(R) : comparable(R));
      const Vec2 q = vec(st == 0 ? comparable(R) : small(R));
      const FrequencyTuple<4> t{x1, p + (-x1), x1 + (-p) + (-q), q + (-x1)};

      double mmin = 1.0;
      for (const auto& v : t) mmin = std::min(mmin, m_eval(mag(v), P));
      const double m2 = mmin * mmin;
      const double ratio = std::abs(x_sigma2_sym(t, P)) / (m2 * mag(p) * mag(q));
      const double cor = std::abs(sigma4_tilde(t, P)) * P.theta0 / m2;

      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax = t;
      }
      if (cor > out.max_cor) {
        out.max_cor = cor;
        out.cor_argmax = t;
      }
      out.stratum_max[st] = std::max(out.stratum_max[st], ratio);
      ++out.stratum_count[st];
      const double lg = ratio > 0.0 ? std::log10(ratio) : kHistLo;
      int bin = static_cast<int>(std::floor((lg - kHistLo) / (kHistHi - kHistLo) * kHistBins));
      ++out.hist[std::clamp(bin, 0, kHistBins - 1)];
    }
  });

  SymbolAuditReport rep;
  rep.samples = count;
  rep.histogram.resize(kHistBins);
  for (int b = 0; b < kHistBins; ++b) {
    rep.histogram[b].lo = std::pow(10.0, kHistLo + (kHistHi - kHistLo) * b / kHistBins);
    rep.histogram[b].hi = std::pow(10.0, kHistLo + (kHistHi - kHistLo) * (b + 1) / kHistBins);
  }
  rep.max_ratio = -1.0;
  rep.max_corollary_ratio = -1.0;
  for (const auto& s : shards) {
    if (s.max_ratio > rep.max_ratio) {
      rep.max_ratio = s.max_ratio;
      rep.argmax_tuple = s.argmax;
    }
    if (s.max_cor > rep.max_corollary_ratio) {
      rep.max_corollary_ratio = s.max_cor;
      rep.corollary_argmax_tuple = s.cor_argmax;
    }
    for (int k = 0; k < 3; ++k) {
      rep.stratum_max_ratio[k] = std::max(rep.stratum_max_ratio[k], s.stratum_max[k]);
      rep.stratum_samples[k] += s.stratum_count[k];
    }
    for (int b = 0; b < kHistBins; ++b) rep.histogram[b].count += s.hist[b];
  }
  rep.max_ratio = std::max(rep.max_ratio, 0.0);
  rep.max_corollary_ratio = std::max(rep.max_corollary_ratio, 0.0);
  return rep;
}

}  // namespace nlslab
