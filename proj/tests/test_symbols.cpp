#include <gtest/gtest.h>

#include <limits>

#include "nlslab/parallel.hpp"
#include "nlslab/symbols.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace nlslab::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FrequencyTuple<4> swap13(const FrequencyTuple<4>& t) { return {t[2], t[1], t[0], t[3]}; }
FrequencyTuple<4> swap24(const FrequencyTuple<4>& t) { return {t[0], t[3], t[2], t[1]}; }
FrequencyTuple<4> swap_pairs(const FrequencyTuple<4>& t) { return {t[1], t[0], t[3], t[2]}; }

double max_norm(const FrequencyTuple<4>& t) {
  double r = 0.0;
  for (const auto& v : t) r = std::max(r, std::sqrt(norm2(v)));
  return r;
}

/// Quartic increment symbol i (sigma4_tilde alpha4 - x_sigma2_sym).
SymbolEvaluator<4> increment_symbol(const IMethodParams& p) {
  SymbolEvaluator<4> s;
  s.fn = [p](const FrequencyTuple<4>& t) { return cplx(0.0, sigma4_tilde(t, p) * alpha4(t) - x_sigma2_sym(t, p)); };
  return s;
}

}  // namespace

TEST(Sigma2, Examples) {
  const IMethodParams p = IMethodParams::make(8, 0.5);
  EXPECT_DOUBLE_EQ(sigma2(Vec2{4, 0}, Vec2{-4, 0}, p), 64.0 / 8);
  EXPECT_EQ(sigma2(Vec2{0, 0}, Vec2{0, 0}, p), 0.0);
  EXPECT_NEAR(sigma2(Vec2{32, 0}, Vec2{-32, 0}, p), 2 * 64.0, 1e-10);
}

TEST(Sigma4, Examples) {
  std::mt19937_64 rng(4);
  const IMethodParams p = IMethodParams::make(6, 0.6);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(sigma4(random_tuple4_in_ball(rng, 6.0), p), 0.25);
  const IMethodParams one = IMethodParams::make(kInf, 0.6, 0.1);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(sigma4(random_tuple4(rng, 1e3), one), 0.25);
  double prev = 0.25;
  for (double r = 6.0; r < 200.0; r *= 1.1) {
    const FrequencyTuple<4> t{Vec2{r, 0}, Vec2{-r, 0}, Vec2{1, 0}, Vec2{-1, 0}};
    EXPECT_LE(sigma4(t, p), prev);
    prev = sigma4(t, p);
  }
  EXPECT_LT(prev, 0.25);
}

TEST(XSigma2Sym, Examples) {
  const IMethodParams p = IMethodParams::make(kInf, 0.6, 0.1);
  const FrequencyTuple<4> t{Vec2{2, 0}, Vec2{-1, 0}, Vec2{0, 0}, Vec2{-1, 0}};
  EXPECT_DOUBLE_EQ(x_sigma2_sym(t, p), -0.5);
  EXPECT_DOUBLE_EQ(x_sigma2_sym(t, p), 0.25 * alpha4(t));
  std::mt19937_64 rng(5);
  const IMethodParams q = IMethodParams::make(2, 0.4);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{uniform(rng, -20, 20), uniform(rng, -20, 20)}, b{uniform(rng, -20, 20), uniform(rng, -20, 20)};
    EXPECT_EQ(x_sigma2_sym(FrequencyTuple<4>{a, -a, b, -b}, q), 0.0);
  }
}

TEST(Alpha4, Examples) {
  EXPECT_EQ(alpha4(FrequencyTuple<4>{Vec2{1, 0}, Vec2{0, 0}, Vec2{0, 1}, Vec2{-1, -1}}), 0.0);
  const FrequencyTuple<4> t{Vec2{2, 0}, Vec2{-1, 0}, Vec2{0, 0}, Vec2{-1, 0}};
  EXPECT_EQ(alpha4(t), -2.0);
  EXPECT_EQ(alpha_k(t), -2.0);
  EXPECT_EQ(alpha4(FrequencyTuple<4>{Vec2{1, 1}, Vec2{-1, -1}, Vec2{3, 0}, Vec2{-3, 0}}), 0.0);
}

TEST(Alpha4, MatchesAlternatingForm) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10000; ++i) {
    const auto t = random_tuple4(rng, 10.0);
    EXPECT_NEAR(alpha4(t), alpha_k(t), 1e-12 * (1 + tuple_scale(t)));
  }
}

TEST(ResonanceAngle, Examples) {
  // xi_12 = (1,0), xi_14 = (0,-1)
  const FrequencyTuple<4> orth{Vec2{1, 0}, Vec2{0, 0}, Vec2{0, 1}, Vec2{-1, -1}};
  EXPECT_NEAR(*cos_resonance_angle(orth), 0.0, 1e-15);
  const FrequencyTuple<4> parallel{Vec2{1, 0}, Vec2{0, 0}, Vec2{-1, 0}, Vec2{0, 0}};
  EXPECT_NEAR(*cos_resonance_angle(parallel), 1.0, 1e-15);
  EXPECT_FALSE(cos_resonance_angle(FrequencyTuple<4>{Vec2{1, 0}, Vec2{-1, 0}, Vec2{2, 0}, Vec2{-2, 0}}).has_value());
}

TEST(OmegaNr, Examples) {
  std::mt19937_64 rng(7);
  const IMethodParams p = IMethodParams::make(4, 0.6);
  for (int i = 0; i < 500; ++i) EXPECT_TRUE(in_omega_nr(random_tuple4_in_ball(rng, 4.0), p));
  EXPECT_TRUE(in_omega_nr(FrequencyTuple<4>{Vec2{10, 0}, Vec2{0, 0}, Vec2{-10, 0}, Vec2{0, 0}}, p));
  EXPECT_FALSE(in_omega_nr(FrequencyTuple<4>{Vec2{10, 0}, Vec2{-10, 0}, Vec2{3, 0}, Vec2{-3, 0}}, p));
  // max > N with xi_12 orthogonal to xi_14
  const FrequencyTuple<4> res{Vec2{10, 0}, Vec2{-9, 0}, Vec2{9, -1}, Vec2{-10, 1}};
  EXPECT_NEAR(*cos_resonance_angle(res), 0.0, 1e-15);
  EXPECT_FALSE(in_omega_nr(res, p));
  EXPECT_EQ(sigma4_tilde(res, p), 0.0);
}

TEST(Sigma4Tilde, RegionIdentity) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10000; ++i) {
    const IMethodParams p = random_params(rng);
    const auto t = random_tuple4_in_ball(rng, p.N);
    EXPECT_EQ(sigma4_tilde(t, p), 0.25);
    EXPECT_EQ(sigma4(t, p), 0.25);
    EXPECT_NEAR(x_sigma2_sym(t, p), 0.25 * alpha4(t), 1e-14 * (1 + tuple_scale(t)));
  }
}

TEST(Sigma4Tilde, G4InvarianceProperty) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const IMethodParams p = random_params(rng);
    const auto t = i % 2 ? random_tuple4(rng, 6 * p.N) : random_lattice_tuple4(rng, 12, p.N / 4);
    const double v = sigma4_tilde(t, p);
    const double tol = 1e-12 * (1 + std::abs(v));
    EXPECT_NEAR(sigma4_tilde(swap13(t), p), v, tol);
    EXPECT_NEAR(sigma4_tilde(swap24(t), p), v, tol);
    EXPECT_NEAR(sigma4_tilde(swap_pairs(t), p), v, tol);
    EXPECT_EQ(in_omega_nr(swap_pairs(t), p), in_omega_nr(t, p));
  }
}

TEST(Sigma4Tilde, NonresonantBranchIsRatio) {
  std::mt19937_64 rng(10);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const IMethodParams p = random_params(rng);
    const auto t = random_tuple4(rng, 5 * p.N);
    if (max_norm(t) <= p.N) continue;
    if (in_omega_nr(t, p)) {
      EXPECT_NEAR(sigma4_tilde(t, p), x_sigma2_sym(t, p) / alpha4(t), 1e-12 * std::abs(sigma4_tilde(t, p)) + 1e-15);
      ++checked;
    } else {
      EXPECT_EQ(sigma4_tilde(t, p), 0.0);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Cancellation, UnitMultiplierKillsIncrementSymbol) {
  std::mt19937_64 rng(11);
  const IMethodParams p = IMethodParams::make(kInf, 0.6, 0.05);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto t = random_tuple4(rng, i % 2 ? 50.0 : 2.0);
    const double v = std::abs(increment_symbol(p)(t));
    worst = std::max(worst, v / (1 + tuple_scale(t)));
  }
  EXPECT_LE(worst, 1e-12);

  const auto six = symmetrize(extend_X(scaled(sigma4_symbol(p), cplx(0, 4))));
  for (int i = 0; i < 2000; ++i) EXPECT_EQ(six(random_tuple6(rng, 20.0)), cplx(0.0));
}

TEST(FastKernels, MatchDirectEnumeration) {
  for (int M : {12, 16}) {
    const Grid2D g = Grid2D::make(M, 2 * std::numbers::pi);
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const IMethodParams p = IMethodParams::make(1.5 + seed, 0.6, 0.15 * seed);
      const Spectrum c = random_spectrum(g, seed + 31 * M);
      EXPECT_LT(rel_err(lambda4_sigma4_tilde(c, p), eval_lambda4_direct(sigma4_tilde_symbol(p), c)), 1e-10);
      EXPECT_LT(rel_err(lambda4_correction(c, p), eval_lambda4_direct(sigma4_correction_symbol(p), c)), 1e-10);
      EXPECT_LT(rel_err(lambda4_sigma4_tilde(c, p), naive_lambda4(sigma4_tilde_symbol(p).fn, c)), 1e-10);
    }
  }
}

TEST(FastKernels, RateComponentsMatchForms) {
  const Grid2D g = Grid2D::make(12, 5.0);
  for (int sign : {+1, -1}) {
    const IMethodParams p = IMethodParams::make(2, 0.6, 0.2, sign);
    const Spectrum c = random_spectrum(g, 40 + sign);
    const auto r = modified_energy_rate(c, p);
    const Spectrum d = conjugate_spectrum(c);
    const double quartic = sign * lambda4_form(increment_symbol(p), {&c, &d, &c, &d});
    const double sextic = lambda6_form(scaled(sigma4_tilde_symbol(p), cplx(0, 4)), c);
    EXPECT_NEAR(r.quartic, quartic, 1e-10 * (1 + std::abs(quartic)));
    EXPECT_NEAR(r.sextic, sextic, 1e-10 * (1 + std::abs(sextic)));
    EXPECT_DOUBLE_EQ(r.rate, r.quartic - r.sextic);
  }
}

TEST(ModifiedEnergy, Examples) {
  const Grid2D g = Grid2D::make(32);
  const IMethodParams p = IMethodParams::make(9, 0.6);
  const Spectrum low = random_spectrum(g, 3, 3);
  EXPECT_LT(rel_err(modified_energy_tilde(low, p), energy(low)), 1e-12);
  EXPECT_EQ(modified_energy_tilde(Spectrum(g), p), 0.0);
  EXPECT_EQ(fixed_time_gap(low, p), 0.0);
  const IMethodParams f = IMethodParams::make(9, 0.6, std::nullopt, -1);
  EXPECT_LT(rel_err(modified_energy_tilde(inverse_transform(low), f), energy(low, -1)), 1e-12);
}

TEST(ModifiedEnergy, PhaseAndTranslationInvariance) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const Grid2D g = Grid2D::make(16, uniform(rng, 3.0, 8.0));
    const IMethodParams p = IMethodParams::make(uniform(rng, 1.0, 2.0), 0.6);
    const Spectrum c = random_spectrum(g, rng());
    const double base = modified_energy_tilde(c, p);
    EXPECT_LT(rel_err(modified_energy_tilde(std::polar(1.0, uniform(rng, 0, 6)) * c, p), base), 1e-12);
    Spectrum moved = c;
    const double a1 = uniform(rng, -4, 4), a2 = uniform(rng, -4, 4);
    moved.for_each_mode([&](int k1, int k2, cplx& v) {
      const Vec2 xi = c.xi(k1, k2);
      v *= std::polar(1.0, -(xi[0] * a1 + xi[1] * a2));
    });
    EXPECT_LT(rel_err(modified_energy_tilde(moved, p), base), 1e-12);
  }
}

TEST(ModifiedEnergy, GapShrinksWithN) {
  const Grid2D g = Grid2D::make(48);
  const Spectrum c = random_spectrum(g, 14, -1, 2.0);
  const double small = fixed_time_gap(c, IMethodParams::make(2, 0.6));
  const double large = fixed_time_gap(c, IMethodParams::make(6, 0.6));
  EXPECT_GT(small, 0.0);
  EXPECT_LT(large, small);
}

TEST(Audit, UnitMultiplierHalfBound) {
  AuditConfig cfg;
  cfg.params = IMethodParams::make(kInf, 0.6, 0.05);
  cfg.seed = 3;
  const auto r = audit_symbol_bounds(cfg, 30000);
  EXPECT_LE(r.max_ratio, 0.5 + 1e-12);
  EXPECT_GT(r.max_ratio, 0.45);
  EXPECT_EQ(r.samples, 30000u);
  std::uint64_t total = 0;
  for (const auto& h : r.histogram) total += h.count;
  EXPECT_EQ(total, 30000u);
  EXPECT_EQ(r.stratum_samples[0] + r.stratum_samples[1] + r.stratum_samples[2], 30000u);
  EXPECT_NEAR(r.max_corollary_ratio, 0.05 / 4, 1e-15);
}

TEST(Audit, CorollaryRatioBelowN) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const IMethodParams p = random_params(rng);
    const auto t = random_tuple4_in_ball(rng, p.N);
    double mmin = 1.0;
    for (const auto& v : t) mmin = std::min(mmin, m_eval(std::sqrt(norm2(v)), p));
    EXPECT_EQ(std::abs(sigma4_tilde(t, p)) * p.theta0 / (mmin * mmin), p.theta0 / 4);
  }
}

TEST(Audit, DeterministicAcrossThreadCounts) {
  AuditConfig cfg;
  cfg.params = IMethodParams::make(8, 0.6);
  cfg.seed = 99;
  cfg.stratum = AuditStratum::b;
  set_thread_count(1);
  const auto a = audit_symbol_bounds(cfg, 20000);
  set_thread_count(4);
  const auto b = audit_symbol_bounds(cfg, 20000);
  set_thread_count(0);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.max_corollary_ratio, b.max_corollary_ratio);
  EXPECT_EQ(a.stratum_samples[1], 20000u);
  for (std::size_t i = 0; i < a.histogram.size(); ++i) EXPECT_EQ(a.histogram[i].count, b.histogram[i].count);
}

TEST(Audit, StratumParsing) {
  for (auto s : {AuditStratum::all, AuditStratum::a, AuditStratum::b, AuditStratum::c})
    EXPECT_EQ(parse_stratum(to_string(s)), s);
  EXPECT_THROW(parse_stratum("d"), std::invalid_argument);
  EXPECT_THROW(parse_stratum(""), std::invalid_argument);
  EXPECT_THROW(audit_symbol_bounds(AuditConfig{}, 0), std::invalid_argument);
}
