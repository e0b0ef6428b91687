#include <gtest/gtest.h>

#include <limits>
#include <numbers>

#include "nlslab/multiplier.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace nlslab::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Params, MakeAndValidate) {
  const IMethodParams p = IMethodParams::make(8, 0.6);
  EXPECT_DOUBLE_EQ(p.theta0, 0.125);
  EXPECT_EQ(p.sign, 1);
  EXPECT_FALSE(p.in_small_angle_range());
  EXPECT_TRUE(IMethodParams::make(8, 0.6, 0.0099).in_small_angle_range());
  EXPECT_THROW(IMethodParams::make(0.5, 0.6), std::invalid_argument);
  EXPECT_THROW(IMethodParams::make(8, 1.0), std::invalid_argument);
  EXPECT_THROW(IMethodParams::make(8, 0.0), std::invalid_argument);
  EXPECT_THROW(IMethodParams::make(8, 0.6, 0.0), std::invalid_argument);
  EXPECT_THROW(IMethodParams::make(8, 0.6, std::nullopt, 0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(p.with_N(4).theta0, 0.25);
}

TEST(Multiplier, Examples) {
  const double N = 8;
  EXPECT_EQ(m_eval(N / 2, N, 0.6), 1.0);
  EXPECT_NEAR(m_eval(4 * N, N, 0.75), std::pow(4.0, -0.25), 1e-15);
  EXPECT_NEAR(m_eval(4 * N, N, 0.75), 0.70711, 1e-5);
  const double s = 0.6, mid = m_eval(1.5 * N, N, s);
  EXPECT_GT(mid, std::pow(2.0, s - 1.0));
  EXPECT_LT(mid, 1.0);
  EXPECT_GE(mid, m_eval(1.6 * N, N, s));
  EXPECT_EQ(m_eval(1e9, std::numeric_limits<double>::infinity(), s), 1.0);
}

TEST(Multiplier, MonotonicityOnLogGrid) {
  for (double s : {0.25, 0.4, 0.6, 0.75, 0.9}) {
    const double N = 5.0;
    double prev_m = 2.0, prev_e = -1.0;
    for (int i = 0; i < 10000; ++i) {
      const double r = N / 10 * std::pow(1000.0, i / 9999.0);
      const double m = m_eval(r, N, s), e = m * m * r * r;
      EXPECT_LE(m, prev_m + 1e-15) << "s=" << s << " r=" << r;
      EXPECT_GE(e, prev_e * (1 - 1e-14)) << "s=" << s << " r=" << r;
      prev_m = m;
      prev_e = e;
    }
  }
}

TEST(Multiplier, ContinuousAndC1AtJoins) {
  for (double s : {0.3, 0.6, 0.9}) {
    const double N = 3.0, h = 1e-7;
    for (double r : {N, 2 * N}) {
      EXPECT_NEAR(m_eval(r * (1 - 1e-13), N, s), m_eval(r * (1 + 1e-13), N, s), 1e-12);
      const double left = (m_eval(r, N, s) - m_eval(r - h, N, s)) / h;
      const double right = (m_eval(r + h, N, s) - m_eval(r, N, s)) / h;
      EXPECT_NEAR(left, right, 1e-5) << "s=" << s << " r=" << r;
    }
  }
}

TEST(ApplyI, Examples) {
  const Grid2D g = Grid2D::make(24);
  const IMethodParams p = IMethodParams::make(2, 0.5);
  const Spectrum low = random_spectrum(g, 1, 1);
  const Spectrum Ilow = apply_I(low, p);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(Ilow.coeffs()[i], low.coeffs()[i]);
  const Spectrum zero = apply_I(Spectrum(g), p);
  for (const auto& c : zero.coeffs()) EXPECT_EQ(c, 0.0);
  const Spectrum hi = apply_I(plane_wave(g, 8, 0), p);
  EXPECT_NEAR(hi.at(8, 0).real(), 0.5, 1e-15);
}

TEST(ApplyI, LinearAndContracting) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid2D g = Grid2D::make(16, uniform(rng, 1.0, 10.0));
    const IMethodParams p = random_params(rng);
    const Spectrum u = random_spectrum(g, rng()), v = random_spectrum(g, rng());
    const cplx a = gaussian(rng), b = gaussian(rng);
    const Spectrum lhs = apply_I(a * u + b * v, p), rhs = a * apply_I(u, p) + b * apply_I(v, p);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(lhs.coeffs()[i] - rhs.coeffs()[i]), 0.0, 1e-12);
    EXPECT_LE(mass(apply_I(u, p)), mass(u) * (1 + 1e-15));
    const Spectrum ref = naive_apply_I(u, p), got = apply_I(u, p);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(got.coeffs()[i] - ref.coeffs()[i]), 0.0, 1e-15);
  }
}

TEST(EnergyIu, Examples) {
  const Grid2D g = Grid2D::make(16);
  const IMethodParams p = IMethodParams::make(4, 0.6);
  const Spectrum low = random_spectrum(g, 2, 2);
  EXPECT_EQ(energy_Iu(low, p), energy(low));
  EXPECT_EQ(energy_Iu(Spectrum(g), p), 0.0);

  const IMethodParams q = IMethodParams::make(1, 0.5);
  const double expected = 4 * kPi * kPi * (0.5 * 16 * 0.25 + 0.25 * std::pow(0.5, 4));
  EXPECT_NEAR(energy_Iu(plane_wave(g, 4, 0), q), expected, 1e-10);
  EXPECT_NEAR(energy_Iu(inverse_transform(plane_wave(g, 4, 0)), q), expected, 1e-10);
}

TEST(Rescale, Examples) {
  const Grid2D g = Grid2D::make(16);
  const Field u = inverse_transform(random_spectrum(g, 5));
  const Field same = rescale(u, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(same.values()[i], u.values()[i]);
  EXPECT_LT(rel_err(mass(rescale(u, 4.0)), mass(u)), 1e-12);
  EXPECT_THROW(rescale(u, 0.5), std::invalid_argument);

  const Spectrum w = rescale(plane_wave(g, 2, 0), 2.0);
  EXPECT_NEAR(w.grid().length, 4 * kPi, 1e-15);
  EXPECT_NEAR(w.at(2, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(w.xi(2, 0)[0], 1.0, 1e-15);
}

TEST(Rescale, MassInvariantProperty) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid2D g = Grid2D::make(8 + 2 * uniform_int(rng, 0, 6), uniform(rng, 1.0, 9.0));
    const Field u = random_field(g, rng());
    const double lambda = uniform(rng, 1.0, 20.0);
    EXPECT_LT(rel_err(mass(rescale(u, lambda)), mass(u)), 1e-12);
  }
}

TEST(LambdaOfN, Examples) {
  EXPECT_NEAR(lambda_of_N(100, 2.0 / 3, 1), 10.0, 1e-12);
  EXPECT_NEAR(lambda_of_N(1, 0.37, 2.5), 2.5, 1e-15);
  EXPECT_NEAR(lambda_of_N(16, 0.6, 1), std::pow(16.0, 2.0 / 3), 1e-12);
  EXPECT_NEAR(lambda_of_N(16, 0.6, 1), 6.3496, 1e-4);
  EXPECT_THROW(lambda_of_N(0.5, 0.6, 1), std::invalid_argument);
}

TEST(RescaledEnergy, Examples) {
  const Grid2D g = Grid2D::make(32);
  const IMethodParams p = IMethodParams::make(8, 0.6);
  const auto zero = verify_rescaled_energy(Field(g), p, 1.0);
  EXPECT_EQ(zero.energy_after, 0.0);
  EXPECT_TRUE(zero.passes_third);

  const Field u0 = inverse_transform(random_spectrum(g, 7, -1, 2.0));
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1.0, 2.0, 4.0, 8.0}) {
    const auto r = rescaled_energy_at(u0, p, lambda);
    EXPECT_LT(r.energy_after, prev) << "lambda " << lambda;
    prev = r.energy_after;
  }
}

TEST(RescaledEnergy, PassFlipsAtFiniteLambda) {
  const Grid2D g = Grid2D::make(16);
  const IMethodParams p = IMethodParams::make(2, 0.6);
  for (double amp : {0.5, 1.0, 3.0}) {
    const Field u = inverse_transform(plane_wave(g, 3, 1, amp));
    EXPECT_FALSE(rescaled_energy_at(u, p, 1.0).passes_third);
    double lo = 1.0, hi = 1.0;
    while (!rescaled_energy_at(u, p, hi).passes_third) hi *= 2;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (rescaled_energy_at(u, p, mid).passes_third ? hi : lo) = mid;
    }
    EXPECT_TRUE(std::isfinite(hi));
    EXPECT_NEAR(rescaled_energy_at(u, p, hi).energy_after, 1.0 / 3, 1e-6);
  }
}
