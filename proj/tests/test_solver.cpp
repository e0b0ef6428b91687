#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nlslab/experiments.hpp"
#include "nlslab/solver.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace nlslab::testing;

namespace {

SolverState make_state(const Spectrum& c, double dt, Integrator integ = Integrator::ifrk4, double nonlinearity = 1.0,
                       int sign = +1) {
  SolverState s;
  s.spectrum = c;
  s.params = IMethodParams::make(4, 0.6, std::nullopt, sign);
  s.dt = dt;
  s.integrator = integ;
  s.nonlinearity = nonlinearity;
  return s;
}

double max_diff(const Spectrum& a, const Spectrum& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

/// Closed-form unit-amplitude plane wave at mode (1, 0) on the 2 pi box.
Spectrum plane_wave_at(const Grid2D& g, double t, int sign = +1) {
  return plane_wave(g, 1, 0, std::polar(1.0, -(1.0 + sign) * t));
}

double plane_wave_error(Integrator integ, double dt) {
  const Grid2D g = Grid2D::make(16);
  const auto tr = evolve(make_state(plane_wave(g, 1, 0), dt, integ), 1.0);
  return max_diff(tr.final_state.spectrum, plane_wave_at(g, 1.0));
}

}  // namespace

TEST(Rhs, Examples) {
  const Grid2D g = Grid2D::make(16);
  const Spectrum r = rhs(plane_wave(g, 1, 0), +1);
  EXPECT_NEAR(std::abs(r.at(1, 0) - cplx(0, -2)), 0.0, 1e-14);
  double rest = 0.0;
  r.for_each_mode([&](int k1, int k2, const cplx& v) {
    if (k1 != 1 || k2 != 0) rest = std::max(rest, std::abs(v));
  });
  EXPECT_LE(rest, 1e-14);
  const Spectrum zero = rhs(Spectrum(g), 1);
  for (const auto& v : zero.coeffs()) EXPECT_EQ(v, 0.0);

  const Spectrum c = random_spectrum(g, 2);
  const Spectrum lin = rhs(c, 0.0);
  c.for_each_mode([&](int k1, int k2, const cplx& v) {
    EXPECT_EQ(lin.at(k1, k2), cplx(0, -norm2(c.xi(k1, k2))) * v);
  });
}

TEST(Ifrk4, FreeEvolutionExact) {
  const Grid2D g = Grid2D::make(24, 5.0);
  const Spectrum c = random_spectrum(g, 3);
  for (Integrator integ : {Integrator::ifrk4, Integrator::strang}) {
    const SolverState s = step(make_state(c, 0.37, integ, 0.0), 0.37);
    Spectrum expected = c;
    expected.for_each_mode([&](int k1, int k2, cplx& v) { v *= std::polar(1.0, -norm2(c.xi(k1, k2)) * 0.37); });
    EXPECT_LE(max_diff(s.spectrum, expected), 1e-12);
    EXPECT_DOUBLE_EQ(s.time, 0.37);
  }
}

TEST(Ifrk4, PlaneWaveClosedForm) {
  EXPECT_LE(plane_wave_error(Integrator::ifrk4, 1e-3), 1e-10);
  const Grid2D g = Grid2D::make(16);
  const auto tr = evolve(make_state(plane_wave(g, 1, 0), 1e-3, Integrator::ifrk4, 1.0, -1), 1.0);
  EXPECT_LE(max_diff(tr.final_state.spectrum, plane_wave_at(g, 1.0, -1)), 1e-10);
}

TEST(Strang, PlaneWaveClosedForm) { EXPECT_LE(plane_wave_error(Integrator::strang, 1e-4), 1e-8); }

TEST(Integrators, ConvergenceOrders) {
  const Grid2D g = Grid2D::make(24);
  const Spectrum c = 0.3 * random_spectrum(g, 4, -1, 2.0);
  auto run = [&](Integrator integ, double dt) { return evolve(make_state(c, dt, integ), 0.5).final_state.spectrum; };
  const Spectrum ref = run(Integrator::ifrk4, 1.25e-4);

  const double e1 = max_diff(run(Integrator::ifrk4, 0.01), ref), e2 = max_diff(run(Integrator::ifrk4, 0.005), ref);
  EXPECT_NEAR(e1 / e2, 16.0, 4.0) << e1 << " " << e2;
  const double s1 = max_diff(run(Integrator::strang, 0.01), ref), s2 = max_diff(run(Integrator::strang, 0.005), ref);
  EXPECT_NEAR(s1 / s2, 4.0, 0.6) << s1 << " " << s2;
}

TEST(Integrators, AgreeOnPlaneWave) {
  const double a = plane_wave_error(Integrator::ifrk4, 1e-3), b = plane_wave_error(Integrator::strang, 1e-3);
  const Grid2D g = Grid2D::make(16);
  const auto x = evolve(make_state(plane_wave(g, 1, 0), 1e-3, Integrator::ifrk4), 1.0).final_state.spectrum;
  const auto y = evolve(make_state(plane_wave(g, 1, 0), 1e-3, Integrator::strang), 1.0).final_state.spectrum;
  EXPECT_LE(max_diff(x, y), 2 * (a + b) + 1e-14);
}

TEST(Evolve, Conservation) {
  const Grid2D g = Grid2D::make(64);
  const Spectrum c = prepare_spectrum(DataRecipe{}, IMethodParams::make(8, 0.6), g);
  const double m0 = mass(c), e0 = energy(c);
  double worst_mass = 0.0;
  const Observer obs = [&](double, const Spectrum& s) { worst_mass = std::max(worst_mass, rel_err(mass(s), m0)); };
  const auto tr = evolve(make_state(c, 1e-3), 1.0, {obs}, EvolveOptions{100});
  EXPECT_EQ(tr.steps, 1000);
  EXPECT_NEAR(tr.final_state.time, 1.0, 1e-12);
  EXPECT_EQ(tr.observed_times.size(), 11u);
  EXPECT_LE(worst_mass, 1e-10);
  EXPECT_LE(rel_err(energy(tr.final_state.spectrum), e0), 1e-8);
}

TEST(Evolve, ZeroStaysZeroAndHitsFinalTime) {
  const Grid2D g = Grid2D::make(16);
  const auto tr = evolve(make_state(Spectrum(g), 0.3), 1.0);
  for (const auto& v : tr.final_state.spectrum.coeffs()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(tr.steps, 4);
  EXPECT_DOUBLE_EQ(tr.final_state.time, 1.0);
}

TEST(Evolve, PhaseEquivarianceProperty) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const Grid2D g = Grid2D::make(16, uniform(rng, 3, 9));
    const Spectrum c = random_spectrum(g, rng());
    const cplx phase = std::polar(1.0, uniform(rng, 0, 6.28));
    const int sign = trial % 2 ? -1 : 1;
    const auto a = evolve(make_state(c, 2e-3, Integrator::ifrk4, 1.0, sign), 0.2).final_state.spectrum;
    const auto b = evolve(make_state(phase * c, 2e-3, Integrator::ifrk4, 1.0, sign), 0.2).final_state.spectrum;
    EXPECT_LE(max_diff(phase * a, b), 1e-10);
  }
}

TEST(Evolve, TimeReversal) {
  const Grid2D g = Grid2D::make(24);
  const Spectrum c = random_spectrum(g, 7, -1, 2.0);
  const auto fwd = evolve(make_state(c, 1e-3), 0.3).final_state.spectrum;
  // Conjugating the end state and evolving forward again undoes the motion.
  const auto back = evolve(make_state(conjugate_spectrum(fwd), 1e-3), 0.3).final_state.spectrum;
  EXPECT_LE(max_diff(conjugate_spectrum(back), c), 1e-8);
}

TEST(Evolve, NonFiniteThrows) {
  const Grid2D g = Grid2D::make(16);
  Spectrum c = random_spectrum(g, 8);
  c.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(evolve(make_state(c, 1e-2), 0.1), NumericalFailure);
  Spectrum huge = plane_wave(g, 0, 0, 1e160);
  EXPECT_THROW(evolve(make_state(huge, 1e-2), 0.1), NumericalFailure);
}
