#include "nlslab/solver.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

namespace {

// e^{-i |xi|^2 h} per stored mode.
std::vector<cplx> linear_phase(const Grid2D& g, double h) {
  std::vector<cplx> out(g.size());
  const double scale2 = g.freq_scale() * g.freq_scale();
  for (int i1 = 0; i1 < g.modes; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.modes; ++i2) {
      const int k2 = g.wavenumber(i2);
      const double w = (k1 * k1 + k2 * k2) * scale2;
      out[static_cast<std::size_t>(i1) * g.modes + i2] = std::polar(1.0, -w * h);
    }
  }
  return out;
}

Spectrum nonlinear_part(const Spectrum& c, double coupling) {
  Spectrum w = cubic_term(c);
  w *= cplx(0.0, -coupling);
  return w;
}

void check_finite(const Spectrum& s) {
  for (const auto& c : s.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw NumericalFailure("solver: non-finite coefficient (possible blowup)");
}

}  // namespace

Spectrum rhs(const Spectrum& spectrum, double sign) {
  const Grid2D& g = spectrum.grid();
  Spectrum out = sign == 0.0 ? Spectrum(g) : nonlinear_part(spectrum, sign);
  const double scale2 = g.freq_scale() * g.freq_scale();
  auto src = spectrum.coeffs();
  auto dst = out.coeffs();
  for (int i1 = 0; i1 < g.modes; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.modes; ++i2) {
      const int k2 = g.wavenumber(i2);
      const std::size_t idx = static_cast<std::size_t>(i1) * g.modes + i2;
      dst[idx] += cplx(0.0, -(k1 * k1 + k2 * k2) * scale2) * src[idx];
    }
  }
  return out;
}

SolverState step_ifrk4(const SolverState& state, double dt) {
  const Grid2D& g = state.spectrum.grid();
  const double coupling = state.coupling();
  const auto E = linear_phase(g, 0.5 * dt);
  const std::size_t n = g.size();
  auto N = [&](const std::vector<cplx>& v) {
    if (coupling == 0.0) return std::vector<cplx>(n, 0.0);
    const Spectrum r = nonlinear_part(Spectrum(g, v), coupling);
    return std::vector<cplx>(r.coeffs().begin(), r.coeffs().end());
  };

  const std::vector<cplx> c(state.spectrum.coeffs().begin(), state.spectrum.coeffs().end());
  std::vector<cplx> tmp(n);

  const auto a = N(c);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = E[i] * (c[i] + 0.5 * dt * a[i]);
  const auto b = N(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = E[i] * c[i] + 0.5 * dt * b[i];
  const auto cc = N(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = E[i] * E[i] * c[i] + dt * E[i] * cc[i];
  const auto d = N(tmp);

  std::vector<cplx> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx E2 = E[i] * E[i];
    next[i] = E2 * c[i] + dt / 6.0 * (E2 * a[i] + 2.0 * E[i] * (b[i] + cc[i]) + d[i]);
  }

  SolverState out = state;
  out.spectrum = Spectrum(g, std::move(next));
  out.spectrum.dealias();
  out.time = state.time + dt;
  return out;
}

SolverState step_strang(const SolverState& state, double dt) {
  const Grid2D& g = state.spectrum.grid();
  const double coupling = state.coupling();
  const auto E = linear_phase(g, 0.5 * dt);
  std::vector<cplx> c(state.spectrum.coeffs().begin(), state.spectrum.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= E[i];

  Spectrum half(g, std::move(c));
  if (coupling != 0.0) {
    const int r = std::max(half.support_radius(), g.cutoff);
    const int padded = fft_friendly_size(std::max({3 * r + g.cutoff + 1, 2 * r + 1, 4}));
    auto samples = sample_on_grid(half, padded);
    for (auto& v : samples) v *= std::polar(1.0, -coupling * std::norm(v) * dt);
    half = project_from_grid(samples, padded, g);
  }
  auto coeffs = half.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= E[i];

  SolverState out = state;
  out.spectrum = std::move(half);
  out.spectrum.dealias();
  out.time = state.time + dt;
  return out;
}

SolverState step(const SolverState& state, double dt) {
  return state.integrator == Integrator::ifrk4 ? step_ifrk4(state, dt) : step_strang(state, dt);
}

Trajectory evolve(const SolverState& state, double t_final, const std::vector<Observer>& observers,
                  EvolveOptions options) {
  if (!(t_final > state.time)) throw std::invalid_argument("evolve: t_final must exceed the current time");
  if (!(state.dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  const double span = t_final - state.time;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / state.dt - 1e-9)));
  const double h = span / steps;
  const int every = std::max(1, options.observe_every);

  Trajectory traj;
  SolverState cur = state;
  auto notify = [&] {
    for (const auto& obs : observers) obs(cur.time, cur.spectrum);
    traj.observed_times.push_back(cur.time);
  };
  notify();
  for (int i = 1; i <= steps; ++i) {
    cur = step(cur, h);
    cur.time = i == steps ? t_final : state.time + i * h;
    check_finite(cur.spectrum);
    if (i % every == 0 || i == steps) notify();
  }
  traj.final_state = std::move(cur);
  traj.steps = steps;
  return traj;
}

}  // namespace nlslab
