#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/multiplier.hpp"

namespace nlslab {

enum class Integrator { ifrk4, strang };

/// Raised when a step produces a non-finite coefficient.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverState {
  Spectrum spectrum;
  double time = 0.0;
  IMethodParams params{};
  double dt = 1e-3;
  Integrator integrator = Integrator::ifrk4;
  /// Multiplies the cubic term; 0 gives free evolution.
  double nonlinearity = 1.0;

  double coupling() const { return nonlinearity * params.sign; }
};

/// dc/dt = -i |xi|^2 c - i * sign * P_K(|u|^2 u). `sign` may be any real
/// coupling, including 0.
Spectrum rhs(const Spectrum& spectrum, double sign);

SolverState step_ifrk4(const SolverState& state, double dt);
SolverState step_strang(const SolverState& state, double dt);
SolverState step(const SolverState& state, double dt);

using Observer = std::function<void(double time, const Spectrum& spectrum)>;

struct EvolveOptions {
  /// Observers fire at the start, every `observe_every` steps, and at the end.
  int observe_every = 1;
};

struct Trajectory {
  SolverState final_state;
  int steps = 0;
  std::vector<double> observed_times;
};

/// Fixed-step integration to t_final. The step is shrunk uniformly so that
/// t_final is hit exactly. Throws NumericalFailure on non-finite output.
Trajectory evolve(const SolverState& state, double t_final, const std::vector<Observer>& observers = {},
                  EvolveOptions options = {});

}  // namespace nlslab
