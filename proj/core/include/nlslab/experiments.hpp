#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/multiplier.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/strichartz.hpp"
#include "nlslab/symbols.hpp"

namespace nlslab {

enum class ExperimentKind { simulate, acl_sweep, fixed_time_sweep, theta_sweep, strichartz, symbol_audit };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// c(k) = a <xi_k>^{-decay} e^{i phi_k} on the retained band, phases from the seed.
struct DataRecipe {
  std::uint64_t seed = 11;
  /// Requested amplitude; when absent the largest admissible amplitude is used.
  std::optional<double> amplitude;
  double decay = 3.0;
  double energy_target = 1.0;  // E(I u0) <= energy_target
  double mass_bound = 10.0;    // ||u0||_{L^2} <= mass_bound
};

struct SolverSettings {
  double dt = 1e-3;
  double t0 = 0.1;
  Integrator integrator = Integrator::ifrk4;
  /// Observer samples on [0, t0], endpoints included.
  int observer_samples = 5;
  /// Multiplies the cubic term; 0 gives free evolution.
  double nonlinearity = 1.0;
};

struct StrichartzSettings {
  double N1 = 8.0;
  double N2 = 8.0;
  std::vector<double> thetas{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  int panels = 8;
  double tolerance = 0.01;
  std::uint64_t mc_samples = 4'000'000;
  double mc_epsilon = 0.25;
  /// Theta of the Monte Carlo cross-check; 0 disables it.
  double mc_theta = 1.0 / 16;
};

struct AuditSettings {
  std::uint64_t samples = 1'000'000;
  AuditStratum stratum = AuditStratum::all;
};

struct SimulateSettings {
  int observe_every = 10;
  bool e_tilde = false;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::acl_sweep;
  int modes = 48;
  double length = 0.0;  // 0 selects 2 pi
  std::optional<int> cutoff;
  /// Base parameters: N is used by simulate, theta-sweep and symbol-audit;
  /// theta0 absent means 1/N.
  double N = 8.0;
  std::optional<double> theta0;
  double s = 0.6;
  int sign = +1;
  std::vector<double> N_list{2, 3, 4, 6, 8};
  std::vector<double> theta0_list{0.32, 0.16, 0.08, 0.04, 0.02, 0.01, 0.005, 0.0025};
  std::vector<std::uint64_t> seeds{11, 12, 13};
  DataRecipe data{};
  SolverSettings solver{};
  StrichartzSettings strichartz{};
  AuditSettings audit{};
  SimulateSettings simulate{};
  std::string output_dir;

  Grid2D grid() const;
  /// Base parameters.
  IMethodParams base_params() const;
  /// Threshold n with theta0 = 1/n.
  IMethodParams sweep_params(double n) const;
  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Seeded profile scaled to satisfy E(I u0) <= target and mass <= bound under
/// `params`. Throws std::invalid_argument for a degenerate recipe.
Field prepare_data(const DataRecipe& recipe, const IMethodParams& params, const Grid2D& grid);
Spectrum prepare_spectrum(const DataRecipe& recipe, const IMethodParams& params, const Grid2D& grid);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS of the log10 residuals.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Least squares of log10 y against log10 x. nullopt with fewer than 3 points
/// or any non-positive value.
std::optional<SlopeFit> fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

struct Provenance {
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
};

struct Scalar {
  std::string name;
  double value = 0.0;
};

struct SweepResult {
  ExperimentKind kind = ExperimentKind::acl_sweep;
  /// tables[0] carries the fitted columns.
  std::vector<Table> tables;
  std::string x_column, y_column;
  std::optional<SlopeFit> fit;
  std::vector<Scalar> scalars;
  std::vector<std::string> warnings;
  Provenance provenance;
  double wall_seconds = 0.0;
  /// Final state of a simulate run.
  std::optional<Spectrum> checkpoint;

  std::optional<double> scalar(const std::string& name) const;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Threshold checks used by --check mode and by the acceptance suite.
std::vector<CheckResult> evaluate_checks(const SweepResult& result);

SweepResult run_acl_sweep(const ExperimentConfig& config);
SweepResult run_fixed_time_sweep(const ExperimentConfig& config);
SweepResult run_theta0_sweep(const ExperimentConfig& config);
SweepResult run_strichartz_sweep(const ExperimentConfig& config);
SweepResult run_simulate(const ExperimentConfig& config);

struct AuditRun {
  SymbolAuditReport report;
  Provenance provenance;
  AuditConfig config;
};
AuditRun run_symbol_audit(const ExperimentConfig& config);

std::string version_string();

}  // namespace nlslab
