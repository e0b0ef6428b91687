#include "nlslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nlslab/config.hpp"
#include "nlslab/parallel.hpp"

#ifndef NLSLAB_VERSION
#define NLSLAB_VERSION "0.0.0"
#endif

namespace nlslab {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::simulate, "simulate"},
    {ExperimentKind::acl_sweep, "acl-sweep"},
    {ExperimentKind::fixed_time_sweep, "fixed-time-sweep"},
    {ExperimentKind::theta_sweep, "theta-sweep"},
    {ExperimentKind::strichartz, "strichartz"},
    {ExperimentKind::symbol_audit, "symbol-audit"},
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Provenance provenance_of(const ExperimentConfig& config, std::uint64_t seed) {
  return {config_hash(config), version_string(), seed};
}

double mean_of(const std::vector<double>& v) {
  KahanSum acc;
  for (double x : v) acc.add(x);
  return v.empty() ? 0.0 : acc.value() / static_cast<double>(v.size());
}

double largest(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Trapezoid rule on samples spaced `h` apart, using every `stride`-th sample.
double trapezoid(const std::vector<double>& f, double h, std::size_t stride) {
  KahanSum acc;
  const std::size_t last = f.size() - 1;
  for (std::size_t i = 0; i <= last; i += stride) acc.add((i == 0 || i == last ? 0.5 : 1.0) * f[i]);
  return acc.value() * h * static_cast<double>(stride);
}

double simpson(const std::vector<double>& f, double h) {
  KahanSum acc;
  const std::size_t last = f.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) acc.add((i == 0 || i == last ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0)) * f[i]);
  return acc.value() * h / 3.0;
}

// Spectra at observer_samples equally spaced times on [0, t0].
struct Snapshots {
  std::vector<Spectrum> spectra;
  std::vector<double> times;
};

Snapshots evolve_snapshots(const Spectrum& u0, const ExperimentConfig& config, const IMethodParams& params) {
  const auto& sv = config.solver;
  const int steps = static_cast<int>(std::ceil(sv.t0 / sv.dt - 1e-9));
  const int intervals = sv.observer_samples - 1;
  Snapshots out;
  SolverState state{u0, 0.0, params, sv.dt, sv.integrator, sv.nonlinearity};
  evolve(state, sv.t0,
         {[&](double t, const Spectrum& s) {
           out.spectra.push_back(s);
           out.times.push_back(t);
         }},
         {steps / intervals});
  if (static_cast<int>(out.spectra.size()) != sv.observer_samples)
    throw std::logic_error("evolve_snapshots: unexpected observer count");
  return out;
}

Table make_table(std::string name, std::vector<std::string> columns) {
  Table t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  return t;
}

void attach_fit(SweepResult& r, const std::string& x, const std::string& y) {
  r.x_column = x;
  r.y_column = y;
  r.fit = fit_loglog(r.tables.front().column(x), r.tables.front().column(y));
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& k : kKindNames)
    if (name == k.name) return k.kind;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKindNames)
    if (kind == k.kind) return k.name;
  return "unknown";
}

std::string version_string() { return NLSLAB_VERSION; }

Grid2D ExperimentConfig::grid() const {
  return Grid2D::make(modes, length > 0.0 ? length : 2.0 * std::numbers::pi, cutoff);
}

IMethodParams ExperimentConfig::base_params() const { return IMethodParams::make(N, s, theta0, sign); }

IMethodParams ExperimentConfig::sweep_params(double n) const { return IMethodParams::make(n, s, 1.0 / n, sign); }

void ExperimentConfig::validate() const {
  const Grid2D g = grid();
  g.validate();
  base_params();
  if (!(solver.dt > 0.0) || !std::isfinite(solver.dt)) throw std::invalid_argument("solver.dt must be positive");
  if (!(solver.t0 > 0.0) || !std::isfinite(solver.t0)) throw std::invalid_argument("solver.t0 must be positive");
  if (kind == ExperimentKind::acl_sweep || kind == ExperimentKind::theta_sweep) {
    if (solver.observer_samples < 3 || solver.observer_samples % 2 == 0)
      throw std::invalid_argument("solver.observer_samples must be odd and >= 3");
    const int steps = static_cast<int>(std::ceil(solver.t0 / solver.dt - 1e-9));
    if (steps % (solver.observer_samples - 1) != 0)
      throw std::invalid_argument("solver: t0/dt must be a multiple of observer_samples - 1");
  }
  if (!std::isfinite(solver.nonlinearity)) throw std::invalid_argument("solver.nonlinearity must be finite");
  if (seeds.empty()) throw std::invalid_argument("seeds must not be empty");
  const double xi_max = g.retained_xi_max();
  if (kind == ExperimentKind::acl_sweep || kind == ExperimentKind::fixed_time_sweep) {
    if (N_list.empty()) throw std::invalid_argument("N list must not be empty");
    for (double n : N_list) {
      sweep_params(n);
      if (2.0 * n > xi_max)
        throw std::invalid_argument("N = " + format_double(n) + " violates 2N <= retained xi max " +
                                    format_double(xi_max));
    }
  }
  if (kind == ExperimentKind::theta_sweep || kind == ExperimentKind::simulate) {
    if (2.0 * N > xi_max) throw std::invalid_argument("N violates 2N <= retained xi max");
  }
  if (kind == ExperimentKind::theta_sweep && theta0_list.empty())
    throw std::invalid_argument("theta0 list must not be empty");
  for (double t : theta0_list) IMethodParams::make(N, s, t, sign);
  if (!(data.decay >= 0.0) || !std::isfinite(data.decay)) throw std::invalid_argument("data.decay must be >= 0");
  if (!(data.energy_target > 0.0)) throw std::invalid_argument("data.energy_target must be positive");
  if (!(data.mass_bound > 0.0)) throw std::invalid_argument("data.mass_bound must be positive");
  if (data.amplitude && !(*data.amplitude >= 0.0)) throw std::invalid_argument("data.amplitude must be >= 0");
  if (kind == ExperimentKind::strichartz) {
    const auto& st = strichartz;
    if (!(st.N1 > 0.0 && st.N1 <= st.N2)) throw std::invalid_argument("strichartz: need 0 < N1 <= N2");
    if (st.thetas.empty()) throw std::invalid_argument("strichartz: theta list must not be empty");
    for (double t : st.thetas)
      if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("strichartz: theta must lie in (0, 1]");
    if (st.panels < 1) throw std::invalid_argument("strichartz: panels must be >= 1");
    if (!(st.tolerance > 0.0)) throw std::invalid_argument("strichartz: tolerance must be positive");
    if (!(st.mc_epsilon > 0.0)) throw std::invalid_argument("strichartz: mc_epsilon must be positive");
  }
  if (simulate.observe_every < 1) throw std::invalid_argument("simulate.observe_every must be >= 1");
}

// ---------------------------------------------------------------------------

Spectrum prepare_spectrum(const DataRecipe& recipe, const IMethodParams& params, const Grid2D& grid) {
  params.validate();
  if (!(recipe.energy_target > 0.0) || !(recipe.mass_bound > 0.0) || !(recipe.decay >= 0.0))
    throw std::invalid_argument("prepare_data: degenerate recipe");
  if (recipe.amplitude && !(*recipe.amplitude >= 0.0))
    throw std::invalid_argument("prepare_data: amplitude must be >= 0");

  Spectrum unit(grid);
  std::mt19937_64 rng(recipe.seed);
  const int K = grid.cutoff;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1p-53;
      const Vec2 xi = unit.xi(k1, k2);
      const double bracket = std::sqrt(1.0 + xi[0] * xi[0] + xi[1] * xi[1]);
      unit.at(k1, k2) = std::pow(bracket, -recipe.decay) * std::polar(1.0, phi);
    }
  if (recipe.amplitude && *recipe.amplitude == 0.0) return Spectrum(grid);

  const double unit_mass = mass(unit);
  if (!(unit_mass > 0.0)) throw std::invalid_argument("prepare_data: degenerate profile");
  const double a_mass = recipe.mass_bound / unit_mass;
  auto energy_at = [&](double a) { return energy_Iu(cplx(a) * unit, params); };

  double a_max = a_mass;
  if (energy_at(a_mass) > recipe.energy_target) {
    double lo = 0.0, hi = a_mass;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (energy_at(mid) <= recipe.energy_target ? lo : hi) = mid;
    }
    a_max = lo;
  }
  if (!(a_max > 0.0)) throw std::invalid_argument("prepare_data: no positive amplitude meets both constraints");
  const double a = recipe.amplitude ? std::min(*recipe.amplitude, a_max) : a_max;
  return cplx(a) * unit;
}

Field prepare_data(const DataRecipe& recipe, const IMethodParams& params, const Grid2D& grid) {
  return inverse_transform(prepare_spectrum(recipe, params, grid));
}

std::optional<SlopeFit> fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log10(x[i]);
    my += std::log10(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log10(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log10(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log10(y[i]) - (f.intercept + f.slope * std::log10(x[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.points = x.size();
  return f;
}

std::vector<double> Table::column(const std::string& col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw std::out_of_range("Table " + name + ": no column " + col);
  const auto j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(j));
  return out;
}

std::optional<double> SweepResult::scalar(const std::string& name) const {
  for (const auto& s : scalars)
    if (s.name == name) return s.value;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SweepResult run_acl_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const Grid2D grid = config.grid();
  const auto& Ns = config.N_list;
  const auto& seeds = config.seeds;
  const IMethodParams calib = config.sweep_params(*std::max_element(Ns.begin(), Ns.end()));

  std::vector<Snapshots> traj(seeds.size());
  std::vector<double> e_iu0(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t j) {
    DataRecipe recipe = config.data;
    recipe.seed = seeds[j];
    const Spectrum u0 = prepare_spectrum(recipe, calib, grid);
    e_iu0[j] = energy_Iu(u0, calib);
    traj[j] = evolve_snapshots(u0, config, calib);
  });

  struct Run {
    double et0, et1, ei0, ei1, trap, trap2, simp;
  };
  const std::size_t nN = Ns.size();
  std::vector<Run> runs(seeds.size() * nN);
  parallel_for(runs.size(), [&](std::size_t job) {
    const std::size_t j = job / nN, i = job % nN;
    const IMethodParams p = config.sweep_params(Ns[i]);
    const Snapshots& snap = traj[j];
    Run& r = runs[job];
    r.et0 = modified_energy_tilde(snap.spectra.front(), p);
    r.et1 = modified_energy_tilde(snap.spectra.back(), p);
    r.ei0 = energy_Iu(snap.spectra.front(), p);
    r.ei1 = energy_Iu(snap.spectra.back(), p);
    std::vector<double> rate;
    for (const auto& s : snap.spectra) rate.push_back(modified_energy_rate(s, p).rate);
    const double h = snap.times[1] - snap.times[0];
    r.trap = trapezoid(rate, h, 1);
    r.trap2 = trapezoid(rate, h, 2);
    r.simp = simpson(rate, h);
  });

  SweepResult out;
  out.kind = ExperimentKind::acl_sweep;
  Table agg = make_table("acl_sweep", {"N", "theta0", "abs_dE_tilde", "abs_dE_Iu", "max_decomposition_error",
                                       "max_richardson_estimate"});
  Table per = make_table("acl_runs", {"seed", "N", "theta0", "E_tilde_0", "E_tilde_t0", "dE_tilde", "E_Iu_0",
                                      "E_Iu_t0", "dE_Iu", "trapezoid", "trapezoid_coarse", "simpson",
                                      "decomposition_error", "richardson_estimate", "consistent"});
  bool all_consistent = true;
  for (std::size_t i = 0; i < nN; ++i) {
    std::vector<double> dEt, dEi;
    double max_err = 0.0, max_rich = 0.0;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const Run& r = runs[j * nN + i];
      const double d_t = r.et1 - r.et0, d_i = r.ei1 - r.ei0;
      const double err = std::abs(d_t - r.trap);
      const double rich = std::abs(r.trap - r.trap2);
      // The trapezoid error is about rich / 3; the floor covers rounding in
      // the endpoint difference.
      const double floor = 1e-11 * (std::abs(r.et0) + std::abs(r.et1));
      const bool ok = err <= 2.0 * rich + floor;
      all_consistent = all_consistent && ok;
      dEt.push_back(std::abs(d_t));
      dEi.push_back(std::abs(d_i));
      max_err = std::max(max_err, err);
      max_rich = std::max(max_rich, rich);
      per.rows.push_back({static_cast<double>(seeds[j]), Ns[i], 1.0 / Ns[i], r.et0, r.et1, d_t, r.ei0, r.ei1, d_i,
                          r.trap, r.trap2, r.simp, err, rich, ok ? 1.0 : 0.0});
    }
    agg.rows.push_back({Ns[i], 1.0 / Ns[i], mean_of(dEt), mean_of(dEi), max_err, max_rich});
  }
  out.tables = {agg, per};
  attach_fit(out, "N", "abs_dE_tilde");
  if (const auto f = fit_loglog(agg.column("N"), agg.column("abs_dE_Iu"))) {
    out.scalars.push_back({"slope_abs_dE_Iu", f->slope});
    out.scalars.push_back({"residual_abs_dE_Iu", f->residual});
  }
  out.scalars.push_back({"decomposition_consistent", all_consistent ? 1.0 : 0.0});
  out.scalars.push_back({"largest_N", largest(Ns)});
  for (std::size_t j = 0; j < seeds.size(); ++j)
    out.scalars.push_back({"E_Iu_0_seed_" + std::to_string(seeds[j]), e_iu0[j]});
  if (!out.fit) out.warnings.push_back("no slope: fewer than 3 N values or a vanishing increment");
  if (!all_consistent) out.warnings.push_back("time-quadrature decomposition disagrees with the endpoint difference");
  out.provenance = provenance_of(config, seeds.front());
  out.wall_seconds = seconds_since(start);
  return out;
}

SweepResult run_fixed_time_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const Grid2D grid = config.grid();
  const auto& Ns = config.N_list;
  const auto& seeds = config.seeds;
  const IMethodParams calib = config.sweep_params(largest(Ns));

  std::vector<Spectrum> data(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t j) {
    DataRecipe recipe = config.data;
    recipe.seed = seeds[j];
    data[j] = prepare_spectrum(recipe, calib, grid);
  });

  const std::size_t nN = Ns.size();
  std::vector<double> gap(seeds.size() * nN), h1(seeds.size() * nN);
  parallel_for(gap.size(), [&](std::size_t job) {
    const std::size_t j = job / nN, i = job % nN;
    const IMethodParams p = config.sweep_params(Ns[i]);
    gap[job] = fixed_time_gap(data[j], p);
    h1[job] = sobolev_norm(apply_I(data[j], p), 1.0, false);
  });

  SweepResult out;
  out.kind = ExperimentKind::fixed_time_sweep;
  Table agg = make_table("fixed_time_sweep", {"N", "theta0", "gap", "normalized_gap"});
  Table per = make_table("fixed_time_runs", {"seed", "N", "theta0", "gap", "Iu_H1", "normalized_gap"});
  for (std::size_t i = 0; i < nN; ++i) {
    std::vector<double> g, ng;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const std::size_t job = j * nN + i;
      const double h4 = std::pow(h1[job], 4);
      const double normalized = h4 > 0.0 ? gap[job] / Ns[i] / h4 : 0.0;
      g.push_back(gap[job]);
      ng.push_back(normalized);
      per.rows.push_back({static_cast<double>(seeds[j]), Ns[i], 1.0 / Ns[i], gap[job], h1[job], normalized});
    }
    agg.rows.push_back({Ns[i], 1.0 / Ns[i], mean_of(g), mean_of(ng)});
  }
  out.tables = {agg, per};
  attach_fit(out, "N", "gap");
  if (!out.fit) out.warnings.push_back("no slope: fewer than 3 N values or a vanishing gap");
  out.provenance = provenance_of(config, seeds.front());
  out.wall_seconds = seconds_since(start);
  return out;
}

SweepResult run_theta0_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const Grid2D grid = config.grid();
  const auto& thetas = config.theta0_list;
  const auto& seeds = config.seeds;
  const IMethodParams base = config.base_params();

  std::vector<Snapshots> traj(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t j) {
    DataRecipe recipe = config.data;
    recipe.seed = seeds[j];
    const Spectrum u0 = prepare_spectrum(recipe, base, grid);
    traj[j] = evolve_snapshots(u0, config, base);
  });

  const std::size_t nT = thetas.size();
  std::vector<double> gap(seeds.size() * nT), dEt(seeds.size() * nT);
  parallel_for(gap.size(), [&](std::size_t job) {
    const std::size_t j = job / nT, i = job % nT;
    const IMethodParams p = IMethodParams::make(config.N, config.s, thetas[i], config.sign);
    const Spectrum& u0 = traj[j].spectra.front();
    gap[job] = fixed_time_gap(u0, p);
    dEt[job] = std::abs(modified_energy_tilde(traj[j].spectra.back(), p) - modified_energy_tilde(u0, p));
  });

  SweepResult out;
  out.kind = ExperimentKind::theta_sweep;
  Table agg = make_table("theta_sweep", {"theta0", "N", "gap", "abs_dE_tilde"});
  Table per = make_table("theta_runs", {"seed", "theta0", "gap", "abs_dE_tilde"});
  for (std::size_t i = 0; i < nT; ++i) {
    std::vector<double> g, d;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const std::size_t job = j * nT + i;
      g.push_back(gap[job]);
      d.push_back(dEt[job]);
      per.rows.push_back({static_cast<double>(seeds[j]), thetas[i], gap[job], dEt[job]});
    }
    agg.rows.push_back({thetas[i], config.N, mean_of(g), mean_of(d)});
  }
  out.tables = {agg, per};
  attach_fit(out, "theta0", "gap");
  if (const auto f = fit_loglog(agg.column("theta0"), agg.column("abs_dE_tilde"))) {
    out.scalars.push_back({"slope_abs_dE_tilde", f->slope});
    out.scalars.push_back({"residual_abs_dE_tilde", f->residual});
  }
  const auto d = agg.column("abs_dE_tilde");
  const auto best = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
  out.scalars.push_back({"optimal_theta0", thetas[best]});
  out.scalars.push_back({"inverse_N", 1.0 / config.N});
  for (double t : thetas)
    if (!(t < 0.01))
      out.warnings.push_back("theta0 = " + format_double(t) + " lies outside the small-threshold range (0, 1/100)");
  if (nT < 3) out.warnings.push_back("no slope: fewer than 3 theta0 values");
  out.provenance = provenance_of(config, seeds.front());
  out.wall_seconds = seconds_since(start);
  return out;
}

SweepResult run_strichartz_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const auto& st = config.strichartz;
  const std::size_t n = st.thetas.size();
  std::vector<BilinearNorm> restricted(n), free(n);
  parallel_for(2 * n, [&](std::size_t job) {
    BilinearSetup setup = extremizer_setup(st.N1, st.N2, st.thetas[job / 2]);
    if (job % 2 == 0) {
      restricted[job / 2] = bilinear_norm(setup, st.panels, st.tolerance);
    } else {
      setup.angular = false;
      free[job / 2] = bilinear_norm(setup, st.panels, st.tolerance);
    }
  });

  SweepResult out;
  out.kind = ExperimentKind::strichartz;
  Table t = make_table("strichartz_sweep", {"theta", "ratio", "norm_sq", "rel_change", "unrestricted_ratio",
                                             "unrestricted_rel_change", "baseline", "beyond_N1_over_N2"});
  const double baseline = std::sqrt(st.N2 / st.N1);
  for (std::size_t i = 0; i < n; ++i) {
    const bool beyond = st.thetas[i] >= st.N1 / st.N2;
    t.rows.push_back({st.thetas[i], restricted[i].ratio, restricted[i].norm_sq, restricted[i].rel_change,
                      free[i].ratio, free[i].rel_change, baseline, beyond ? 1.0 : 0.0});
    if (beyond)
      out.warnings.push_back("theta = " + format_double(st.thetas[i]) +
                             " >= N1/N2: the unrestricted bilinear bound already applies");
    if (!(st.thetas[i] < 0.02))
      out.warnings.push_back("theta = " + format_double(st.thetas[i]) + " lies outside (0, 1/50)");
  }
  out.tables = {t};
  attach_fit(out, "theta", "ratio");
  double max_rel = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_rel = std::max({max_rel, restricted[i].rel_change, free[i].rel_change});
  out.scalars.push_back({"max_rel_change", max_rel});
  out.scalars.push_back({"tolerance", st.tolerance});

  if (st.mc_theta > 0.0 && st.mc_samples > 0) {
    const BilinearSetup setup = extremizer_setup(st.N1, st.N2, st.mc_theta);
    const MonteCarloEstimate mc = bilinear_norm_monte_carlo(setup, st.mc_samples, config.data.seed, st.mc_epsilon);
    const double quad = bilinear_norm(setup, st.panels, st.tolerance).norm_sq;
    out.scalars.push_back({"mc_theta", st.mc_theta});
    out.scalars.push_back({"mc_norm_sq", mc.norm_sq});
    out.scalars.push_back({"mc_std_error", mc.std_error});
    out.scalars.push_back({"quadrature_norm_sq", quad});
    out.scalars.push_back({"mc_rel_diff", quad > 0.0 ? std::abs(mc.norm_sq - quad) / quad : 0.0});
  }
  out.provenance = provenance_of(config, config.data.seed);
  out.wall_seconds = seconds_since(start);
  return out;
}

SweepResult run_simulate(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const Grid2D grid = config.grid();
  const IMethodParams p = config.base_params();
  const Spectrum u0 = prepare_spectrum(config.data, p, grid);

  SweepResult out;
  out.kind = ExperimentKind::simulate;
  std::vector<std::string> cols{"time", "mass", "energy", "E_Iu"};
  if (config.simulate.e_tilde) cols.push_back("E_tilde");
  Table t = make_table("trajectory", cols);
  const auto& sv = config.solver;
  SolverState state{u0, 0.0, p, sv.dt, sv.integrator, sv.nonlinearity};
  const double coupling = state.coupling();
  const Trajectory tr = evolve(state, sv.t0,
                               {[&](double time, const Spectrum& s) {
                                 const double ep = energy(s, +1), em = energy(s, -1);
                                 const double e = 0.5 * (ep + em) + 0.5 * coupling * (ep - em);
                                 std::vector<double> row{time, mass(s), e, energy_Iu(s, p)};
                                 if (config.simulate.e_tilde) row.push_back(modified_energy_tilde(s, p));
                                 t.rows.push_back(std::move(row));
                               }},
                               {config.simulate.observe_every});
  out.tables = {t};
  out.scalars.push_back({"steps", static_cast<double>(tr.steps)});
  out.scalars.push_back({"final_time", tr.final_state.time});
  out.checkpoint = tr.final_state.spectrum;
  const auto m = t.column("mass");
  const auto e = t.column("energy");
  out.scalars.push_back({"mass_rel_drift", std::abs(m.back() - m.front()) / std::max(m.front(), 1e-300)});
  out.scalars.push_back({"energy_rel_drift", std::abs(e.back() - e.front()) / std::max(std::abs(e.front()), 1e-300)});
  out.provenance = provenance_of(config, config.data.seed);
  out.wall_seconds = seconds_since(start);
  return out;
}

AuditRun run_symbol_audit(const ExperimentConfig& config) {
  AuditRun run;
  run.config.params = config.base_params();
  run.config.seed = config.data.seed;
  run.config.stratum = config.audit.stratum;
  run.report = audit_symbol_bounds(run.config, config.audit.samples);
  run.provenance = provenance_of(config, config.data.seed);
  return run;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> evaluate_checks(const SweepResult& r) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };
  auto slope_check = [&](const std::string& name, double bound, bool upper) {
    if (!r.fit) {
      add(name, false, "no fit available");
      return;
    }
    const bool ok = upper ? r.fit->slope <= bound : r.fit->slope >= bound;
    add(name, ok, "slope " + format_double(r.fit->slope) + (upper ? " <= " : " >= ") + format_double(bound));
    add("fit residual < 0.2", r.fit->residual < 0.2, "residual " + format_double(r.fit->residual));
  };

  switch (r.kind) {
    case ExperimentKind::acl_sweep: {
      slope_check("slope of |dE_tilde| vs N <= -1.5", -1.5, true);
      const Table& t = r.tables.front();
      const auto n = t.column("N");
      const auto k = static_cast<std::size_t>(std::max_element(n.begin(), n.end()) - n.begin());
      const double dt = t.column("abs_dE_tilde")[k], di = t.column("abs_dE_Iu")[k];
      add("|dE_tilde| <= |dE_Iu| at largest N", dt <= di, format_double(dt) + " vs " + format_double(di));
      add("time-quadrature decomposition consistent", r.scalar("decomposition_consistent").value_or(0.0) == 1.0,
          "per-run endpoint difference versus trapezoid of the rate");
      break;
    }
    case ExperimentKind::fixed_time_sweep:
      slope_check("slope of gap vs N <= -0.8", -0.8, true);
      break;
    case ExperimentKind::theta_sweep: {
      const Table& t = r.tables.front();
      const auto th = t.column("theta0"), g = t.column("gap");
      bool ok = true;
      std::string detail;
      for (std::size_t i = 0; i + 1 < th.size(); ++i) {
        if (std::abs(th[i + 1] / th[i] - 0.5) > 1e-12 && std::abs(th[i + 1] / th[i] - 2.0) > 1e-12) continue;
        const auto [lo, hi] = th[i] < th[i + 1] ? std::pair{i, i + 1} : std::pair{i + 1, i};
        if (!(g[lo] > 0.0)) continue;
        const double ratio = g[hi] / g[lo];
        ok = ok && ratio >= 0.3 && ratio <= 0.7;
        detail += format_double(ratio) + " ";
      }
      add("gap ratio under theta0 doubling in [0.3, 0.7]", ok, detail.empty() ? "no doubling pairs" : detail);
      break;
    }
    case ExperimentKind::strichartz: {
      if (r.fit) {
        add("|slope - 0.5| <= 0.15", std::abs(r.fit->slope - 0.5) <= 0.15, "slope " + format_double(r.fit->slope));
      } else {
        add("|slope - 0.5| <= 0.15", false, "no fit available");
      }
      const double rel = r.scalar("max_rel_change").value_or(1.0);
      add("quadrature refinement change < 1%", rel < 0.01, format_double(100.0 * rel) + "%");
      break;
    }
    case ExperimentKind::simulate:
    case ExperimentKind::symbol_audit:
      break;
  }
  return out;
}

}  // namespace nlslab
