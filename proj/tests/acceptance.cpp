// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select a subset of criteria by number.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "nlslab/experiments.hpp"
#include "nlslab/parallel.hpp"
#include "nlslab/report.hpp"
#include "nlslab/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace nlslab::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome all_of(const std::vector<CheckResult>& checks) {
  Outcome o{true, ""};
  for (const auto& c : checks) {
    o.pass = o.pass && c.passed;
    o.detail += std::string(c.passed ? "[ok] " : "[FAIL] ") + c.name + " (" + c.detail + "); ";
  }
  return o;
}

Outcome normalization_anchors() {
  const Grid2D g = Grid2D::make(16);
  double worst2 = 0.0, worst4 = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const IMethodParams p = IMethodParams::make(1.0 + 0.1 * seed, 0.6);
    const Spectrum c = random_spectrum(g, seed);
    const Spectrum Ic = naive_apply_I(c, p);
    worst2 = std::max(worst2, rel_err(eval_lambda2(sigma2_symbol(p), c), 0.5 * naive_gradient_sq(Ic, 2 * g.modes)));
    worst4 = std::max(worst4, rel_err(eval_lambda4_direct(sigma4_symbol(p), c), 0.25 * naive_quartic_integral(Ic, 2 * g.modes)));
  }
  return {worst2 <= 1e-10 && worst4 <= 1e-10, "max rel err Lambda2 " + fmt("%.3g", worst2) + ", Lambda4 " + fmt("%.3g", worst4)};
}

Outcome unit_multiplier_cancellation() {
  std::mt19937_64 rng(2024);
  const IMethodParams p = IMethodParams::make(kInf, 0.6, 0.05);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto t = random_tuple4(rng, i % 2 ? 100.0 : 1.0);
    worst = std::max(worst, std::abs(x_sigma2_sym(t, p) - 0.25 * alpha4(t)) / (1 + tuple_scale(t)));
  }
  const auto six = symmetrize(extend_X(scaled(sigma4_symbol(p), cplx(0, 4))));
  bool zero = true;
  for (int i = 0; i < 10000; ++i) zero = zero && six(random_tuple6(rng, 50.0)) == cplx(0.0);
  return {worst <= 1e-12 && zero,
          "max |x_sigma2_sym - alpha4/4| / scale " + fmt("%.3g", worst) + (zero ? ", sextic symbol exactly 0" : ", sextic symbol nonzero")};
}

Outcome region_identity() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  bool quarter = true;
  for (int i = 0; i < 100000; ++i) {
    const IMethodParams p = random_params(rng);
    const auto t = random_tuple4_in_ball(rng, p.N);
    worst = std::max(worst, std::abs(x_sigma2_sym(t, p) - 0.25 * alpha4(t)) / (1 + tuple_scale(t)));
    quarter = quarter && sigma4_tilde(t, p) == 0.25;
  }
  return {worst <= 1e-14 && quarter, "max rel deviation " + fmt("%.3g", worst) + (quarter ? ", sigma4_tilde == 1/4" : ", sigma4_tilde != 1/4")};
}

Outcome derivative_formula() {
  const Grid2D g = Grid2D::make(12);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const IMethodParams p = IMethodParams::make(1.0 + 0.5 * seed, 0.6);
    const Field u = inverse_transform(random_spectrum(g, seed));
    worst = std::max(worst, derivative_identity_residual(sigma4_symbol(p), u, p));
    worst = std::max(worst, derivative_identity_residual(sigma4_tilde_symbol(p), u, p));
  }
  const Grid2D small = Grid2D::make(8);
  double worst6 = 0.0;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const IMethodParams p = IMethodParams::make(1.0, 0.6, 0.3);
    const Spectrum c = random_spectrum(small, seed, -1, 0.0);
    for (const auto& m : {sigma4_symbol(p), sigma4_tilde_symbol(p)})
      worst6 = std::max(worst6, rel_err(eval_lambda6_substitution(m, c), exhaustive_lambda6(extend_X(m), c)));
  }
  return {worst <= 1e-8 && worst6 <= 1e-10,
          "max residual " + fmt("%.3g", worst) + ", Lambda6 substitution vs enumeration " + fmt("%.3g", worst6)};
}

Outcome symbol_audits() {
  AuditConfig cfg;
  cfg.params = IMethodParams::make(32, 0.6);
  cfg.seed = 1;
  const auto r = audit_symbol_bounds(cfg, 1'000'000);
  AuditConfig unit = cfg;
  unit.params = IMethodParams::make(kInf, 0.6, 1.0 / 32);
  const auto u = audit_symbol_bounds(unit, 1'000'000);
  const bool finite = std::isfinite(r.max_ratio) && std::isfinite(r.max_corollary_ratio);
  return {finite && r.max_ratio <= 10.0 && u.max_ratio <= 0.5,
          "max ratio " + fmt("%.6g", r.max_ratio) + ", recorded corollary constant " + fmt("%.6g", r.max_corollary_ratio) +
              ", unit multiplier max " + fmt("%.17g", u.max_ratio)};
}

Outcome solver_conservation() {
  ExperimentConfig c;
  c.kind = ExperimentKind::simulate;
  c.modes = 64;
  c.N = 8;
  c.solver.t0 = 1.0;
  c.solver.dt = 1e-3;
  c.simulate.observe_every = 100;
  const SweepResult r = run_simulate(c);
  const double dm = *r.scalar("mass_rel_drift"), de = *r.scalar("energy_rel_drift");

  const Grid2D g = Grid2D::make(64);
  SolverState st;
  st.spectrum = plane_wave(g, 1, 0);
  st.dt = 1e-3;
  const Spectrum end = evolve(st, 1.0).final_state.spectrum;
  double err = 0.0;
  const Spectrum exact = plane_wave(g, 1, 0, std::polar(1.0, -2.0));
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(end.coeffs()[i] - exact.coeffs()[i]));
  return {dm <= 1e-8 && de <= 1e-8 && err <= 1e-10,
          "mass drift " + fmt("%.3g", dm) + ", energy drift " + fmt("%.3g", de) + ", plane wave error " + fmt("%.3g", err)};
}

ExperimentConfig sweep_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  return c;
}

struct SweepRuns {
  std::map<int, SweepResult> results;
};

SweepResult run_kind(int criterion) {
  switch (criterion) {
    case 7: return run_acl_sweep(sweep_config(ExperimentKind::acl_sweep));
    case 8: return run_fixed_time_sweep(sweep_config(ExperimentKind::fixed_time_sweep));
    default: return run_strichartz_sweep(sweep_config(ExperimentKind::strichartz));
  }
}

std::string fit_text(const SweepResult& r) {
  if (!r.fit) return "no fit; ";
  return "slope " + fmt("%.4g", r.fit->slope) + ", residual " + fmt("%.3g", r.fit->residual) + "; ";
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto want = [&](int k) { return selected.empty() || selected.count(k); };

  int failures = 0;
  auto report = [&](int k, const std::string& name, const Outcome& o, double seconds) {
    std::printf("criterion %2d: %s  %s [%.1f s]\n    %s\n", k, o.pass ? "PASS" : "FAIL", name.c_str(), seconds,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto timed = [&](int k, const std::string& name, const std::function<Outcome()>& fn) {
    if (!want(k)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(k, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };

  timed(1, "normalization anchors", normalization_anchors);
  timed(2, "unit-multiplier cancellation", unit_multiplier_cancellation);
  timed(3, "low-frequency region identity", region_identity);
  timed(4, "differentiation formula and sextic substitution", derivative_formula);
  timed(5, "symbol-bound audits", symbol_audits);
  timed(6, "solver conservation", solver_conservation);

  const std::map<int, std::string> names{{7, "almost-conservation sweep"}, {8, "fixed-time sweep"}, {9, "bilinear Strichartz sweep"}};
  SweepRuns first;
  set_thread_count(1);
  for (const auto& [k, name] : names) {
    timed(k, name, [&, k = k] {
      const SweepResult r = run_kind(k);
      first.results[k] = r;
      Outcome o = all_of(evaluate_checks(r));
      o.detail = fit_text(r) + o.detail;
      return o;
    });
  }

  timed(10, "thread-count determinism", [&] {
    set_thread_count(4);
    Outcome o{true, ""};
    for (const auto& [k, name] : names) {
      if (!first.results.count(k)) first.results[k] = [&] {
        set_thread_count(1);
        SweepResult r = run_kind(k);
        set_thread_count(4);
        return r;
      }();
      const SweepResult again = run_kind(k);
      const SweepResult& ref = first.results[k];
      bool same = ref.tables.size() == again.tables.size();
      for (std::size_t t = 0; same && t < ref.tables.size(); ++t) same = table_csv(ref.tables[t]) == table_csv(again.tables[t]);
      o.pass = o.pass && same;
      o.detail += name + (same ? ": identical; " : ": DIFFERENT; ");
    }
    set_thread_count(0);
    o.detail = "1 vs 4 threads: " + o.detail;
    return o;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
