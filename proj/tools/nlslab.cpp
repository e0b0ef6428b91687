#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

#include "CLI11.hpp"
#include "nlslab/config.hpp"
#include "nlslab/experiments.hpp"
#include "nlslab/multilinear.hpp"
#include "nlslab/report.hpp"
#include "nlslab/spectral_io.hpp"
#include "nlslab/symbols.hpp"

namespace {

using namespace nlslab;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kCheck = 4 };

struct Common {
  std::string config_path;
  std::string out;
  bool force = false;
  bool check = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config document")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "Run directory (overrides output_dir)");
  app->add_flag("--force", c.force, "Overwrite an existing run directory");
  app->add_flag("--check", c.check, "Exit with code 4 when an acceptance threshold fails");
}

double parse_threshold(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("invalid N: " + s);
  return v;
}

ExperimentConfig load(const Common& c, ExperimentKind kind) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path, kind);
  cfg.kind = kind;
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

void warn_range(const IMethodParams& p) {
  if (!p.in_small_angle_range())
    std::cerr << "warning: theta0 = " << p.theta0 << " lies outside the small-threshold range (0, 1/100)\n";
}

void validate(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.output_dir.empty()) throw ConfigError("no run directory: pass --out or set output_dir");
}

int print_and_check(const SweepResult& r, bool check) {
  std::printf("%s: %zu table(s), %.2f s\n", to_string(r.kind).c_str(), r.tables.size(), r.wall_seconds);
  if (r.fit)
    std::printf("fit log10(%s) vs log10(%s): slope %.6g, residual %.3g, %zu points\n", r.y_column.c_str(),
                r.x_column.c_str(), r.fit->slope, r.fit->residual, r.fit->points);
  for (const auto& s : r.scalars) std::printf("%s = %.10g\n", s.name.c_str(), s.value);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  bool ok = true;
  for (const auto& c : evaluate_checks(r)) {
    std::printf("[%s] %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return check && !ok ? kCheck : kOk;
}

int run_sweep(const Common& c, ExperimentKind kind) {
  ExperimentConfig cfg = load(c, kind);
  validate(cfg);
  switch (kind) {
    case ExperimentKind::acl_sweep:
    case ExperimentKind::fixed_time_sweep:
      for (double n : cfg.N_list) warn_range(cfg.sweep_params(n));
      break;
    case ExperimentKind::simulate:
      warn_range(cfg.base_params());
      break;
    default:
      break;
  }
  SweepResult r;
  switch (kind) {
    case ExperimentKind::acl_sweep: r = run_acl_sweep(cfg); break;
    case ExperimentKind::fixed_time_sweep: r = run_fixed_time_sweep(cfg); break;
    case ExperimentKind::theta_sweep: r = run_theta0_sweep(cfg); break;
    case ExperimentKind::strichartz: r = run_strichartz_sweep(cfg); break;
    case ExperimentKind::simulate: r = run_simulate(cfg); break;
    case ExperimentKind::symbol_audit: throw std::logic_error("symbol-audit is not a sweep");
  }
  const std::filesystem::path dir = cfg.output_dir;
  write_run(r, cfg, dir, c.force);
  if (r.checkpoint) save_spectrum(dir / "checkpoint.nls", *r.checkpoint);
  if (kind != ExperimentKind::simulate) emit_report(dir, true);
  std::printf("wrote %s\n", dir.string().c_str());
  return print_and_check(r, c.check);
}

struct AuditOptions {
  Common common;
  std::string N, stratum, dump;
  std::optional<double> s, theta0;
  std::optional<std::uint64_t> samples, seed;
};

int run_audit(const AuditOptions& o) {
  ExperimentConfig cfg = load(o.common, ExperimentKind::symbol_audit);
  if (!o.N.empty()) cfg.N = parse_threshold(o.N);
  if (o.s) cfg.s = *o.s;
  if (o.theta0) cfg.theta0 = *o.theta0;
  if (o.samples) cfg.audit.samples = *o.samples;
  if (o.seed) cfg.data.seed = *o.seed;
  if (!o.stratum.empty()) {
    try {
      cfg.audit.stratum = parse_stratum(o.stratum);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  IMethodParams p;
  try {
    p = cfg.base_params();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  warn_range(p);

  if (!o.dump.empty()) {
    std::ofstream out(o.dump);
    if (!out) throw ConfigError("cannot write " + o.dump);
    const double top = std::isinf(p.N) ? 64.0 : 8.0 * p.N;
    out << "r,m\r\n";
    char buf[64];
    for (int i = 0; i <= 4000; ++i) {
      const double r = top * i / 4000.0;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\r\n", r, m_eval(r, p));
      out << buf;
    }
  }

  const AuditRun run = run_symbol_audit(cfg);
  if (!cfg.output_dir.empty()) {
    write_audit_run(run, cfg, cfg.output_dir, o.common.force);
    std::fprintf(stderr, "wrote %s\n", cfg.output_dir.c_str());
  }
  std::printf("%s\n", audit_report_json(run).c_str());
  if (o.common.check) {
    const bool ok = std::isfinite(run.report.max_ratio) && run.report.max_ratio <= 10.0;
    std::printf("[%s] lemma ratio max <= 10 (%.6g)\n", ok ? "PASS" : "FAIL", run.report.max_ratio);
    if (!ok) return kCheck;
  }
  return kOk;
}

// Rows "k1x,k1y,k2x,k2y,k3x,k3y,k4x,k4y,re[,im]" in lattice units; unlisted
// tuples carry the value 0.
SymbolEvaluator<4> csv_symbol(const std::string& path, double scale) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  auto table = std::make_shared<std::unordered_map<std::string, cplx>>();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '+'))
      continue;
    std::stringstream ss(line);
    std::vector<double> v;
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 9 && v.size() != 10) throw ConfigError(path + ": expected 9 or 10 columns");
    std::string key;
    for (int j = 0; j < 8; ++j) key += std::to_string(static_cast<long>(std::lround(v[j]))) + ",";
    (*table)[key] = cplx(v[8], v.size() == 10 ? v[9] : 0.0);
  }
  SymbolEvaluator<4> m;
  m.fn = [table, scale](const FrequencyTuple<4>& t) -> cplx {
    std::string key;
    for (const auto& xi : t)
      for (int c = 0; c < 2; ++c) key += std::to_string(static_cast<long>(std::lround(xi[c] / scale))) + ",";
    const auto it = table->find(key);
    return it == table->end() ? cplx(0.0) : it->second;
  };
  return m;
}

struct LambdaOptions {
  std::string symbol, spectrum, csv, N = "8";
  double s = 0.6;
  std::optional<double> theta0;
  int sign = +1;
};

int run_lambda(const LambdaOptions& o) {
  IMethodParams p;
  try {
    p = IMethodParams::make(parse_threshold(o.N), o.s, o.theta0, o.sign);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Spectrum c;
  try {
    c = load_spectrum(o.spectrum);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!c.is_dealiased()) throw ConfigError("spectrum is not dealiased");
  const auto start = std::chrono::steady_clock::now();
  double value = 0.0;
  if (o.symbol == "sigma4") {
    value = eval_lambda4_separable(sigma4_symbol(p), c);
  } else if (o.symbol == "sigma4_tilde") {
    value = lambda4_sigma4_tilde(c, p);
  } else if (o.symbol == "alpha4") {
    value = eval_lambda4_direct(alpha4_symbol(), c);
  } else if (o.symbol == "sigma2") {
    value = eval_lambda2(sigma2_symbol(p), c);
  } else if (o.symbol == "custom-csv") {
    if (o.csv.empty()) throw ConfigError("--symbol custom-csv needs --csv <file>");
    value = eval_lambda4_direct(csv_symbol(o.csv, c.grid().freq_scale()), c);
  } else {
    throw ConfigError("unknown symbol " + o.symbol);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("value = %.17g\nseconds = %.6f\n", value, seconds);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral 2D cubic NLS simulator and I-method laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nlslab::version_string());

  struct Sub {
    const char* name;
    const char* help;
    ExperimentKind kind;
    Common common;
  };
  std::vector<Sub> subs{
      {"simulate", "Evolve seeded data and stream observables", ExperimentKind::simulate, {}},
      {"acl-sweep", "Modified-energy increment against N", ExperimentKind::acl_sweep, {}},
      {"fixed-time-sweep", "Fixed-time gap E(Iu) - E_tilde(u) against N", ExperimentKind::fixed_time_sweep, {}},
      {"theta-sweep", "Resonance threshold sweep at fixed N", ExperimentKind::theta_sweep, {}},
      {"strichartz", "Angularly restricted bilinear estimate against theta", ExperimentKind::strichartz, {}},
  };
  std::vector<CLI::App*> sub_apps;
  for (auto& s : subs) {
    CLI::App* a = app.add_subcommand(s.name, s.help);
    add_common(a, s.common);
    sub_apps.push_back(a);
  }

  AuditOptions audit;
  CLI::App* audit_app = app.add_subcommand("symbol-audit", "Sample the symbol bounds");
  add_common(audit_app, audit.common);
  audit_app->add_option("--N", audit.N, "Multiplier threshold (number or inf)");
  audit_app->add_option("--s", audit.s, "Regularity s in (0, 1)");
  audit_app->add_option("--theta0", audit.theta0, "Resonance threshold (default 1/N)");
  audit_app->add_option("--samples", audit.samples, "Sample count");
  audit_app->add_option("--seed", audit.seed, "Master seed");
  audit_app->add_option("--stratum", audit.stratum, "all | a | b | c");
  audit_app->add_option("--dump-multiplier", audit.dump, "Write the multiplier profile (r, m) as CSV");

  LambdaOptions lam;
  CLI::App* lam_app = app.add_subcommand("lambda-eval", "Evaluate a quartic form on a stored spectrum");
  lam_app->add_option("--symbol", lam.symbol, "sigma2 | sigma4 | sigma4_tilde | alpha4 | custom-csv")->required();
  lam_app->add_option("--spectrum", lam.spectrum, "Binary spectrum file")->required()->check(CLI::ExistingFile);
  lam_app->add_option("--csv", lam.csv, "Symbol table for custom-csv")->check(CLI::ExistingFile);
  lam_app->add_option("--N", lam.N, "Multiplier threshold (number or inf)");
  lam_app->add_option("--s", lam.s, "Regularity s");
  lam_app->add_option("--theta0", lam.theta0, "Resonance threshold (default 1/N)");
  lam_app->add_option("--sign", lam.sign, "+1 defocusing, -1 focusing");

  std::string report_dir;
  bool report_force = false;
  CLI::App* report_app = app.add_subcommand("report", "Render plots and refresh the manifest of a run directory");
  report_app->add_option("dir", report_dir, "Run directory")->required();
  report_app->add_flag("--force", report_force, "Overwrite existing plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (sub_apps[i]->parsed()) return run_sweep(subs[i].common, subs[i].kind);
    if (audit_app->parsed()) return run_audit(audit);
    if (lam_app->parsed()) return run_lambda(lam);
    if (report_app->parsed()) {
      for (const auto& p : emit_report(report_dir, report_force)) std::printf("wrote %s\n", p.string().c_str());
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ReportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
