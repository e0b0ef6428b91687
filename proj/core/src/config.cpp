#include "nlslab/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nlslab {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void read_optional(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(obj, key, v, where);
  out = v;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// N may be "inf" (m identically 1).
void read_threshold(const json& obj, const char* key, double& out, const std::string& where) {
  if (obj.contains(key) && obj.at(key).is_string()) {
    if (obj.at(key).get<std::string>() != "inf") throw ConfigError(where + "." + key + ": expected a number or \"inf\"");
    out = std::numeric_limits<double>::infinity();
    return;
  }
  read(obj, key, out, where);
}

json threshold_json(double N) { return std::isinf(N) ? json("inf") : json(N); }

std::string integrator_name(Integrator i) { return i == Integrator::ifrk4 ? "ifrk4" : "strang"; }

Integrator parse_integrator(const std::string& name) {
  if (name == "ifrk4") return Integrator::ifrk4;
  if (name == "strang") return Integrator::strang;
  throw ConfigError("solver.integrator: unknown integrator \"" + name + "\"");
}

json to_json(const ExperimentConfig& c, bool with_output) {
  json j;
  j["config_version"] = kConfigVersion;
  j["experiment"] = to_string(c.kind);
  j["grid"] = {{"M", c.modes}, {"L", c.length}, {"K", optional_json(c.cutoff)}};
  j["params"] = {{"N", threshold_json(c.N)}, {"s", c.s}, {"theta0", optional_json(c.theta0)}, {"sign", c.sign}};
  j["sweep"] = {{"N", c.N_list}, {"theta0", c.theta0_list}};
  j["seeds"] = c.seeds;
  j["data"] = {{"seed", c.data.seed},
               {"amplitude", optional_json(c.data.amplitude)},
               {"decay", c.data.decay},
               {"energy_target", c.data.energy_target},
               {"mass_bound", c.data.mass_bound}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"t0", c.solver.t0},
                 {"integrator", integrator_name(c.solver.integrator)},
                 {"observer_samples", c.solver.observer_samples},
                 {"nonlinearity", c.solver.nonlinearity}};
  const auto& st = c.strichartz;
  j["strichartz"] = {{"N1", st.N1},
                     {"N2", st.N2},
                     {"theta", st.thetas},
                     {"panels", st.panels},
                     {"tolerance", st.tolerance},
                     {"mc_samples", st.mc_samples},
                     {"mc_epsilon", st.mc_epsilon},
                     {"mc_theta", st.mc_theta}};
  j["audit"] = {{"samples", c.audit.samples}, {"stratum", to_string(c.audit.stratum)}};
  j["simulate"] = {{"observe_every", c.simulate.observe_every}, {"e_tilde", c.simulate.e_tilde}};
  if (with_output) j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig from_json(const json& j, std::optional<ExperimentKind> kind_override) {
  reject_unknown(j, "config",
                 {"config_version", "experiment", "grid", "params", "sweep", "seeds", "data", "solver", "strichartz",
                  "audit", "simulate", "output_dir"});
  if (!j.contains("config_version")) throw ConfigError("config: missing \"config_version\"");
  int version = 0;
  read(j, "config_version", version, "config");
  if (version != kConfigVersion)
    throw ConfigError("config: unsupported config_version " + std::to_string(version));

  ExperimentConfig c;
  if (j.contains("experiment")) {
    std::string kind;
    read(j, "experiment", kind, "config");
    try {
      c.kind = parse_experiment_kind(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"M", "L", "K"});
    read(g, "M", c.modes, "grid");
    read(g, "L", c.length, "grid");
    read_optional(g, "K", c.cutoff, "grid");
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, "params", {"N", "s", "theta0", "sign"});
    read_threshold(p, "N", c.N, "params");
    read(p, "s", c.s, "params");
    read_optional(p, "theta0", c.theta0, "params");
    read(p, "sign", c.sign, "params");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, "sweep", {"N", "theta0"});
    read(s, "N", c.N_list, "sweep");
    read(s, "theta0", c.theta0_list, "sweep");
  }
  read(j, "seeds", c.seeds, "config");
  if (j.contains("data")) {
    const json& d = j["data"];
    reject_unknown(d, "data", {"seed", "amplitude", "decay", "energy_target", "mass_bound"});
    read(d, "seed", c.data.seed, "data");
    read_optional(d, "amplitude", c.data.amplitude, "data");
    read(d, "decay", c.data.decay, "data");
    read(d, "energy_target", c.data.energy_target, "data");
    read(d, "mass_bound", c.data.mass_bound, "data");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, "solver", {"dt", "t0", "integrator", "observer_samples", "nonlinearity"});
    read(s, "dt", c.solver.dt, "solver");
    read(s, "t0", c.solver.t0, "solver");
    if (s.contains("integrator")) {
      std::string name;
      read(s, "integrator", name, "solver");
      c.solver.integrator = parse_integrator(name);
    }
    read(s, "observer_samples", c.solver.observer_samples, "solver");
    read(s, "nonlinearity", c.solver.nonlinearity, "solver");
  }
  if (j.contains("strichartz")) {
    const json& s = j["strichartz"];
    reject_unknown(s, "strichartz",
                   {"N1", "N2", "theta", "panels", "tolerance", "mc_samples", "mc_epsilon", "mc_theta"});
    auto& st = c.strichartz;
    read(s, "N1", st.N1, "strichartz");
    read(s, "N2", st.N2, "strichartz");
    read(s, "theta", st.thetas, "strichartz");
    read(s, "panels", st.panels, "strichartz");
    read(s, "tolerance", st.tolerance, "strichartz");
    read(s, "mc_samples", st.mc_samples, "strichartz");
    read(s, "mc_epsilon", st.mc_epsilon, "strichartz");
    read(s, "mc_theta", st.mc_theta, "strichartz");
  }
  if (j.contains("audit")) {
    const json& a = j["audit"];
    reject_unknown(a, "audit", {"samples", "stratum"});
    read(a, "samples", c.audit.samples, "audit");
    if (a.contains("stratum")) {
      std::string name;
      read(a, "stratum", name, "audit");
      try {
        c.audit.stratum = parse_stratum(name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("audit.stratum: ") + e.what());
      }
    }
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    reject_unknown(s, "simulate", {"observe_every", "e_tilde"});
    read(s, "observe_every", c.simulate.observe_every, "simulate");
    read(s, "e_tilde", c.simulate.e_tilde, "simulate");
  }
  read(j, "output_dir", c.output_dir, "config");
  if (kind_override) c.kind = *kind_override;

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, std::optional<ExperimentKind> kind) {
  return from_json(parse_text(json_text), kind);
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), kind);
}

std::string config_to_json(const ExperimentConfig& config, int indent) { return to_json(config, true).dump(indent); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& config) { return fnv1a_hex(to_json(config, false).dump()); }

std::string params_to_json(const IMethodParams& p) {
  json j = {{"N", threshold_json(p.N)}, {"s", p.s}, {"theta0", p.theta0}, {"sign", p.sign}};
  return j.dump();
}

IMethodParams params_from_json(const std::string& json_text) {
  const json j = parse_text(json_text);
  reject_unknown(j, "params", {"N", "s", "theta0", "sign"});
  double N = 8.0, s = 0.6;
  std::optional<double> theta0;
  int sign = +1;
  read_threshold(j, "N", N, "params");
  read(j, "s", s, "params");
  read_optional(j, "theta0", theta0, "params");
  read(j, "sign", sign, "params");
  try {
    return IMethodParams::make(N, s, theta0, sign);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace nlslab
