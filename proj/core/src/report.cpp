#include "nlslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlslab/config.hpp"

namespace nlslab {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kManifest = "manifest.json";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ReportError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ReportError("cannot write " + p.string());
  out << bytes;
  if (!out) throw ReportError("write failed for " + p.string());
}

void prepare_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ReportError("cannot create " + dir.string() + ": " + ec.message());
  if (fs::exists(dir / kManifest) && !force)
    throw ReportError(dir.string() + " already holds a run; pass --force to overwrite");
}

json fit_json(const std::optional<SlopeFit>& fit) {
  if (!fit) return nullptr;
  return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"residual", fit->residual}, {"points", fit->points}};
}

std::vector<std::uint64_t> seeds_of(const ExperimentConfig& c) {
  if (c.kind == ExperimentKind::simulate || c.kind == ExperimentKind::strichartz ||
      c.kind == ExperimentKind::symbol_audit)
    return {c.data.seed};
  return c.seeds;
}

json base_manifest(const ExperimentConfig& config, const Provenance& prov) {
  json m;
  m["tool"] = "nlslab";
  m["version"] = prov.version;
  m["experiment"] = to_string(config.kind);
  m["config"] = json::parse(config_to_json(config));
  m["config_hash"] = prov.config_hash;
  m["master_seed"] = prov.seed;
  m["seeds"] = seeds_of(config);
  return m;
}

}  // namespace

std::string table_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) out += (j ? "," : "") + csv_field(table.columns[j]);
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + g17(row[j]);
    out += "\r\n";
  }
  return out;
}

Table parse_table_csv(const std::string& name, const std::string& text) {
  Table t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    if (header) {
      t.columns = cells;
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw ReportError(name + ".csv: ragged row");
    std::vector<double> row;
    for (const auto& s : cells) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str()) throw ReportError(name + ".csv: non-numeric cell \"" + s + "\"");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (header) throw ReportError(name + ".csv: empty table");
  return t;
}

std::string loglog_svg(const Table& table, const std::string& x, const std::string& y,
                       const std::optional<SlopeFit>& fit, const std::string& title) {
  const auto xs = table.column(x), ys = table.column(y);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i]))
      pts.push_back({std::log10(xs[i]), std::log10(ys[i])});

  constexpr double W = 640, H = 420, ml = 90, mr = 30, mt = 50, mb = 60;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto& [a, b] : pts) {
      x0 = std::min(x0, a);
      x1 = std::max(x1, a);
      y0 = std::min(y0, b);
      y1 = std::max(y1, b);
    }
  }
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    if (span <= 0.0) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      lo -= 0.08 * span;
      hi += 0.08 * span;
    }
  };
  pad(x0, x1);
  pad(y0, y1);
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };

  // Decade ticks, with 2 and 5 added when fewer than two decades are visible.
  auto ticks = [](double lo, double hi) {
    std::vector<double> out;
    const bool fine = std::floor(hi) - std::ceil(lo) < 1.0;
    for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi)); ++e)
      for (double m : fine ? std::vector<double>{1, 2, 5} : std::vector<double>{1}) {
        const double v = e + std::log10(m);
        if (v >= lo && v <= hi) out.push_back(v);
      }
    return out;
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
    << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x0, x1)) {
    s << "<line x1=\"" << px(t) << "\" y1=\"" << H - mb << "\" x2=\"" << px(t) << "\" y2=\"" << mt
      << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << px(t) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">" << g6(std::pow(10.0, t))
      << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    s << "<line x1=\"" << ml << "\" y1=\"" << py(t) << "\" x2=\"" << W - mr << "\" y2=\"" << py(t)
      << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << ml - 6 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << g6(std::pow(10.0, t))
      << "</text>\n";
  }
  s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << xml_escape(x)
    << "</text>\n";
  s << "<text x=\"18\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (mt + H - mb) / 2 << ")\">" << xml_escape(y) << "</text>\n";
  if (fit && !pts.empty()) {
    const double a = x0, b = x1;
    s << "<line x1=\"" << px(a) << "\" y1=\"" << py(fit->intercept + fit->slope * a) << "\" x2=\"" << px(b)
      << "\" y2=\"" << py(fit->intercept + fit->slope * b)
      << "\" stroke=\"#c03\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" clip-path=\"url(#plot)\"/>\n";
    s << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18 << "\" text-anchor=\"end\" fill=\"#c03\">slope "
      << g6(fit->slope) << ", residual " << g6(fit->residual) << "</text>\n";
  }
  s << "<clipPath id=\"plot\"><rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
    << H - mt - mb << "\"/></clipPath>\n";
  for (const auto& [a, b] : pts)
    s << "<circle cx=\"" << px(a) << "\" cy=\"" << py(b) << "\" r=\"4\" fill=\"#036\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<fs::path> write_run(const SweepResult& result, const ExperimentConfig& config, const fs::path& dir,
                                bool force) {
  prepare_dir(dir, force);
  std::vector<fs::path> written;
  json m = base_manifest(config, result.provenance);
  m["wall_seconds"] = result.wall_seconds;
  json tables = json::array();
  for (const auto& t : result.tables) {
    const std::string bytes = table_csv(t);
    const fs::path p = dir / (t.name + ".csv");
    write_file(p, bytes);
    written.push_back(p);
    tables.push_back({{"name", t.name}, {"file", p.filename().string()}, {"rows", t.rows.size()},
                      {"fnv1a", fnv1a_hex(bytes)}});
  }
  m["tables"] = tables;
  m["fit"] = {{"x", result.x_column}, {"y", result.y_column}, {"result", fit_json(result.fit)}};
  json scalars = json::object();
  for (const auto& s : result.scalars) scalars[s.name] = s.value;
  m["scalars"] = scalars;
  m["warnings"] = result.warnings;
  json checks = json::array();
  for (const auto& c : evaluate_checks(result))
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  m["checks"] = checks;
  m["plots"] = json::array();
  write_file(dir / kManifest, m.dump(2) + "\n");
  written.push_back(dir / kManifest);
  return written;
}

std::vector<fs::path> emit_report(const fs::path& dir, bool force) {
  if (!fs::is_directory(dir)) throw ReportError(dir.string() + " is not a directory");
  if (fs::is_empty(dir)) throw ReportError(dir.string() + " is empty");
  if (!fs::exists(dir / kManifest)) throw ReportError(dir.string() + " has no manifest.json; not a completed run");
  json m;
  try {
    m = json::parse(read_file(dir / kManifest));
  } catch (const json::exception& e) {
    throw ReportError(std::string("manifest.json: ") + e.what());
  }
  if (!m.contains("tables") || !m["tables"].is_array())
    throw ReportError("manifest.json lists no tables; the run is incomplete");

  std::vector<Table> tables;
  for (const auto& entry : m["tables"]) {
    const fs::path p = dir / entry.at("file").get<std::string>();
    if (!fs::exists(p)) throw ReportError("incomplete run: missing " + p.filename().string());
    const std::string bytes = read_file(p);
    if (fnv1a_hex(bytes) != entry.at("fnv1a").get<std::string>())
      throw ReportError(p.filename().string() + " does not match its manifest hash");
    tables.push_back(parse_table_csv(entry.at("name").get<std::string>(), bytes));
  }

  std::vector<fs::path> written;
  json plots = json::array();
  const json& fit = m.contains("fit") ? m["fit"] : json();
  const std::string x = fit.is_object() ? fit.value("x", "") : "";
  const std::string y = fit.is_object() ? fit.value("y", "") : "";
  if (!tables.empty() && !x.empty() && !y.empty()) {
    const fs::path p = dir / (tables.front().name + ".svg");
    if (fs::exists(p) && !force) throw ReportError(p.string() + " exists; pass --force to overwrite");
    std::optional<SlopeFit> f;
    if (fit.contains("result") && fit["result"].is_object()) {
      const json& r = fit["result"];
      f = SlopeFit{r.at("slope").get<double>(), r.at("intercept").get<double>(), r.at("residual").get<double>(),
                   r.at("points").get<std::size_t>()};
    }
    write_file(p, loglog_svg(tables.front(), x, y, f, m.value("experiment", "") + ": " + y + " vs " + x));
    written.push_back(p);
    plots.push_back(p.filename().string());
  }
  m["plots"] = plots;
  write_file(dir / kManifest, m.dump(2) + "\n");
  written.push_back(dir / kManifest);
  return written;
}

std::string audit_report_json(const AuditRun& run) {
  const auto& r = run.report;
  auto tuple = [](const FrequencyTuple<4>& t) {
    json a = json::array();
    for (const auto& v : t) a.push_back({v[0], v[1]});
    return a;
  };
  json j;
  j["params"] = json::parse(params_to_json(run.config.params));
  j["seed"] = run.config.seed;
  j["stratum"] = to_string(run.config.stratum);
  j["samples"] = r.samples;
  j["max_ratio"] = r.max_ratio;
  j["argmax_tuple"] = tuple(r.argmax_tuple);
  j["max_corollary_ratio"] = r.max_corollary_ratio;
  j["corollary_argmax_tuple"] = tuple(r.corollary_argmax_tuple);
  json strata = json::object();
  const char* names[3] = {"a", "b", "c"};
  for (int k = 0; k < 3; ++k)
    strata[names[k]] = {{"samples", r.stratum_samples[k]}, {"max_ratio", r.stratum_max_ratio[k]}};
  j["strata"] = strata;
  j["config_hash"] = run.provenance.config_hash;
  j["version"] = run.provenance.version;
  return j.dump(2);
}

std::vector<fs::path> write_audit_run(const AuditRun& run, const ExperimentConfig& config, const fs::path& dir,
                                      bool force) {
  prepare_dir(dir, force);
  std::vector<fs::path> written;
  write_file(dir / "audit.json", audit_report_json(run) + "\n");
  written.push_back(dir / "audit.json");

  Table h;
  h.name = "histogram";
  h.columns = {"ratio_lo", "ratio_hi", "count"};
  for (const auto& row : run.report.histogram) h.rows.push_back({row.lo, row.hi, static_cast<double>(row.count)});
  const std::string bytes = table_csv(h);
  write_file(dir / "histogram.csv", bytes);
  written.push_back(dir / "histogram.csv");

  json m = base_manifest(config, run.provenance);
  m["tables"] = json::array({{{"name", h.name}, {"file", "histogram.csv"}, {"rows", h.rows.size()},
                              {"fnv1a", fnv1a_hex(bytes)}}});
  m["plots"] = json::array();
  write_file(dir / kManifest, m.dump(2) + "\n");
  written.push_back(dir / kManifest);
  return written;
}

}  // namespace nlslab
