#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/experiments.hpp"

namespace nlslab {

/// Missing, empty, incomplete or protected run directory.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RFC 4180 CSV: header line, CRLF line endings, values printed with %.17g.
std::string table_csv(const Table& table);
Table parse_table_csv(const std::string& name, const std::string& text);

/// Log-log scatter of y against x with the fitted line, as a standalone SVG.
std::string loglog_svg(const Table& table, const std::string& x, const std::string& y,
                       const std::optional<SlopeFit>& fit, const std::string& title);

/// Writes <table>.csv for every table and manifest.json. Refuses to touch a
/// directory that already holds a manifest unless `force`.
std::vector<std::filesystem::path> write_run(const SweepResult& result, const ExperimentConfig& config,
                                             const std::filesystem::path& dir, bool force);

/// Reads a completed run directory, renders the log-log plot of the first
/// table and records it in the manifest. Throws ReportError for an empty or
/// incomplete directory, or when the plot exists and `force` is false.
std::vector<std::filesystem::path> emit_report(const std::filesystem::path& dir, bool force);

std::string audit_report_json(const AuditRun& run);

/// audit.json, histogram.csv and manifest.json.
std::vector<std::filesystem::path> write_audit_run(const AuditRun& run, const ExperimentConfig& config,
                                                   const std::filesystem::path& dir, bool force);

}  // namespace nlslab
