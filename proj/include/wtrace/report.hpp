#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtrace/operators.hpp"

#ifndef WTRACE_BASELINE_DIR
#define WTRACE_BASELINE_DIR "baselines"
#endif

namespace wtrace {

struct RunConfig {
  double half_width = 1.0;
  int n_samples = 1024;
  int max_block = 8;
  int nodes_per_cell = kDefaultNodesPerCell;
  InterpQuadSpec interp{};
  std::uint64_t seed = 1;
  int family = 50;
  std::filesystem::path baseline_dir = WTRACE_BASELINE_DIR;

  // Canonical description of everything that changes numbers (not the baseline dir).
  std::string canonical() const;
  nlohmann::json to_json() const;
};

// FNV-1a 64 of the canonical description, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

enum class BaselineRule {
  none,    // informational
  max,     // value <= pinned * (1 + tol)
  window,  // |value / pinned - 1| <= tol
};
const char* to_string(BaselineRule r);
inline constexpr double kBaselineTolerance = 0.01;

struct CaseRecord {
  std::string case_id;
  double value = 0.0;
  std::optional<double> bound;  // fixed bound, or filled from the baseline
  bool pass = true;
  BaselineRule rule = BaselineRule::none;
  std::optional<double> pinned;
  std::string note;
};

enum class BaselineMode { check, pin };

struct VerificationReport {
  std::string suite;
  std::string config_hash;
  nlohmann::json config;
  std::vector<CaseRecord> cases;
  std::string baseline_path;     // empty when the suite has no baselined case
  std::string baseline_created;  // timestamp stored with the pinned values
  BaselineMode mode = BaselineMode::check;

  bool pass() const;
  void sort_cases();
};

enum class ReportFormat { json, csv };
ReportFormat parse_format(const std::string& s);

nlohmann::json report_json(const VerificationReport& r);
std::string emit_report(const VerificationReport& r, ReportFormat fmt);
// Several reports: {"pass": ..., "reports": [...]} or one CSV with a single header.
std::string emit_reports(const std::vector<VerificationReport>& rs, ReportFormat fmt);

// Shortest round-trip decimal.
std::string format_double(double v);

// Applies pinned values to the baselined cases. Check mode reads and never writes;
// pin mode writes <dir>/<hash>/<suite>.json. Throws "missing baseline" in check mode.
void apply_baselines(VerificationReport& r, const RunConfig& cfg, BaselineMode mode);

}  // namespace wtrace
