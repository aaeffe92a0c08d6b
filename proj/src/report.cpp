#include "wtrace/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wtrace {

using nlohmann::json;

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "L=" << format_double(half_width) << ";N=" << n_samples << ";K=" << max_block << ";Q=" << nodes_per_cell
     << ";interp=" << format_double(interp.sigma_min) << "," << format_double(interp.sigma_max) << ","
     << interp.nodes_per_decade << ";seed=" << seed << ";family=" << family;
  return os.str();
}

json RunConfig::to_json() const {
  return {{"L", half_width},
          {"N", n_samples},
          {"K", max_block},
          {"Q", nodes_per_cell},
          {"interp", {{"sigma_min", interp.sigma_min}, {"sigma_max", interp.sigma_max},
                      {"nodes_per_decade", interp.nodes_per_decade}}},
          {"seed", seed},
          {"family", family}};
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : cfg.canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* to_string(BaselineRule r) {
  switch (r) {
    case BaselineRule::none: return "none";
    case BaselineRule::max: return "max";
    case BaselineRule::window: return "window";
  }
  return "?";
}

bool VerificationReport::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseRecord& c) { return c.pass; });
}

void VerificationReport::sort_cases() {
  std::stable_sort(cases.begin(), cases.end(),
                   [](const CaseRecord& a, const CaseRecord& b) { return a.case_id < b.case_id; });
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown format: " + s);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no infinities; those go out as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string csv_rows(const VerificationReport& r) {
  std::string out;
  for (const auto& c : r.cases) {
    out += csv_field(r.suite) + "," + csv_field(c.case_id) + "," + format_double(c.value) + "," +
           (c.bound ? format_double(*c.bound) : std::string()) + "," + (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

const char* kCsvHeader = "suite,case_id,value,bound,pass\n";

}  // namespace

json report_json(const VerificationReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json j = {{"case_id", c.case_id}, {"value", number(c.value)}, {"pass", c.pass}, {"rule", to_string(c.rule)}};
    j["bound"] = c.bound ? number(*c.bound) : json(nullptr);
    j["pinned"] = c.pinned ? number(*c.pinned) : json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    cases.push_back(std::move(j));
  }
  json out = {{"suite", r.suite}, {"config_hash", r.config_hash}, {"config", r.config},
              {"cases", std::move(cases)}, {"pass", r.pass()}};
  if (!r.baseline_path.empty())
    out["baseline"] = {{"path", r.baseline_path},
                       {"created", r.baseline_created},
                       {"mode", r.mode == BaselineMode::pin ? "pin" : "check"},
                       {"tolerance", kBaselineTolerance}};
  return out;
}

std::string emit_report(const VerificationReport& r, ReportFormat fmt) {
  if (fmt == ReportFormat::json) return report_json(r).dump(2) + "\n";
  return kCsvHeader + csv_rows(r);
}

std::string emit_reports(const std::vector<VerificationReport>& rs, ReportFormat fmt) {
  if (fmt == ReportFormat::csv) {
    std::string out = kCsvHeader;
    for (const auto& r : rs) out += csv_rows(r);
    return out;
  }
  json arr = json::array();
  bool pass = true;
  for (const auto& r : rs) {
    arr.push_back(report_json(r));
    pass = pass && r.pass();
  }
  return json{{"pass", pass}, {"reports", std::move(arr)}}.dump(2) + "\n";
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void judge(CaseRecord& c) {
  if (!c.pinned) {
    c.pass = false;
    c.note += c.note.empty() ? "no pinned value" : "; no pinned value";
    return;
  }
  const double p = *c.pinned;
  if (c.rule == BaselineRule::max) {
    c.bound = p * (1.0 + kBaselineTolerance);
    c.pass = c.pass && c.value <= *c.bound;
  } else {
    c.bound = p;
    c.pass = c.pass && std::abs(c.value / p - 1.0) <= kBaselineTolerance;
  }
}

}  // namespace

void apply_baselines(VerificationReport& r, const RunConfig& cfg, BaselineMode mode) {
  r.mode = mode;
  const bool any = std::any_of(r.cases.begin(), r.cases.end(),
                               [](const CaseRecord& c) { return c.rule != BaselineRule::none; });
  if (!any) return;
  const std::filesystem::path file = cfg.baseline_dir / r.config_hash / (r.suite + ".json");
  r.baseline_path = (std::filesystem::path(r.config_hash) / (r.suite + ".json")).string();

  if (mode == BaselineMode::pin) {
    json values = json::object();
    for (auto& c : r.cases) {
      if (c.rule == BaselineRule::none) continue;
      values[c.case_id] = c.value;
      c.pinned = c.value;
      judge(c);
    }
    r.baseline_created = utc_now();
    json doc = {{"suite", r.suite}, {"config_hash", r.config_hash}, {"config", r.config},
                {"created", r.baseline_created}, {"values", values}};
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write baseline " + file.string());
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing baseline " + file.string());
    return;
  }

  std::ifstream in(file);
  if (!in) throw std::runtime_error("missing baseline: " + file.string());
  const json doc = json::parse(in);
  r.baseline_created = doc.value("created", "");
  const json& values = doc.at("values");
  for (auto& c : r.cases) {
    if (c.rule == BaselineRule::none) continue;
    if (auto it = values.find(c.case_id); it != values.end() && it->is_number()) c.pinned = it->get<double>();
    judge(c);
  }
}

}  // namespace wtrace
