#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtrace/suites.hpp"

int main(int argc, char** argv) {
  using namespace wtrace;
  CLI::App app{"Verification suites for weighted trace spaces"};

  std::vector<std::string> suites;
  bool pin = false;
  RunConfig cfg;
  std::string format = "json", out_path, baseline_dir;
  app.add_option("--suite", suites, "Suite name, repeatable, or 'all'")->required();
  app.add_flag("--pin-baselines", pin, "Write baselines instead of checking against them");
  app.add_option("--grid-n", cfg.n_samples, "Grid samples N")->check(CLI::PositiveNumber);
  app.add_option("--grid-l", cfg.half_width, "Grid half-width L")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Base seed");
  app.add_option("--family", cfg.family, "Seeded family size")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--baseline-dir", baseline_dir, "Baseline root directory");
  CLI11_PARSE(app, argc, argv);

  if (!baseline_dir.empty()) cfg.baseline_dir = baseline_dir;
  if (suites.size() == 1 && suites[0] == "all") suites = suite_names();

  try {
    std::vector<VerificationReport> reports;
    for (const auto& s : suites) reports.push_back(run_suite(s, cfg, pin ? BaselineMode::pin : BaselineMode::check));
    const ReportFormat fmt = parse_format(format);
    const std::string text = reports.size() == 1 ? emit_report(reports[0], fmt) : emit_reports(reports, fmt);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << text;
      if (!out) throw std::runtime_error("cannot write " + out_path);
    }
    bool pass = true;
    for (const auto& r : reports) pass = pass && r.pass();
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "wtrace: " << e.what() << "\n";
    return 2;
  }
}
