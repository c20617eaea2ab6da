// Command-line front end: scan, apdiag, oracle-compare, decompose-check.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rotnum/commands.hpp"

int main(int argc, char** argv) {
  using namespace rotnum::cli;

  CLI::App app{"Rotation numbers of 1-D Schrodinger operators with almost periodic potentials "
               "and delta interactions"};
  app.require_subcommand(1);

  ScanOptions scan_opts;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<int> jobs;
  auto* scan = app.add_subcommand("scan", "rotation number over an energy grid");
  scan->add_option("--config", scan_opts.config_path, "JSON run configuration")->required();
  scan->add_option("--out", out_path, "output file (default: stdout)");
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--jobs", jobs, "worker threads (default: $ROTNUM_JOBS or #cpus)");

  std::string ap_config;
  double eps = 0.0;
  std::int64_t range = 0;
  std::optional<std::int64_t> window;
  auto* apdiag = app.add_subcommand("apdiag", "epsilon-periods, density and mean values");
  apdiag->add_option("--config", ap_config, "JSON run configuration")->required();
  apdiag->add_option("--eps", eps, "entourage radius epsilon > 0")->required();
  apdiag->add_option("--range", range, "search shifts in [-N, N]")->required();
  apdiag->add_option("--window", window, "truncation window (default: diagnostics.window)");

  std::string oc_config;
  double tol = 1e-3;
  auto* oracle = app.add_subcommand("oracle-compare", "compare estimates with exact references");
  oracle->add_option("--config", oc_config, "JSON run configuration")->required();
  oracle->add_option("--tol", tol, "maximum allowed deviation")->capture_default_str();

  std::string dc_config;
  double span = 0.0;
  auto* decompose = app.add_subcommand("decompose-check", "mean-value decomposition check");
  decompose->add_option("--config", dc_config, "JSON run configuration")->required();
  decompose->add_option("--span", span, "averaging interval [0, span)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*scan) {
    scan_opts.out_path = out_path;
    scan_opts.format = format;
    scan_opts.jobs = jobs;
    return cmd_scan(scan_opts, std::cout, std::cerr);
  }
  if (*apdiag) return cmd_apdiag(ap_config, eps, range, window, std::cout, std::cerr);
  if (*oracle) return cmd_oracle_compare(oc_config, tol, std::cout, std::cerr);
  return cmd_decompose_check(dc_config, span, std::cout, std::cerr);
}
