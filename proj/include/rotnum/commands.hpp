#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotnum/rotation.hpp"

namespace rotnum::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2 };

struct ScanOptions {
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<int> jobs;
};

/// Default worker count: $ROTNUM_JOBS if set and positive, else the number of
/// processors.
int default_jobs();

/// CSV with header E,rho,error_est,n_steps,x_final and a trailing error column
/// only when some row failed. 17 significant digits.
std::string format_csv(const std::vector<ScanRow>& rows);
std::string format_json(const std::vector<ScanRow>& rows, const std::vector<Plateau>& plateaus);

int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err);
int cmd_apdiag(const std::string& config_path, double eps, std::int64_t tau_range,
               std::optional<std::int64_t> window, std::ostream& out, std::ostream& err);
int cmd_oracle_compare(const std::string& config_path, double tol, std::ostream& out,
                       std::ostream& err);
int cmd_decompose_check(const std::string& config_path, double span, std::ostream& out,
                        std::ostream& err);

}  // namespace rotnum::cli
