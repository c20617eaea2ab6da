#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotnum/potential.hpp"
#include "rotnum/prufer.hpp"

namespace rotnum {

/// Finite-horizon rotation number, in radians per unit length.
///
/// error_est = |rho(N) - rho(N/2)|. It is a heuristic: the limit has no
/// known convergence rate in general.
struct RotationEstimate {
  double energy = 0.0;
  double rho = 0.0;
  double error_est = 0.0;
  std::int64_t n_steps = 0;
  double x_final = 0.0;
};

/// rho = (θ(x_N) - Ξ) / x_N, N = n_steps (even, >= 2).
RotationEstimate estimate_rho(const GeneralizedPotential& p, double e, double xi,
                              std::int64_t n_steps, const IntegratorConfig& cfg);

/// rho = [Γ] (1/N) sum_{k<N} F_E(Φ^k(p, ϑ)), driving the skew product with
/// shifted potentials and reduced angles.
RotationEstimate estimate_rho_birkhoff(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n_steps, const IntegratorConfig& cfg);

struct ScanRow {
  double energy = 0.0;
  double rho = 0.0;
  double error_est = 0.0;
  std::int64_t n_steps = 0;
  double x_final = 0.0;
  std::optional<std::string> error;
};

/// e_min, e_min + step, ... up to e_max (inclusive within round-off).
std::vector<double> energy_grid(double e_min, double e_max, double e_step);

/// One row per energy, sorted by energy. Rows run on an OpenMP team of `jobs`
/// threads (0 means omp default); each row is independent, so the output is
/// bit-identical to scan_serial.
std::vector<ScanRow> scan(const GeneralizedPotential& p, std::vector<double> energies, double xi,
                          std::int64_t n_steps, const IntegratorConfig& cfg, int jobs = 0);

std::vector<ScanRow> scan(const GeneralizedPotential& p, double e_min, double e_max,
                          double e_step, double xi, std::int64_t n_steps,
                          const IntegratorConfig& cfg, int jobs = 0);

std::vector<ScanRow> scan_serial(const GeneralizedPotential& p, std::vector<double> energies,
                                 double xi, std::int64_t n_steps, const IntegratorConfig& cfg);

struct Plateau {
  double e_lo = 0.0;
  double e_hi = 0.0;
  double rho = 0.0;
  std::size_t width = 0;
};

/// Maximal runs of >= min_width consecutive successful rows whose rho values
/// span <= flat_tol; rho is the run mean. A failed row breaks a run.
std::vector<Plateau> detect_plateaus(const std::vector<ScanRow>& rows, double flat_tol = 1e-3,
                                     std::size_t min_width = 5);

}  // namespace rotnum
