#include "rotnum/rotation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "rotnum/apdiag.hpp"
#include "rotnum/errors.hpp"

namespace rotnum {

namespace {

void check_horizon(std::int64_t n_steps) {
  if (n_steps < 2 || n_steps % 2 != 0) {
    throw PreconditionError("rotation estimates need an even n_steps >= 2");
  }
}

ScanRow run_row(const GeneralizedPotential& p, double e, double xi, std::int64_t n_steps,
                const IntegratorConfig& cfg) {
  ScanRow row;
  row.energy = e;
  row.n_steps = n_steps;
  try {
    const RotationEstimate est = estimate_rho(p, e, xi, n_steps, cfg);
    row.rho = est.rho;
    row.error_est = est.error_est;
    row.x_final = est.x_final;
  } catch (const std::exception& err) {
    row.rho = std::nan("");
    row.error_est = std::nan("");
    row.x_final = std::nan("");
    row.error = err.what();
  }
  return row;
}

}  // namespace

RotationEstimate estimate_rho(const GeneralizedPotential& p, double e, double xi,
                              std::int64_t n_steps, const IntegratorConfig& cfg) {
  check_horizon(n_steps);
  const std::int64_t half = n_steps / 2;
  double theta = xi;
  double theta_half = xi;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    theta = step_lattice(p, e, theta, n, cfg);
    if (n + 1 == half) theta_half = theta;
  }
  const double x_half = p.gamma().x(half);
  const double x_final = p.gamma().x(n_steps);

  RotationEstimate est;
  est.energy = e;
  est.n_steps = n_steps;
  est.x_final = x_final;
  est.rho = (theta - xi) / x_final;
  est.error_est = std::abs(est.rho - (theta_half - xi) / x_half);
  return est;
}

RotationEstimate estimate_rho_birkhoff(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n_steps, const IntegratorConfig& cfg) {
  check_horizon(n_steps);
  const std::int64_t half = n_steps / 2;
  double vartheta = reduce_angle(xi);
  double total = 0.0;
  double total_half = 0.0;
  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double f = observable_F(p.shifted(k), e, vartheta, cfg);
    total += f;
    vartheta = reduce_angle(vartheta + f);
    if (k + 1 == half) total_half = total;
  }
  RotationEstimate est;
  est.energy = e;
  est.n_steps = n_steps;
  est.x_final = p.gamma().x(n_steps);
  est.rho = density(p.gamma(), n_steps) * total / static_cast<double>(n_steps);
  const double rho_half = density(p.gamma(), half) * total_half / static_cast<double>(half);
  est.error_est = std::abs(est.rho - rho_half);
  return est;
}

std::vector<double> energy_grid(double e_min, double e_max, double e_step) {
  if (!(e_min < e_max)) throw PreconditionError("energy grid needs e_min < e_max");
  if (!(e_step > 0.0)) throw PreconditionError("energy grid needs e_step > 0");
  const auto count = static_cast<std::int64_t>(std::floor((e_max - e_min) / e_step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) grid.push_back(e_min + static_cast<double>(i) * e_step);
  return grid;
}

std::vector<ScanRow> scan(const GeneralizedPotential& p, std::vector<double> energies, double xi,
                          std::int64_t n_steps, const IntegratorConfig& cfg, int jobs) {
  check_horizon(n_steps);
  std::stable_sort(energies.begin(), energies.end());
  std::vector<ScanRow> rows(energies.size());
  const auto count = static_cast<std::int64_t>(energies.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows[k] = run_row(p, energies[k], xi, n_steps, cfg);
  }
  return rows;
}

std::vector<ScanRow> scan(const GeneralizedPotential& p, double e_min, double e_max,
                          double e_step, double xi, std::int64_t n_steps,
                          const IntegratorConfig& cfg, int jobs) {
  return scan(p, energy_grid(e_min, e_max, e_step), xi, n_steps, cfg, jobs);
}

std::vector<ScanRow> scan_serial(const GeneralizedPotential& p, std::vector<double> energies,
                                 double xi, std::int64_t n_steps, const IntegratorConfig& cfg) {
  check_horizon(n_steps);
  std::stable_sort(energies.begin(), energies.end());
  std::vector<ScanRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) rows.push_back(run_row(p, e, xi, n_steps, cfg));
  return rows;
}

std::vector<Plateau> detect_plateaus(const std::vector<ScanRow>& rows, double flat_tol,
                                     std::size_t min_width) {
  std::vector<Plateau> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    if (rows[i].error) {
      ++i;
      continue;
    }
    double lo = rows[i].rho;
    double hi = rows[i].rho;
    double sum = rows[i].rho;
    std::size_t j = i + 1;
    for (; j < rows.size() && !rows[j].error; ++j) {
      const double r = rows[j].rho;
      if (std::max(hi, r) - std::min(lo, r) > flat_tol) break;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
    }
    const std::size_t width = j - i;
    if (width >= std::max<std::size_t>(min_width, 1)) {
      out.push_back({rows[i].energy, rows[j - 1].energy, sum / static_cast<double>(width), width});
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace rotnum
