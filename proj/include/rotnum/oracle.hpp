#pragma once

#include <cstdint>
#include <vector>

#include "rotnum/potential.hpp"
#include "rotnum/prufer.hpp"

namespace rotnum::oracle {

/// A configuration invariant under the lattice shift by `lattice_period`.
struct PeriodicSpec {
  GeneralizedPotential potential;
  std::int64_t lattice_period = 1;

  double spatial_period() const { return potential.gamma().x(lattice_period); }
};

/// sqrt(e - q0) above the potential, 0 otherwise.
double closed_form_rho_constant(double q0, double e);

/// Trace of jump_matrix(v) * exact_propagator_constant(0, e, length).
double kp_discriminant(double e, double length, double v);

/// One-period lift g(Ξ) = θ(x_p; Ξ) on Ξ_j = 2πj/grid_size. OpenMP over j.
std::vector<double> tabulate_period_map(const PeriodicSpec& spec, double e, int grid_size,
                                        const IntegratorConfig& cfg, int jobs = 0);

std::vector<double> tabulate_period_map_serial(const PeriodicSpec& spec, double e,
                                               int grid_size, const IntegratorConfig& cfg);

/// Rotation number of the piecewise-linear interpolant of a tabulated lift,
/// iterated from xi0, divided by `spatial_period`. Throws NumericError when the
/// table is not strictly increasing.
double interpolated_rotation(const std::vector<double>& table, double spatial_period,
                             std::int64_t iterations, double xi0 = 0.0);

inline constexpr int kMaxCircleGrid = 1 << 14;

/// Rotation number via the one-period circle map. The grid starts at
/// grid_size and doubles until successive results differ by less than
/// 1e-6 + 4π/(iterations·L), up to kMaxCircleGrid points.
double circle_map_rho(const PeriodicSpec& spec, double e, int grid_size,
                      std::int64_t iterations, const IntegratorConfig& cfg, double xi0 = 0.0,
                      int jobs = 0);

/// Lattice angles from closed-form propagators on each gap (q must be constant
/// on gaps). The lift is tracked by sampling each gap until every
/// sample-to-sample change is below π/2; throws NumericError if 2^14 samples
/// per gap are not enough.
AngleTrajectory exact_piecewise_evolve(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n_steps);

}  // namespace rotnum::oracle
