#pragma once

#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "rotnum/potential.hpp"

namespace rotnum {

struct IntegratorConfig {
  double h_max = 0.02;
  /// A RK4 step whose angle increment exceeds this is split in two.
  double substep_angle_cap = std::numbers::pi / 4;
  bool record_lattice = true;

  /// h_max = min_gap / 50.
  static IntegratorConfig for_lattice(const PointSet& gamma);

  /// Throws PreconditionError unless 0 < h_max <= min_gap/4 and
  /// 0 < substep_angle_cap < pi/2.
  void validate(const PointSet& gamma) const;
};

/// Prüfer angle θ at position x; θ is a lift, never reduced mod 2π.
struct PruferLift {
  double theta = 0.0;
  double x = 0.0;
};

struct LatticeAngle {
  std::int64_t n = 0;
  double x = 0.0;
  /// Right-continuous value θ(x_n+), jump at x_n included.
  double theta = 0.0;
};

struct AngleTrajectory {
  double energy = 0.0;
  double initial = 0.0;
  std::vector<LatticeAngle> lattice_angles;
};

/// Angle change of the vector (cos Ξ, sin Ξ) under (ψ', ψ) -> (ψ' + cψ, ψ),
/// following the straight path through the unipotents with parameter t*c,
/// t in [0, 1]. The path stays in one open half-plane, so the change lies in
/// (-π, π). Zero when sin Ξ = 0; 2π-periodic in Ξ.
double jump_angle(double c, double xi);

/// θ(x_to-) for θ' = cos²θ - (q(x) - E) sin²θ on the open gap `gap`, starting
/// from θ(x_from) = theta0. Fixed-step RK4 with step <= h_max, with step halving
/// whenever one step would move θ by more than substep_angle_cap.
double integrate_gap(const PotentialSampler& q, double e, double theta0, double x_from,
                     double x_to, std::int64_t gap, const IntegratorConfig& cfg);

/// θ(x_{n+1}) from θ(x_n): integrate the gap, then add J(v_{n+1}, θ(x_{n+1}-)).
double step_lattice(const GeneralizedPotential& p, double e, double theta_n, std::int64_t n,
                    const IntegratorConfig& cfg);

/// θ(x_{n-1}) from θ(x_n): undo the jump at x_n, then integrate backwards.
double step_lattice_back(const GeneralizedPotential& p, double e, double theta_n,
                         std::int64_t n, const IntegratorConfig& cfg);

/// Lattice values θ(x_0..x_n) with θ(x_0) = xi.
AngleTrajectory evolve(const GeneralizedPotential& p, double e, double xi, std::int64_t n_steps,
                       const IntegratorConfig& cfg);

/// θ(x_k) with θ(x_0) = xi, for any k in Z.
double theta_at(const GeneralizedPotential& p, double e, double xi, std::int64_t k,
                const IntegratorConfig& cfg);

/// One-lattice-step increment θ(x_1) - Ξ for θ(x_0) = Ξ.
double observable_F(const GeneralizedPotential& p, double e, double vartheta,
                    const IntegratorConfig& cfg);

/// Angle reduced into [0, 2π).
double reduce_angle(double theta);

/// (p·k, θ(x_k) mod 2π) with θ(x_0) = vartheta.
std::pair<GeneralizedPotential, double> skew_step(const GeneralizedPotential& p, double e,
                                                  double vartheta, std::int64_t k,
                                                  const IntegratorConfig& cfg);

}  // namespace rotnum
