#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "rotnum/oracle.hpp"
#include "rotnum/potential.hpp"
#include "rotnum/prufer.hpp"

namespace rotnum::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr std::uint64_t kSeed = 0x5eed'2026'0a1bULL;

inline GeneralizedPotential free_potential() {
  return {constant_potential(0.0), constant_sequence(0.0), periodic_lattice(1.0)};
}

inline GeneralizedPotential kronig_penney(double v = 2.0) {
  return {constant_potential(0.0), constant_sequence(v), periodic_lattice(1.0)};
}

/// Γ_a = {i + a sin i}
inline PointSet gamma_a(double a) { return sine_lattice(a, 1.0, 0.0); }

/// q = u_i = (-1)^i on the gaps of Γ_{0.5}, no δ's.
inline GeneralizedPotential alternating_steps() {
  return {piecewise_constant_potential(alternating_sequence(1.0)), constant_sequence(0.0),
          gamma_a(0.5)};
}

/// q = cos x + cos(√2 x), v_i = (-1)^i on Γ_{0.5}.
inline GeneralizedPotential quasi_periodic() {
  return {trig_potential(0.0, {{1.0, 1.0, 0.0}, {1.0, std::numbers::sqrt2, 0.0}}),
          alternating_sequence(1.0), gamma_a(0.5)};
}

/// RK4 fine enough for the 1e-6 exact-vs-RK4 comparisons.
inline IntegratorConfig fine(const PointSet& gamma) {
  IntegratorConfig c = IntegratorConfig::for_lattice(gamma);
  c.h_max = gamma.min_gap() / 400.0;
  return c;
}

inline std::mt19937_64 rng() { return std::mt19937_64(kSeed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::int64_t uniform_int(std::mt19937_64& g, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

}  // namespace rotnum::testing
