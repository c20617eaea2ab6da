#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rotnum/potential.hpp"

namespace rotnum {

/// Windowed Hausdorff distance between two point sets.
///
/// Takes the max over |i| <= window of the nearest-neighbour distance from
/// x¹_i into Γ₂ and from x²_i into Γ₁ (nearest neighbours are searched over
/// all of Z). The result is a lower bound for the distance over all of Z and
/// never exceeds max_gap/2.
double point_set_dist(const PointSet& g1, const PointSet& g2, std::int64_t window);

/// sup_{|i| <= window} |x¹_i - x²_i|
double aligned_sup_dist(const PointSet& g1, const PointSet& g2, std::int64_t window);

/// Checks dist(Γ₁·τ, Γ₂·τ) <= 2 dist(Γ₁, Γ₂) for every τ in `taus`.
///
/// The right-hand side is evaluated on the window widened by max|τ| so that it
/// covers every index the shifted left-hand side touches. Throws
/// PreconditionError when dist(Γ₁, Γ₂) >= min(m₁, m₂)/2.
bool shift_contraction_check(const PointSet& g1, const PointSet& g2,
                             const std::vector<std::int64_t>& taus, std::int64_t window);

inline constexpr int kDefaultSamplesPerGap = 64;

/// Membership of (p1, p2) in the entourage S_r, checked on a window:
///   dist(Γ₁, Γ₂) < r, max_{|i|<=window} |v¹_i - v²_i| < r, and
///   |q₁ - q₂| < r at `samples_per_gap` equispaced interior points of every
///   gap of Γ₁ and Γ₂ in the window that lie outside the closed
///   r-neighbourhood of Γ₁ ∪ Γ₂.
bool entourage_contains(const GeneralizedPotential& p1, const GeneralizedPotential& p2, double r,
                        std::int64_t window, int samples_per_gap = kDefaultSamplesPerGap);

/// Smallest dyadic r = 2^-k (k >= 0 down to 2^-max_levels) with membership, or
/// nullopt if even r = 1 fails.
std::optional<double> entourage_gap(const GeneralizedPotential& p1,
                                    const GeneralizedPotential& p2, std::int64_t window,
                                    int max_levels = 40,
                                    int samples_per_gap = kDefaultSamplesPerGap);

struct ApDiagnosticsReport {
  double epsilon = 0.0;
  std::vector<std::int64_t> found_periods;
  /// Smallest ℓ such that every run of ℓ consecutive integers in the search
  /// range contains a found period; empty when nothing was found.
  std::optional<std::int64_t> window_bound;
  std::int64_t range_lo = 0;
  std::int64_t range_hi = 0;
  std::int64_t window = 0;
};

/// ε-translation numbers τ in [-tau_range, tau_range] with (p·τ, p) in S_ε.
/// OpenMP over τ; results are identical to epsilon_periods_serial.
ApDiagnosticsReport epsilon_periods(const GeneralizedPotential& p, double eps,
                                    std::int64_t tau_range, std::int64_t window,
                                    int samples_per_gap = kDefaultSamplesPerGap, int jobs = 0);

ApDiagnosticsReport epsilon_periods_serial(const GeneralizedPotential& p, double eps,
                                           std::int64_t tau_range, std::int64_t window,
                                           int samples_per_gap = kDefaultSamplesPerGap);

/// Relative-denseness window of a sorted set of integers inside [lo, hi].
std::optional<std::int64_t> relative_denseness_window(const std::vector<std::int64_t>& sorted,
                                                      std::int64_t lo, std::int64_t hi);

/// n / x(n); lies in [1/M, 1/m].
double density(const PointSet& gamma, std::int64_t n);

/// (1/(n2-n1)) sum_{i=n1}^{n2-1} v_i
double mean_value_seq(const BiSequence& v, std::int64_t n1, std::int64_t n2);

/// (1/(z2-z1)) [∫_{[z1,z2)} q + sum_{x_i in [z1,z2)} v_i], with composite
/// Simpson on each lattice gap using `quad_points_per_gap` subintervals
/// (rounded up to even).
double mean_value_potential(const GeneralizedPotential& p, double z1, double z2,
                            int quad_points_per_gap = 16);

}  // namespace rotnum
