#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "rotnum/lattice.hpp"

namespace rotnum {

/// Background potential q, piecewise continuous with jumps only on the lattice.
///
/// Evaluation takes the gap index alongside the position: `q(x, gap)` with
/// x in [x_gap, x_{gap+1}). Samplers that are continuous across the lattice
/// ignore the index; piecewise-constant samplers use only the index. At a
/// lattice point the value of the gap to the right is used (right-continuity),
/// and the gap's own rule is evaluated at its right endpoint for left limits.
class PotentialSampler {
 public:
  using Rule = std::function<double(double, std::int64_t)>;

  PotentialSampler(Rule rule, double bound, bool constant_on_gaps = false);

  double operator()(double x, std::int64_t gap) const {
    return (*rule_)(x + origin_, gap + index_offset_);
  }

  double bound() const noexcept { return bound_; }
  /// True when q is constant on every open lattice gap.
  bool constant_on_gaps() const noexcept { return constant_on_gaps_; }
  /// Value on gap `gap`; only meaningful when constant_on_gaps().
  double gap_value(std::int64_t gap) const { return (*this)(0.0, gap); }

  /// q̂(x, i) = q(x + dx, i + dgap).
  PotentialSampler shifted(double dx, std::int64_t dgap) const;

 private:
  std::shared_ptr<const Rule> rule_;
  double origin_ = 0.0;
  std::int64_t index_offset_ = 0;
  double bound_;
  bool constant_on_gaps_;
};

PotentialSampler constant_potential(double value);
/// q(x) = offset + sum_k a_k cos(w_k x + phi_k)
PotentialSampler trig_potential(double offset, std::vector<TrigTerm> terms);
/// q = u_i on (x_i, x_{i+1}).
PotentialSampler piecewise_constant_potential(BiSequence values);

/// The triple (q, V, Γ): background q with jumps on Γ plus sum_i v_i δ(x - x_i).
///
/// Holds the unshifted parts and a shift offset; the accessors return the
/// shifted views. Shifting twice produces the same offset as shifting once by
/// the sum, so the group law holds exactly.
class GeneralizedPotential {
 public:
  GeneralizedPotential(PotentialSampler q, BiSequence v, PointSet gamma);

  const PointSet& gamma() const noexcept { return gamma_; }
  const BiSequence& v() const noexcept { return v_; }
  const PotentialSampler& q() const noexcept { return q_; }

  std::int64_t offset() const noexcept { return offset_; }

  /// (q(· + x_tau), V·tau, Γ·tau)
  GeneralizedPotential shifted(std::int64_t tau) const;

  /// The same Γ and q with every δ-strength zeroed.
  GeneralizedPotential without_deltas() const;

 private:
  GeneralizedPotential(PotentialSampler base_q, BiSequence base_v, PointSet base_gamma,
                       std::int64_t offset);

  PotentialSampler base_q_;
  BiSequence base_v_;
  PointSet base_gamma_;
  std::int64_t offset_ = 0;

  PointSet gamma_;
  BiSequence v_;
  PotentialSampler q_;
};

inline PointSet shift_point_set(const PointSet& gamma, std::int64_t tau) {
  return gamma.shifted(tau);
}

inline GeneralizedPotential shift_potential(const GeneralizedPotential& p, std::int64_t tau) {
  return p.shifted(tau);
}

}  // namespace rotnum
