#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace rotnum {

/// A strictly increasing point set {x_i}, i in Z, with x_0 = 0 and every gap
/// x_i - x_{i-1} in [min_gap, max_gap].
///
/// The set is infinite, so it is stored as an index rule over a base
/// enumeration plus an integer shift offset: x(i) = base(i + offset) - base(offset).
/// Shifting only changes the offset, which makes the shift action associative
/// bit-for-bit.
class PointSet {
 public:
  using Rule = std::function<double(std::int64_t)>;

  /// `rule(0)` must be exactly 0 and the gaps must lie in [min_gap, max_gap].
  PointSet(Rule rule, double min_gap, double max_gap);

  double x(std::int64_t i) const { return (*rule_)(i + offset_) - origin_; }
  double operator()(std::int64_t i) const { return x(i); }

  double min_gap() const noexcept { return min_gap_; }
  double max_gap() const noexcept { return max_gap_; }

  /// Accumulated shift relative to the base enumeration.
  std::int64_t offset() const noexcept { return offset_; }
  /// Position of this set's x_0 in base coordinates.
  double origin() const noexcept { return origin_; }

  /// x̂_i = x_{i+tau} - x_tau.
  PointSet shifted(std::int64_t tau) const;

  /// Index j with x(j) <= pos < x(j+1).
  std::int64_t locate(double pos) const;

  /// Throws PreconditionError if some gap in [-window, window] leaves [m, M].
  void check_spacing(std::int64_t window) const;

 private:
  std::shared_ptr<const Rule> rule_;
  std::int64_t offset_ = 0;
  double origin_ = 0.0;
  double min_gap_;
  double max_gap_;
};

/// Bounded bi-infinite sequence {v_i}, i in Z, stored the same way as PointSet.
class BiSequence {
 public:
  using Rule = std::function<double(std::int64_t)>;

  BiSequence(Rule rule, double bound);

  double v(std::int64_t i) const { return (*rule_)(i + offset_); }
  double operator()(std::int64_t i) const { return v(i); }

  double bound() const noexcept { return bound_; }
  std::int64_t offset() const noexcept { return offset_; }

  BiSequence shifted(std::int64_t tau) const;

 private:
  std::shared_ptr<const Rule> rule_;
  std::int64_t offset_ = 0;
  double bound_;
};

struct TrigTerm {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

// Built-in point sets.
PointSet periodic_lattice(double spacing);
/// x_i = spacing*i + a*(sin(omega*i + phi) - sin(phi)); requires |a|*omega < spacing.
PointSet sine_lattice(double amplitude, double frequency, double phase, double spacing = 1.0);

// Built-in sequences.
BiSequence constant_sequence(double value);
/// v_i = amplitude * (-1)^i
BiSequence alternating_sequence(double amplitude);
/// v_i = amplitude * sin(frequency*i + phase)
BiSequence sine_sequence(double amplitude, double frequency, double phase = 0.0);
/// v_i = offset + sum_k a_k cos(w_k i + phi_k)
BiSequence trig_sequence(double offset, std::vector<TrigTerm> terms);

}  // namespace rotnum
