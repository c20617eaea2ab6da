#include "rotnum/lattice.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rotnum/errors.hpp"

namespace rotnum {

namespace {

// Relative slack for spacing checks; generators hit the bounds exactly in
// exact arithmetic.
constexpr double kSpacingSlack = 1e-12;

}  // namespace

PointSet::PointSet(Rule rule, double min_gap, double max_gap)
    : rule_(std::make_shared<const Rule>(std::move(rule))), min_gap_(min_gap), max_gap_(max_gap) {
  if (!(min_gap > 0.0) || !(max_gap >= min_gap) || !std::isfinite(max_gap)) {
    throw PreconditionError("point set needs 0 < min_gap <= max_gap < inf");
  }
  if ((*rule_)(0) != 0.0) {
    throw PreconditionError("point set rule must satisfy x(0) = 0");
  }
}

PointSet PointSet::shifted(std::int64_t tau) const {
  PointSet out = *this;
  out.offset_ = offset_ + tau;
  out.origin_ = (*rule_)(out.offset_);
  return out;
}

std::int64_t PointSet::locate(double pos) const {
  // x_j lies between j*m and j*M (ordered by the sign of j), which brackets
  // the answer before bisection.
  std::int64_t lo;
  std::int64_t hi;
  if (pos >= 0.0) {
    lo = static_cast<std::int64_t>(std::floor(pos / max_gap_)) - 1;
    hi = static_cast<std::int64_t>(std::floor(pos / min_gap_)) + 1;
  } else {
    lo = static_cast<std::int64_t>(std::floor(pos / min_gap_)) - 1;
    hi = static_cast<std::int64_t>(std::floor(pos / max_gap_)) + 1;
  }
  while (x(lo) > pos) lo -= (hi - lo) + 1;
  while (x(hi) <= pos) hi += (hi - lo) + 1;
  // invariant: x(lo) <= pos < x(hi)
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (x(mid) <= pos) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void PointSet::check_spacing(std::int64_t window) const {
  const double lo = min_gap_ * (1.0 - kSpacingSlack);
  const double hi = max_gap_ * (1.0 + kSpacingSlack);
  double prev = x(-window - 1);
  for (std::int64_t i = -window; i <= window; ++i) {
    const double cur = x(i);
    const double gap = cur - prev;
    if (!(gap >= lo && gap <= hi)) {
      throw PreconditionError("lattice gap " + std::to_string(gap) + " at index " +
                              std::to_string(i) + " outside [m, M]");
    }
    prev = cur;
  }
}

BiSequence::BiSequence(Rule rule, double bound)
    : rule_(std::make_shared<const Rule>(std::move(rule))), bound_(bound) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw PreconditionError("sequence bound must be finite and nonnegative");
  }
}

BiSequence BiSequence::shifted(std::int64_t tau) const {
  BiSequence out = *this;
  out.offset_ = offset_ + tau;
  return out;
}

PointSet periodic_lattice(double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw PreconditionError("lattice spacing must be positive");
  }
  return PointSet([spacing](std::int64_t i) { return spacing * static_cast<double>(i); },
                  spacing, spacing);
}

PointSet sine_lattice(double amplitude, double frequency, double phase, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(amplitude) || !std::isfinite(frequency) ||
      !std::isfinite(phase)) {
    throw PreconditionError("sine lattice parameters must be finite with spacing > 0");
  }
  if (!(std::abs(amplitude * frequency) < spacing)) {
    throw PreconditionError("sine lattice needs |a| * omega < spacing");
  }
  // |sin(w i + phi) - sin(w (i-1) + phi)| <= 2 |sin(w/2)|
  const double swing = 2.0 * std::abs(amplitude * std::sin(frequency / 2.0));
  const double base = std::sin(phase);
  return PointSet(
      [=](std::int64_t i) {
        const double di = static_cast<double>(i);
        return spacing * di + amplitude * (std::sin(frequency * di + phase) - base);
      },
      spacing - swing, spacing + swing);
}

BiSequence constant_sequence(double value) {
  return BiSequence([value](std::int64_t) { return value; }, std::abs(value));
}

BiSequence alternating_sequence(double amplitude) {
  return BiSequence(
      [amplitude](std::int64_t i) { return (i % 2 == 0) ? amplitude : -amplitude; },
      std::abs(amplitude));
}

BiSequence sine_sequence(double amplitude, double frequency, double phase) {
  return BiSequence(
      [=](std::int64_t i) {
        return amplitude * std::sin(frequency * static_cast<double>(i) + phase);
      },
      std::abs(amplitude));
}

BiSequence trig_sequence(double offset, std::vector<TrigTerm> terms) {
  double bound = std::abs(offset);
  for (const auto& t : terms) bound += std::abs(t.amplitude);
  return BiSequence(
      [offset, terms = std::move(terms)](std::int64_t i) {
        const double di = static_cast<double>(i);
        double s = offset;
        for (const auto& t : terms) s += t.amplitude * std::cos(t.frequency * di + t.phase);
        return s;
      },
      bound);
}

}  // namespace rotnum
