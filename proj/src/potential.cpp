#include "rotnum/potential.hpp"

#include <cmath>
#include <utility>

#include "rotnum/errors.hpp"

namespace rotnum {

PotentialSampler::PotentialSampler(Rule rule, double bound, bool constant_on_gaps)
    : rule_(std::make_shared<const Rule>(std::move(rule))),
      bound_(bound),
      constant_on_gaps_(constant_on_gaps) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw PreconditionError("potential bound must be finite and nonnegative");
  }
}

PotentialSampler PotentialSampler::shifted(double dx, std::int64_t dgap) const {
  PotentialSampler out = *this;
  out.origin_ = origin_ + dx;
  out.index_offset_ = index_offset_ + dgap;
  return out;
}

PotentialSampler constant_potential(double value) {
  return PotentialSampler([value](double, std::int64_t) { return value; }, std::abs(value),
                          true);
}

PotentialSampler trig_potential(double offset, std::vector<TrigTerm> terms) {
  double bound = std::abs(offset);
  for (const auto& t : terms) bound += std::abs(t.amplitude);
  const bool flat = [&] {
    for (const auto& t : terms) {
      if (t.amplitude != 0.0 && t.frequency != 0.0) return false;
    }
    return true;
  }();
  return PotentialSampler(
      [offset, terms = std::move(terms)](double x, std::int64_t) {
        double s = offset;
        for (const auto& t : terms) s += t.amplitude * std::cos(t.frequency * x + t.phase);
        return s;
      },
      bound, flat);
}

PotentialSampler piecewise_constant_potential(BiSequence values) {
  const double bound = values.bound();
  return PotentialSampler(
      [values = std::move(values)](double, std::int64_t gap) { return values(gap); }, bound,
      true);
}

GeneralizedPotential::GeneralizedPotential(PotentialSampler q, BiSequence v, PointSet gamma)
    : GeneralizedPotential(std::move(q), std::move(v), std::move(gamma), 0) {}

GeneralizedPotential::GeneralizedPotential(PotentialSampler base_q, BiSequence base_v,
                                           PointSet base_gamma, std::int64_t offset)
    : base_q_(std::move(base_q)),
      base_v_(std::move(base_v)),
      base_gamma_(std::move(base_gamma)),
      offset_(offset),
      gamma_(base_gamma_.shifted(offset)),
      v_(base_v_.shifted(offset)),
      q_(base_q_.shifted(base_gamma_.x(offset), offset)) {}

GeneralizedPotential GeneralizedPotential::shifted(std::int64_t tau) const {
  return GeneralizedPotential(base_q_, base_v_, base_gamma_, offset_ + tau);
}

GeneralizedPotential GeneralizedPotential::without_deltas() const {
  return GeneralizedPotential(base_q_, constant_sequence(0.0), base_gamma_, offset_);
}

}  // namespace rotnum
