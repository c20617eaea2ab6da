#include "rotnum/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rotnum/errors.hpp"

namespace rotnum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxHalvings = 40;

// θ' = cos²θ - (q - E) sin²θ, written through cos 2θ.
inline double angle_field(double q_minus_e, double theta) {
  const double c2 = std::cos(2.0 * theta);
  return 0.5 * (1.0 + c2) - q_minus_e * 0.5 * (1.0 - c2);
}

// RK4 with recursive halving. `Field` is (x, theta) -> theta'.
template <class Field>
double rk4_step(const Field& field, double theta, double x, double h, double cap, int depth) {
  const double k1 = field(x, theta);
  const double k2 = field(x + 0.5 * h, theta + 0.5 * h * k1);
  const double k3 = field(x + 0.5 * h, theta + 0.5 * h * k2);
  const double k4 = field(x + h, theta + h * k3);
  const double delta = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!std::isfinite(delta)) {
    throw NumericError("non-finite Prufer field near x = " + std::to_string(x));
  }
  if (std::abs(delta) <= cap) return theta + delta;
  if (depth >= kMaxHalvings) {
    throw NumericError("step halving limit reached near x = " + std::to_string(x));
  }
  const double half = 0.5 * h;
  const double mid = rk4_step(field, theta, x, half, cap, depth + 1);
  return rk4_step(field, mid, x + half, h - half, cap, depth + 1);
}

template <class Field>
double run_steps(const Field& field, double theta, double x_from, double x_to, double cap,
                 double h_max) {
  const double length = x_to - x_from;
  const double ratio = std::abs(length) / h_max;
  // The slack keeps exact multiples of h_max from rounding up to an extra step.
  const auto n =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(ratio * (1.0 - 1e-12))));
  const double h = length / static_cast<double>(n);
  // The field has period π in θ; integrating the offset from a multiple of π
  // keeps the trig arguments small on long trajectories.
  const double base = std::numbers::pi * std::nearbyint(theta / std::numbers::pi);
  double local = theta - base;
  for (std::int64_t k = 0; k < n; ++k) {
    const double x = x_from + static_cast<double>(k) * h;
    const double hk = (k + 1 == n) ? x_to - x : h;
    local = rk4_step(field, local, x, hk, cap, 0);
  }
  return base + local;
}

// Integrates from x_from to x_to in either direction.
double integrate_span(const PotentialSampler& q, double e, double theta0, double x_from,
                      double x_to, std::int64_t gap, const IntegratorConfig& cfg) {
  if (q.constant_on_gaps()) {
    const double q_minus_e = q.gap_value(gap) - e;
    const auto field = [q_minus_e](double, double theta) { return angle_field(q_minus_e, theta); };
    return run_steps(field, theta0, x_from, x_to, cfg.substep_angle_cap, cfg.h_max);
  }
  const auto field = [&q, e, gap](double x, double theta) {
    return angle_field(q(x, gap) - e, theta);
  };
  return run_steps(field, theta0, x_from, x_to, cfg.substep_angle_cap, cfg.h_max);
}

}  // namespace

IntegratorConfig IntegratorConfig::for_lattice(const PointSet& gamma) {
  IntegratorConfig cfg;
  cfg.h_max = gamma.min_gap() / 50.0;
  return cfg;
}

void IntegratorConfig::validate(const PointSet& gamma) const {
  if (!(h_max > 0.0) || !(h_max <= gamma.min_gap() / 4.0)) {
    throw PreconditionError("h_max must lie in (0, m/4]");
  }
  if (!(substep_angle_cap > 0.0) || !(substep_angle_cap < std::numbers::pi / 2)) {
    throw PreconditionError("substep_angle_cap must lie in (0, pi/2)");
  }
}

double jump_angle(double c, double xi) {
  // arg(P_c(1)u) - arg(u) = arg((cos + c sin + i sin)(cos - i sin))
  //                      = arg(1 + c sin cos - i c sin²),
  // valid because both ends lie in the same open half-plane.
  const double r = std::remainder(xi, kTwoPi);
  const double s = std::sin(r);
  // sin is zero only at multiples of π; the reduced argument of k·π carries
  // round-off of a few ulps, which is treated as the exact zero.
  if (std::abs(s) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(xi))) {
    return 0.0;
  }
  const double co = std::cos(r);
  return std::atan2(-c * s * s, 1.0 + c * s * co);
}

double integrate_gap(const PotentialSampler& q, double e, double theta0, double x_from,
                     double x_to, std::int64_t gap, const IntegratorConfig& cfg) {
  if (!(x_to > x_from)) throw PreconditionError("integrate_gap needs x_to > x_from");
  return integrate_span(q, e, theta0, x_from, x_to, gap, cfg);
}

double step_lattice(const GeneralizedPotential& p, double e, double theta_n, std::int64_t n,
                    const IntegratorConfig& cfg) {
  const PointSet& g = p.gamma();
  const double left = integrate_span(p.q(), e, theta_n, g.x(n), g.x(n + 1), n, cfg);
  return left + jump_angle(p.v()(n + 1), left);
}

double step_lattice_back(const GeneralizedPotential& p, double e, double theta_n,
                         std::int64_t n, const IntegratorConfig& cfg) {
  const PointSet& g = p.gamma();
  // R_{-v} retraces the horizontal segment of R_v backwards.
  const double left = theta_n + jump_angle(-p.v()(n), theta_n);
  return integrate_span(p.q(), e, left, g.x(n), g.x(n - 1), n - 1, cfg);
}

AngleTrajectory evolve(const GeneralizedPotential& p, double e, double xi, std::int64_t n_steps,
                       const IntegratorConfig& cfg) {
  if (n_steps < 1) throw PreconditionError("evolve needs n_steps >= 1");
  AngleTrajectory traj;
  traj.energy = e;
  traj.initial = xi;
  traj.lattice_angles.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.lattice_angles.push_back({0, p.gamma().x(0), xi});
  double theta = xi;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    try {
      theta = step_lattice(p, e, theta, n, cfg);
    } catch (const NumericError& err) {
      throw NumericError(std::string(err.what()) + " (lattice step " + std::to_string(n) + ")",
                         n);
    }
    traj.lattice_angles.push_back({n + 1, p.gamma().x(n + 1), theta});
  }
  return traj;
}

double theta_at(const GeneralizedPotential& p, double e, double xi, std::int64_t k,
                const IntegratorConfig& cfg) {
  double theta = xi;
  for (std::int64_t n = 0; n < k; ++n) theta = step_lattice(p, e, theta, n, cfg);
  for (std::int64_t n = 0; n > k; --n) theta = step_lattice_back(p, e, theta, n, cfg);
  return theta;
}

double observable_F(const GeneralizedPotential& p, double e, double vartheta,
                    const IntegratorConfig& cfg) {
  return step_lattice(p, e, vartheta, 0, cfg) - vartheta;
}

double reduce_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

std::pair<GeneralizedPotential, double> skew_step(const GeneralizedPotential& p, double e,
                                                  double vartheta, std::int64_t k,
                                                  const IntegratorConfig& cfg) {
  const double theta = theta_at(p, e, vartheta, k, cfg);
  return {p.shifted(k), reduce_angle(theta)};
}

}  // namespace rotnum
