#include "rotnum/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rotnum/errors.hpp"
#include "rotnum/transfer.hpp"

namespace rotnum::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr std::int64_t kMaxGapSamples = std::int64_t{1} << 14;

double grid_angle(int j, int grid_size) {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size);
}

// Fills table[j] for j = first, first + stride, ... on an OpenMP team.
void fill_table(std::vector<double>& table, int first, int stride, const PeriodicSpec& spec,
                double e, const IntegratorConfig& cfg, int jobs) {
  const int grid = static_cast<int>(table.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int j = first; j < grid; j += stride) {
    table[static_cast<std::size_t>(j)] =
        theta_at(spec.potential, e, grid_angle(j, grid), spec.lattice_period, cfg);
  }
}

void check_spec(const PeriodicSpec& spec) {
  if (spec.lattice_period < 1) throw PreconditionError("lattice period must be >= 1");
}

}  // namespace

double closed_form_rho_constant(double q0, double e) { return e > q0 ? std::sqrt(e - q0) : 0.0; }

double kp_discriminant(double e, double length, double v) {
  if (!(length > 0.0)) throw PreconditionError("kp_discriminant needs length > 0");
  if (e > 0.0) {
    const double k = std::sqrt(e);
    return 2.0 * std::cos(k * length) + v * std::sin(k * length) / k;
  }
  if (e < 0.0) {
    const double kappa = std::sqrt(-e);
    return 2.0 * std::cosh(kappa * length) + v * std::sinh(kappa * length) / kappa;
  }
  return 2.0 + v * length;
}

std::vector<double> tabulate_period_map(const PeriodicSpec& spec, double e, int grid_size,
                                        const IntegratorConfig& cfg, int jobs) {
  check_spec(spec);
  if (grid_size < 1) throw PreconditionError("grid_size must be positive");
  std::vector<double> table(static_cast<std::size_t>(grid_size));
  fill_table(table, 0, 1, spec, e, cfg, jobs);
  return table;
}

std::vector<double> tabulate_period_map_serial(const PeriodicSpec& spec, double e,
                                               int grid_size, const IntegratorConfig& cfg) {
  check_spec(spec);
  if (grid_size < 1) throw PreconditionError("grid_size must be positive");
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    table.push_back(theta_at(spec.potential, e, grid_angle(j, grid_size), spec.lattice_period, cfg));
  }
  return table;
}

double interpolated_rotation(const std::vector<double>& table, double spatial_period,
                             std::int64_t iterations, double xi0) {
  const std::size_t grid = table.size();
  if (grid < 2) throw PreconditionError("need at least two table points");
  if (iterations < 1) throw PreconditionError("iterations must be >= 1");
  for (std::size_t j = 1; j < grid; ++j) {
    if (!(table[j] > table[j - 1])) {
      throw NumericError("period map is not increasing at grid index " + std::to_string(j));
    }
  }
  if (!(table.front() + kTwoPi > table.back())) {
    throw NumericError("period map is not increasing across the 2pi seam");
  }

  const double h = kTwoPi / static_cast<double>(grid);
  // Position = turns * 2π + reduced; keeps the reduced part small so the
  // interpolation does not lose digits on long orbits.
  auto floor_turns = [](double y) { return std::floor(y / kTwoPi); };
  double start_turns = floor_turns(xi0);
  double reduced = xi0 - kTwoPi * start_turns;
  double turns = start_turns;
  for (std::int64_t n = 0; n < iterations; ++n) {
    auto j = static_cast<std::size_t>(reduced / h);
    if (j >= grid) j = grid - 1;
    const double t = (reduced - static_cast<double>(j) * h) / h;
    const double lo = table[j];
    const double hi = (j + 1 < grid) ? table[j + 1] : table.front() + kTwoPi;
    double y = lo + t * (hi - lo);
    const double k = floor_turns(y);
    turns += k;
    reduced = y - kTwoPi * k;
    if (reduced >= kTwoPi) {
      reduced -= kTwoPi;
      turns += 1.0;
    } else if (reduced < 0.0) {
      reduced += kTwoPi;
      turns -= 1.0;
    }
  }
  const double travelled = kTwoPi * (turns - start_turns) + (reduced - (xi0 - kTwoPi * start_turns));
  return travelled / (static_cast<double>(iterations) * spatial_period);
}

double circle_map_rho(const PeriodicSpec& spec, double e, int grid_size,
                      std::int64_t iterations, const IntegratorConfig& cfg, double xi0,
                      int jobs) {
  check_spec(spec);
  if (grid_size < 16) throw PreconditionError("circle_map_rho needs grid_size >= 16");
  if (iterations < 1) throw PreconditionError("iterations must be >= 1");
  const double period = spec.spatial_period();
  const double settle = 1e-6 + 2.0 * kTwoPi / (static_cast<double>(iterations) * period);

  std::vector<double> table(static_cast<std::size_t>(grid_size));
  fill_table(table, 0, 1, spec, e, cfg, jobs);
  double rho = interpolated_rotation(table, period, iterations, xi0);
  int grid = grid_size;
  while (2 * grid <= kMaxCircleGrid) {
    grid *= 2;
    std::vector<double> finer(static_cast<std::size_t>(grid));
    for (std::size_t j = 0; j < table.size(); ++j) finer[2 * j] = table[j];
    fill_table(finer, 1, 2, spec, e, cfg, jobs);
    table = std::move(finer);
    const double next = interpolated_rotation(table, period, iterations, xi0);
    const double change = std::abs(next - rho);
    rho = next;
    if (change < settle) break;
  }
  return rho;
}

AngleTrajectory exact_piecewise_evolve(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n_steps) {
  const auto& q = p.q();
  if (!q.constant_on_gaps()) {
    throw PreconditionError("exact evolution needs q constant on every lattice gap");
  }
  if (n_steps < 1) throw PreconditionError("exact evolution needs n_steps >= 1");
  const PointSet& g = p.gamma();

  AngleTrajectory traj;
  traj.energy = e;
  traj.initial = xi;
  traj.lattice_angles.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.lattice_angles.push_back({0, g.x(0), xi});

  double theta = xi;
  Vec2 u{std::cos(xi), std::sin(xi)};
  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double c = q.gap_value(k);
    const double len = g.x(k + 1) - g.x(k);
    const double speed = std::max(1.0, std::abs(e - c));  // bound on |θ'|
    auto samples = std::max<std::int64_t>(
        8, static_cast<std::int64_t>(std::ceil(len * (1.0 + std::sqrt(std::abs(e - c))) * 4.0)));
    // Below π per sample the principal remainder is the true increment.
    while (len * speed / static_cast<double>(samples) >= kPi && samples < kMaxGapSamples) {
      samples *= 2;
    }

    double lifted = theta;
    Vec2 end = u;
    bool certified = false;
    while (!certified && samples <= kMaxGapSamples) {
      certified = true;
      lifted = theta;
      for (std::int64_t s = 1; s <= samples; ++s) {
        const double at = len * static_cast<double>(s) / static_cast<double>(samples);
        end = exact_propagator_constant(c, e, at) * u;
        const double step = std::remainder(std::atan2(end.psi, end.d) - lifted, kTwoPi);
        if (std::abs(step) >= 0.5 * kPi) {
          certified = false;
          break;
        }
        lifted += step;
      }
      if (!certified) samples *= 2;
    }
    if (!certified || len * speed / static_cast<double>(std::min(samples, kMaxGapSamples)) >= kPi) {
      throw NumericError("branch tracking failed on gap " + std::to_string(k), k);
    }

    const double v = p.v()(k + 1);
    theta = lifted + jump_angle(v, lifted);
    end = jump_matrix(v) * end;
    const double norm = std::hypot(end.d, end.psi);
    u = {end.d / norm, end.psi / norm};
    traj.lattice_angles.push_back({k + 1, g.x(k + 1), theta});
  }
  return traj;
}

}  // namespace rotnum::oracle
