#include "rotnum/apdiag.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotnum/errors.hpp"

namespace rotnum {

namespace {

double nearest_distance(const PointSet& g, double pos) {
  const std::int64_t j = g.locate(pos);
  return std::min(pos - g.x(j), g.x(j + 1) - pos);
}

double one_sided_dist(const PointSet& from, const PointSet& to, std::int64_t window) {
  double worst = 0.0;
  for (std::int64_t i = -window; i <= window; ++i) {
    worst = std::max(worst, nearest_distance(to, from.x(i)));
  }
  return worst;
}

// Function clause of S_r, sampling the gaps of `a` in [-window, window).
bool function_clause(const GeneralizedPotential& pa, const GeneralizedPotential& pb, double r,
                     std::int64_t window, int samples_per_gap) {
  const PointSet& ga = pa.gamma();
  const PointSet& gb = pb.gamma();
  const double denom = static_cast<double>(samples_per_gap + 1);

  std::int64_t jb = gb.locate(ga.x(-window));
  double b_lo = gb.x(jb);
  double b_hi = gb.x(jb + 1);
  for (std::int64_t i = -window; i < window; ++i) {
    const double left = ga.x(i);
    const double right = ga.x(i + 1);
    const double width = right - left;
    for (int k = 1; k <= samples_per_gap; ++k) {
      const double x = left + width * (static_cast<double>(k) / denom);
      while (b_hi <= x) {
        ++jb;
        b_lo = b_hi;
        b_hi = gb.x(jb + 1);
      }
      const double near_a = std::min(x - left, right - x);
      const double near_b = std::min(x - b_lo, b_hi - x);
      if (std::min(near_a, near_b) <= r) continue;  // inside F_r(Γa ∪ Γb)
      if (!(std::abs(pa.q()(x, i) - pb.q()(x, jb)) < r)) return false;
    }
  }
  return true;
}

ApDiagnosticsReport make_report(double eps, std::int64_t tau_range, std::int64_t window,
                                const std::vector<char>& hit) {
  ApDiagnosticsReport report;
  report.epsilon = eps;
  report.range_lo = -tau_range;
  report.range_hi = tau_range;
  report.window = window;
  for (std::size_t k = 0; k < hit.size(); ++k) {
    if (hit[k]) report.found_periods.push_back(static_cast<std::int64_t>(k) - tau_range);
  }
  report.window_bound =
      relative_denseness_window(report.found_periods, report.range_lo, report.range_hi);
  return report;
}

void check_period_args(double eps, std::int64_t tau_range, std::int64_t window) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (tau_range < 0) throw PreconditionError("tau range must be nonnegative");
  if (window < 1) throw PreconditionError("window must be >= 1");
}

}  // namespace

double point_set_dist(const PointSet& g1, const PointSet& g2, std::int64_t window) {
  if (window < 1) throw PreconditionError("window must be >= 1");
  return std::max(one_sided_dist(g1, g2, window), one_sided_dist(g2, g1, window));
}

double aligned_sup_dist(const PointSet& g1, const PointSet& g2, std::int64_t window) {
  double worst = 0.0;
  for (std::int64_t i = -window; i <= window; ++i) {
    worst = std::max(worst, std::abs(g1.x(i) - g2.x(i)));
  }
  return worst;
}

bool shift_contraction_check(const PointSet& g1, const PointSet& g2,
                             const std::vector<std::int64_t>& taus, std::int64_t window) {
  std::int64_t reach = 0;
  for (auto t : taus) reach = std::max(reach, t < 0 ? -t : t);
  const double base = point_set_dist(g1, g2, window + reach);
  const double half_gap = 0.5 * std::min(g1.min_gap(), g2.min_gap());
  if (!(base < half_gap)) {
    throw PreconditionError("shift contraction requires dist(G1, G2) < m/2");
  }
  // 2 sup|a - b| is an exact bound; the slack only absorbs subtraction round-off.
  const double bound = 2.0 * base + 8.0 * std::numeric_limits<double>::epsilon() *
                                        (1.0 + std::abs(g1.x(window + reach)));
  for (auto t : taus) {
    if (point_set_dist(g1.shifted(t), g2.shifted(t), window) > bound) return false;
  }
  return true;
}

bool entourage_contains(const GeneralizedPotential& p1, const GeneralizedPotential& p2, double r,
                        std::int64_t window, int samples_per_gap) {
  if (!(r > 0.0)) throw PreconditionError("entourage radius must be positive");
  if (window < 1) throw PreconditionError("window must be >= 1");
  if (samples_per_gap < 1) throw PreconditionError("samples_per_gap must be >= 1");

  if (!(point_set_dist(p1.gamma(), p2.gamma(), window) < r)) return false;
  for (std::int64_t i = -window; i <= window; ++i) {
    if (!(std::abs(p1.v()(i) - p2.v()(i)) < r)) return false;
  }
  return function_clause(p1, p2, r, window, samples_per_gap) &&
         function_clause(p2, p1, r, window, samples_per_gap);
}

std::optional<double> entourage_gap(const GeneralizedPotential& p1,
                                    const GeneralizedPotential& p2, std::int64_t window,
                                    int max_levels, int samples_per_gap) {
  std::optional<double> best;
  double r = 1.0;
  for (int k = 0; k <= max_levels; ++k, r *= 0.5) {
    if (!entourage_contains(p1, p2, r, window, samples_per_gap)) break;
    best = r;
  }
  return best;
}

std::optional<std::int64_t> relative_denseness_window(const std::vector<std::int64_t>& sorted,
                                                      std::int64_t lo, std::int64_t hi) {
  if (sorted.empty()) return std::nullopt;
  std::int64_t ell = std::max(sorted.front() - lo + 1, hi - sorted.back() + 1);
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    ell = std::max(ell, sorted[k] - sorted[k - 1]);
  }
  return ell;
}

ApDiagnosticsReport epsilon_periods(const GeneralizedPotential& p, double eps,
                                    std::int64_t tau_range, std::int64_t window,
                                    int samples_per_gap, int jobs) {
  check_period_args(eps, tau_range, window);
  const std::int64_t count = 2 * tau_range + 1;
  std::vector<char> hit(static_cast<std::size_t>(count), 0);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t k = 0; k < count; ++k) {
    hit[static_cast<std::size_t>(k)] =
        entourage_contains(p.shifted(k - tau_range), p, eps, window, samples_per_gap) ? 1 : 0;
  }
  return make_report(eps, tau_range, window, hit);
}

ApDiagnosticsReport epsilon_periods_serial(const GeneralizedPotential& p, double eps,
                                           std::int64_t tau_range, std::int64_t window,
                                           int samples_per_gap) {
  check_period_args(eps, tau_range, window);
  const std::int64_t count = 2 * tau_range + 1;
  std::vector<char> hit(static_cast<std::size_t>(count), 0);
  for (std::int64_t k = 0; k < count; ++k) {
    hit[static_cast<std::size_t>(k)] =
        entourage_contains(p.shifted(k - tau_range), p, eps, window, samples_per_gap) ? 1 : 0;
  }
  return make_report(eps, tau_range, window, hit);
}

double density(const PointSet& gamma, std::int64_t n) {
  if (n < 1) throw PreconditionError("density needs n >= 1");
  return static_cast<double>(n) / gamma.x(n);
}

double mean_value_seq(const BiSequence& v, std::int64_t n1, std::int64_t n2) {
  if (!(n2 > n1)) throw PreconditionError("mean_value_seq needs n2 > n1");
  double sum = 0.0;
  for (std::int64_t i = n1; i < n2; ++i) sum += v(i);
  return sum / static_cast<double>(n2 - n1);
}

double mean_value_potential(const GeneralizedPotential& p, double z1, double z2,
                            int quad_points_per_gap) {
  if (!(z2 > z1)) throw PreconditionError("mean_value_potential needs z2 > z1");
  if (quad_points_per_gap < 2) throw PreconditionError("need at least 2 quadrature intervals");
  const int n = quad_points_per_gap + (quad_points_per_gap % 2);
  const PointSet& g = p.gamma();
  const auto& q = p.q();

  double integral = 0.0;
  double masses = 0.0;
  std::int64_t j = g.locate(z1);
  double left = g.x(j);
  while (left < z2) {
    const double right = g.x(j + 1);
    if (left >= z1) masses += p.v()(j);
    const double a = std::max(z1, left);
    const double b = std::min(z2, right);
    if (b > a) {
      const double h = (b - a) / n;
      double s = q(a, j) + q(b, j);
      for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * q(a + k * h, j);
      integral += s * h / 3.0;
    }
    ++j;
    left = right;
  }
  return (integral + masses) / (z2 - z1);
}

}  // namespace rotnum
