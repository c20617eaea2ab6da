#include "rotnum/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rotnum/errors.hpp"

namespace rotnum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat2 scaled(const Mat2& m, double s) { return {m.d11 * s, m.d12 * s, m.d21 * s, m.d22 * s}; }

Mat2 sum(const Mat2& a, const Mat2& b) {
  return {a.d11 + b.d11, a.d12 + b.d12, a.d21 + b.d21, a.d22 + b.d22};
}

// d/dx Y = [[0, q - E], [1, 0]] Y
Mat2 apply_field(double q_minus_e, const Mat2& y) {
  return {q_minus_e * y.d21, q_minus_e * y.d22, y.d11, y.d12};
}

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD renorm(double hi, double lo) {
  const double s = hi + lo;
  return {s, lo - (s - hi)};
}

DD add(DD a, DD b) {
  const DD s = two_sum(a.hi, b.hi);
  return renorm(s.hi, s.lo + a.lo + b.lo);
}

DD mul(DD a, DD b) {
  const double p = a.hi * b.hi;
  const double err = std::fma(a.hi, b.hi, -p);
  return renorm(p, err + a.hi * b.lo + a.lo * b.hi);
}

DD neg(DD a) { return {-a.hi, -a.lo}; }

}  // namespace

double max_abs_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.d11 - b.d11), std::abs(a.d12 - b.d12), std::abs(a.d21 - b.d21),
                   std::abs(a.d22 - b.d22)});
}

Mat2 PolarDecomp::a() const { return {r, z, z, (1.0 + z * z) / r}; }

Mat2 PolarDecomp::u() const {
  const double c = std::cos(vartheta);
  const double s = std::sin(vartheta);
  return {c, -s, s, c};
}

Mat2 jump_matrix(double v) { return {1.0, v, 0.0, 1.0}; }

Mat2 propagate_gap(const PotentialSampler& q, double e, double x_from, double x_to,
                   std::int64_t gap, const IntegratorConfig& cfg) {
  const double length = x_to - x_from;
  if (length == 0.0) return Mat2::identity();
  const auto n = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::abs(length) / cfg.h_max * (1.0 - 1e-12))));
  const double h = length / static_cast<double>(n);
  Mat2 y = Mat2::identity();
  for (std::int64_t k = 0; k < n; ++k) {
    const double x = x_from + static_cast<double>(k) * h;
    const double hk = (k + 1 == n) ? x_to - x : h;
    const double a0 = q(x, gap) - e;
    const double am = q(x + 0.5 * hk, gap) - e;
    const double a1 = q(x + hk, gap) - e;
    if (!std::isfinite(a0) || !std::isfinite(am) || !std::isfinite(a1)) {
      throw NumericError("non-finite potential near x = " + std::to_string(x));
    }
    const Mat2 k1 = apply_field(a0, y);
    const Mat2 k2 = apply_field(am, sum(y, scaled(k1, 0.5 * hk)));
    const Mat2 k3 = apply_field(am, sum(y, scaled(k2, 0.5 * hk)));
    const Mat2 k4 = apply_field(a1, sum(y, scaled(k3, hk)));
    y = sum(y, scaled(sum(sum(k1, scaled(k2, 2.0)), sum(scaled(k3, 2.0), k4)), hk / 6.0));
  }
  return y;
}

Mat2 exact_propagator_constant(double q0, double e, double length) {
  if (!(length >= 0.0)) throw PreconditionError("propagator length must be >= 0");
  const double k2 = e - q0;
  if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    const double c = std::cos(k * length);
    const double s = std::sin(k * length);
    return {c, -k * s, s / k, c};
  }
  if (k2 < 0.0) {
    const double kappa = std::sqrt(-k2);
    const double c = std::cosh(kappa * length);
    const double s = std::sinh(kappa * length);
    return {c, kappa * s, s / kappa, c};
  }
  return {1.0, 0.0, length, 1.0};
}

PolarDecomp polar_decompose(const Mat2& d) {
  if (!(std::abs(d.det() - 1.0) <= 1e-6)) {
    throw PreconditionError("polar_decompose needs det = 1 (got " + std::to_string(d.det()) + ")");
  }
  // A = sqrt(D Dᵀ) = (S + sqrt(det S) I) / sqrt(tr S + 2 sqrt(det S)) for 2x2 SPD S.
  const Mat2 s = d * d.transpose();
  const double root_det = std::sqrt(s.det());
  const double t = std::sqrt(s.trace() + 2.0 * root_det);
  const Mat2 a{(s.d11 + root_det) / t, s.d12 / t, s.d21 / t, (s.d22 + root_det) / t};
  const double det_a = a.det();
  const Mat2 a_inv{a.d22 / det_a, -a.d12 / det_a, -a.d21 / det_a, a.d11 / det_a};
  const Mat2 u = a_inv * d;

  PolarDecomp out;
  out.r = a.d11;
  out.z = 0.5 * (a.d12 + a.d21);
  out.vartheta = std::atan2(u.d21, u.d11);
  if (out.vartheta <= -std::numbers::pi) out.vartheta = std::numbers::pi;
  return out;
}

std::array<double, 3> g_map(const Mat2& d) {
  const PolarDecomp p = polar_decompose(d);
  return {p.r * std::cos(p.vartheta), p.r * std::sin(p.vartheta), p.z};
}

AccurateProduct accurate_product(const std::vector<Mat2>& factors) {
  DD m[2][2] = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}};
  for (const Mat2& f : factors) {
    const DD a[2][2] = {{{f.d11, 0.0}, {f.d12, 0.0}}, {{f.d21, 0.0}, {f.d22, 0.0}}};
    DD next[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) next[i][j] = add(mul(a[i][0], m[0][j]), mul(a[i][1], m[1][j]));
    }
    std::copy(&next[0][0], &next[0][0] + 4, &m[0][0]);
  }
  const DD det = add(mul(m[0][0], m[1][1]), neg(mul(m[0][1], m[1][0])));
  return {{m[0][0].hi, m[0][1].hi, m[1][0].hi, m[1][1].hi}, det.hi + det.lo};
}

double angle_distance(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

std::vector<double> matrix_path_angles(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n, const IntegratorConfig& cfg) {
  const PointSet& g = p.gamma();
  const auto& q = p.q();
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  Vec2 u{std::cos(xi), std::sin(xi)};
  for (std::int64_t k = 0; k < n; ++k) {
    const double a = g.x(k);
    const double b = g.x(k + 1);
    const Mat2 prop = q.constant_on_gaps() ? exact_propagator_constant(q.gap_value(k), e, b - a)
                                           : propagate_gap(q, e, a, b, k, cfg);
    u = jump_matrix(p.v()(k + 1)) * (prop * u);
    const double norm = std::hypot(u.d, u.psi);
    u = {u.d / norm, u.psi / norm};
    angles.push_back(std::atan2(u.psi, u.d));
  }
  return angles;
}

double matrix_vs_angle_check(const GeneralizedPotential& p, double e, double xi, std::int64_t n,
                             const IntegratorConfig& cfg) {
  if (n <= 0) return 0.0;
  const auto matrix = matrix_path_angles(p, e, xi, n, cfg);
  const auto traj = evolve(p, e, xi, n, cfg);
  double worst = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    worst = std::max(worst, angle_distance(matrix[static_cast<std::size_t>(k)],
                                           traj.lattice_angles[static_cast<std::size_t>(k + 1)].theta));
  }
  return worst;
}

}  // namespace rotnum
