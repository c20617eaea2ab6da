#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rotnum/potential.hpp"
#include "rotnum/prufer.hpp"

namespace rotnum {

/// Column vector (ψ', ψ).
struct Vec2 {
  double d = 0.0;    // ψ'
  double psi = 0.0;  // ψ
};

/// Row-major 2x2 matrix acting on (ψ', ψ).
struct Mat2 {
  double d11 = 1.0, d12 = 0.0, d21 = 0.0, d22 = 1.0;

  static constexpr Mat2 identity() { return {}; }

  double det() const { return d11 * d22 - d12 * d21; }
  double trace() const { return d11 + d22; }
  Mat2 transpose() const { return {d11, d21, d12, d22}; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.d11 * b.d11 + a.d12 * b.d21, a.d11 * b.d12 + a.d12 * b.d22,
            a.d21 * b.d11 + a.d22 * b.d21, a.d21 * b.d12 + a.d22 * b.d22};
  }
  friend Vec2 operator*(const Mat2& a, const Vec2& u) {
    return {a.d11 * u.d + a.d12 * u.psi, a.d21 * u.d + a.d22 * u.psi};
  }
};

double max_abs_diff(const Mat2& a, const Mat2& b);

/// Polar form D = A(r, z) U(ϑ) with A = [[r, z], [z, (1+z²)/r]] and U the
/// rotation by ϑ in (-π, π].
struct PolarDecomp {
  double r = 1.0;
  double vartheta = 0.0;
  double z = 0.0;

  Mat2 a() const;
  Mat2 u() const;
  Mat2 reconstruct() const { return a() * u(); }
};

/// [[1, v], [0, 1]]
Mat2 jump_matrix(double v);

/// RK4 fundamental matrix of d/dx(ψ', ψ) = [[0, q - E], [1, 0]](ψ', ψ) over
/// [x_from, x_to] on gap `gap`, with Ψ(x_from) = I.
Mat2 propagate_gap(const PotentialSampler& q, double e, double x_from, double x_to,
                   std::int64_t gap, const IntegratorConfig& cfg);

/// Closed-form propagator for constant q = q0 over `length`.
Mat2 exact_propagator_constant(double q0, double e, double length);

/// Throws PreconditionError when |det d - 1| > 1e-6.
PolarDecomp polar_decompose(const Mat2& d);

/// (r cos ϑ, r sin ϑ, z)
std::array<double, 3> g_map(const Mat2& d);

/// Product factors.back() * ... * factors.front(), accumulated in
/// double-double arithmetic. `det` stays accurate when the entries are so
/// large that d11*d22 - d12*d21 cancels in double precision.
struct AccurateProduct {
  Mat2 value;
  double det = 1.0;
};
AccurateProduct accurate_product(const std::vector<Mat2>& factors);

/// Reduced angles atan2(ψ, ψ') at x_1..x_n of the vector started at
/// (cos Ξ, sin Ξ), carried by gap propagators and jump matrices. Gaps on which
/// q is constant use the closed-form propagator; others use propagate_gap.
std::vector<double> matrix_path_angles(const GeneralizedPotential& p, double e, double xi,
                                       std::int64_t n, const IntegratorConfig& cfg);

/// Max over x_1..x_n of the mod-2π distance between the matrix path and the
/// Prüfer lift from evolve().
double matrix_vs_angle_check(const GeneralizedPotential& p, double e, double xi, std::int64_t n,
                             const IntegratorConfig& cfg);

/// |a - b| measured on the circle R / 2πZ.
double angle_distance(double a, double b);

}  // namespace rotnum
