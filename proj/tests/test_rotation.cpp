#include <doctest.h>

#include <cmath>
#include <cstring>

#include "rotnum/errors.hpp"
#include "rotnum/rotation.hpp"
#include "support.hpp"

using namespace rotnum;
using namespace rotnum::testing;

namespace {

ScanRow row(double e, double rho) {
  ScanRow r;
  r.energy = e;
  r.rho = rho;
  r.n_steps = 10;
  return r;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("estimate_rho on the free operator") {
  const auto p = free_potential();
  const auto cfg = IntegratorConfig::for_lattice(p.gamma());
  const auto one = estimate_rho(p, 1.0, 0.0, 100, cfg);
  CHECK(one.rho == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(one.n_steps == 100);
  CHECK(one.x_final == 100.0);
  CHECK(std::abs(estimate_rho(p, 4.0, 0.0, 10000, cfg).rho - 2.0) < 1e-3);
  CHECK(std::abs(estimate_rho(p, 2.25, 0.0, 10000, cfg).rho - 1.5) < 1e-3);
  CHECK(std::abs(estimate_rho(p, -1.0, 0.0, 10000, cfg).rho) < 1e-3);
  CHECK_THROWS_AS(estimate_rho(p, 1.0, 0.0, 11, cfg), PreconditionError);
  CHECK_THROWS_AS(estimate_rho(p, 1.0, 0.0, 0, cfg), PreconditionError);
}

TEST_CASE("Birkhoff average matches the direct quotient") {
  const auto cfg1 = IntegratorConfig::for_lattice(periodic_lattice(1.0));
  CHECK(estimate_rho_birkhoff(free_potential(), 1.0, 0.0, 50, cfg1).rho ==
        doctest::Approx(1.0).epsilon(1e-12));

  const auto kp = kronig_penney(2.0);
  const double d = estimate_rho(kp, 2.0, 0.0, 1000, cfg1).rho;
  const double b = estimate_rho_birkhoff(kp, 2.0, 0.0, 1000, cfg1).rho;
  CHECK(std::abs(d - b) < 1e-6);

  const auto q = quasi_periodic();
  const auto cfg = IntegratorConfig::for_lattice(q.gamma());
  for (double e : {-0.5, 1.0, 4.0}) {
    const auto de = estimate_rho(q, e, 0.3, 400, cfg);
    const auto be = estimate_rho_birkhoff(q, e, 0.3, 400, cfg);
    CHECK(std::abs(de.rho - be.rho) < 1e-6);
    CHECK(de.x_final == be.x_final);
  }
}

TEST_CASE("rho is nonnegative and initial-angle independent") {
  auto r = rng();
  const auto q = quasi_periodic();
  const auto cfg = IntegratorConfig::for_lattice(q.gamma());
  for (int c = 0; c < 1000; ++c) {
    const double e = uniform(r, -4, 6);
    const double x1 = uniform(r, -10, 10), x2 = uniform(r, -10, 10);
    const auto a = estimate_rho(q, e, x1, 20, cfg);
    const auto b = estimate_rho(q, e, x2, 20, cfg);
    REQUIRE(a.rho >= -a.error_est - 2 * kPi / a.x_final);
    REQUIRE(std::abs(a.rho - b.rho) <= 2 * kPi / a.x_final + a.error_est + b.error_est);
  }
}

TEST_CASE("energy_grid") {
  CHECK(energy_grid(0.0, 1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(energy_grid(0.0, 12.0, 0.02).size() == 601);
  CHECK_THROWS_AS(energy_grid(1.0, 0.0, 0.1), PreconditionError);
  CHECK_THROWS_AS(energy_grid(0.0, 1.0, 0.0), PreconditionError);
}

TEST_CASE("scan") {
  const auto p = free_potential();
  const auto cfg = IntegratorConfig::for_lattice(p.gamma());
  SUBCASE("free grid matches sqrt(E)") {
    const auto rows = scan(p, std::vector<double>{4.0, 0.0, 1.0}, 0.0, 10000, cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].energy == 0.0);
    CHECK(rows[2].energy == 4.0);
    CHECK(std::abs(rows[0].rho) < 1e-3);
    CHECK(std::abs(rows[1].rho - 1.0) < 1e-3);
    CHECK(std::abs(rows[2].rho - 2.0) < 1e-3);
  }
  SUBCASE("single point") {
    CHECK(scan(p, std::vector<double>{2.0}, 0.0, 100, cfg).size() == 1);
  }
  SUBCASE("per-row failures are recorded") {
    const PotentialSampler nan_far(
        [](double x, std::int64_t) { return x > 20 ? std::nan("") : 0.0; }, 1.0);
    const GeneralizedPotential bad(nan_far, constant_sequence(0.0), periodic_lattice(1.0));
    const auto rows = scan(bad, std::vector<double>{1.0, 2.0}, 0.0, 100, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.has_value());
    CHECK(rows[1].error.has_value());
  }
}

TEST_CASE("parallel scan is bit-identical to the serial reference") {
  const auto q = quasi_periodic();
  const auto cfg = IntegratorConfig::for_lattice(q.gamma());
  const auto grid = energy_grid(-1.0, 6.0, 0.25);
  const auto par = scan(q, grid, 0.0, 200, cfg, 4);
  const auto ser = scan_serial(q, grid, 0.0, 200, cfg);
  const auto again = scan(q, grid, 0.0, 200, cfg, 3);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(same_bits(par[i].rho, ser[i].rho));
    CHECK(same_bits(par[i].error_est, ser[i].error_est));
    CHECK(same_bits(par[i].x_final, ser[i].x_final));
    CHECK(same_bits(again[i].rho, ser[i].rho));
  }
}

TEST_CASE("Kronig-Penney scan is monotone and continuous") {
  const auto kp = kronig_penney(2.0);
  const auto cfg = IntegratorConfig::for_lattice(kp.gamma());
  const auto rows = scan(kp, 0.0, 12.0, 0.1, 0.0, 2000, cfg);
  double slack = 0.0;
  double max_jump = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    slack = rows[i].error_est + rows[i - 1].error_est + 2 * kPi / rows[i].x_final;
    CHECK(rows[i].rho >= rows[i - 1].rho - slack);
    max_jump = std::max(max_jump, std::abs(rows[i].rho - rows[i - 1].rho));
  }
  const auto finer = scan(kp, 5.0, 6.0, 0.025, 0.0, 2000, cfg);
  double max_fine = 0.0;
  for (std::size_t i = 1; i < finer.size(); ++i) {
    max_fine = std::max(max_fine, std::abs(finer[i].rho - finer[i - 1].rho));
  }
  CHECK(max_jump < 0.5);
  CHECK(max_fine < max_jump);
}

TEST_CASE("detect_plateaus") {
  SUBCASE("strictly increasing rows") {
    std::vector<ScanRow> rows;
    for (int i = 0; i < 50; ++i) rows.push_back(row(i, 0.01 * i));
    CHECK(detect_plateaus(rows, 1e-3, 5).empty());
  }
  SUBCASE("one inserted flat run of width 10") {
    std::vector<ScanRow> rows;
    for (int i = 0; i < 20; ++i) rows.push_back(row(i, 0.01 * i));
    for (int i = 20; i < 30; ++i) rows.push_back(row(i, 0.5));
    for (int i = 30; i < 50; ++i) rows.push_back(row(i, 0.6 + 0.01 * i));
    const auto pl = detect_plateaus(rows, 1e-3, 5);
    REQUIRE(pl.size() == 1);
    CHECK(pl[0].e_lo == 20.0);
    CHECK(pl[0].e_hi == 29.0);
    CHECK(pl[0].width == 10);
    CHECK(pl[0].rho == 0.5);
  }
  SUBCASE("failed row splits a run") {
    std::vector<ScanRow> rows;
    for (int i = 0; i < 12; ++i) rows.push_back(row(i, 1.0));
    rows[6].error = "boom";
    const auto pl = detect_plateaus(rows, 1e-3, 5);
    REQUIRE(pl.size() == 2);
    CHECK(pl[0].width == 6);
    CHECK(pl[1].width == 5);
  }
  SUBCASE("too short") {
    std::vector<ScanRow> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(row(i, 1.0));
    CHECK(detect_plateaus(rows, 1e-3, 5).empty());
  }
}
