#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rotnum/commands.hpp"
#include "rotnum/config.hpp"
#include "support.hpp"

using namespace rotnum;
using namespace rotnum::config;
using namespace rotnum::testing;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  return std::string(ROTNUM_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SequenceSpec random_sequence(std::mt19937_64& r) {
  switch (uniform_int(r, 0, 3)) {
    case 0: return ConstantSeqSpec{uniform(r, -5, 5)};
    case 1: return AlternatingSeqSpec{uniform(r, -5, 5)};
    case 2: return SineSeqSpec{uniform(r, -5, 5), uniform(r, 0, 3), uniform(r, -3, 3)};
    default: {
      TrigSeqSpec t{uniform(r, -1, 1), {}};
      for (auto k = uniform_int(r, 0, 3); k > 0; --k) {
        t.terms.push_back({uniform(r, -2, 2), uniform(r, 0, 3), uniform(r, -3, 3)});
      }
      return t;
    }
  }
}

RunConfig random_config(std::mt19937_64& r) {
  RunConfig c;
  if (uniform_int(r, 0, 1) == 0) {
    c.potential.lattice = PeriodicLatticeSpec{uniform(r, 0.5, 2)};
  } else {
    c.potential.lattice =
        SineLatticeSpec{uniform(r, -0.4, 0.4), uniform(r, 0.1, 2), uniform(r, -3, 3), 1.0};
  }
  switch (uniform_int(r, 0, 2)) {
    case 0: c.potential.q = ConstantQSpec{uniform(r, -3, 3)}; break;
    case 1: {
      TrigQSpec t{uniform(r, -1, 1), {}};
      for (auto k = uniform_int(r, 1, 3); k > 0; --k) {
        t.terms.push_back({uniform(r, -2, 2), uniform(r, 0, 3), uniform(r, -3, 3)});
      }
      c.potential.q = t;
      break;
    }
    default: c.potential.q = PiecewiseConstantQSpec{random_sequence(r)};
  }
  c.potential.v = random_sequence(r);
  if (uniform_int(r, 0, 1) == 0) {
    const double lo = uniform(r, -5, 5);
    EnergyRange er{lo, lo + uniform(r, 0.1, 10), std::nullopt};
    if (uniform_int(r, 0, 1) == 0) er.step = uniform(r, 0.001, 0.1);
    c.energies = er;
  } else {
    std::vector<double> es;
    for (auto k = uniform_int(r, 1, 6); k > 0; --k) es.push_back(uniform(r, -5, 20));
    c.energies = es;
  }
  if (uniform_int(r, 0, 1) == 0) c.integrator.h_max = uniform(r, 1e-3, 0.05);
  c.integrator.substep_angle_cap = uniform(r, 0.1, 1.5);
  c.horizon = 2 * uniform_int(r, 1, 50000);
  c.initial_angle = uniform(r, -7, 7);
  if (uniform_int(r, 0, 1) == 0) c.output.path = "out_" + std::to_string(uniform_int(r, 0, 99));
  c.output.format = uniform_int(r, 0, 1) == 0 ? "csv" : "json";
  c.plateaus = {uniform(r, 1e-5, 1e-1), uniform_int(r, 2, 20)};
  c.diagnostics = {uniform_int(r, 1, 5000), uniform_int(r, 1, 128), 2 * uniform_int(r, 1, 32)};
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  auto r = rng();
  for (int k = 0; k < 1000; ++k) {
    const RunConfig c = random_config(r);
    const json doc = to_json(c);
    REQUIRE(parse_config(doc) == c);
    REQUIRE(parse_config(json::parse(doc.dump())) == c);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(load_config(fixture("bad_lattice.json")), ConfigError);
  CHECK_THROWS_AS(load_config(fixture("does_not_exist.json")), ConfigError);
  CHECK_THROWS_AS(energies(load_config(fixture("empty_energies.json"))), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"energies": [1]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(
                      R"({"potential": {"lattice": {"type": "hex"}}, "energies": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(json::parse(
          R"({"potential": {"lattice": {"type": "periodic"}}, "energies": [1], "horizon": 7})")),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(json::parse(
          R"({"potential": {"lattice": {"type": "periodic"}}, "energies": {"min": 2, "max": 1}})")),
      ConfigError);
}

TEST_CASE("config defaults and classification") {
  const RunConfig free = load_config(fixture("free.json"));
  CHECK(free.horizon == 10000);
  CHECK(free.initial_angle == 0.0);
  const auto p = build_potential(free.potential);
  CHECK(build_integrator(free, p.gamma()).h_max == 0.02);
  CHECK(free_background(free.potential) == 0.0);

  const RunConfig kp = load_config(fixture("kronig_penney.json"));
  CHECK(energies(kp).size() == 601);
  REQUIRE(kronig_penney(kp.potential).has_value());
  CHECK(kronig_penney(kp.potential)->v == 2.0);
  CHECK(lattice_period(kp.potential) == 1);

  const RunConfig qp = load_config(fixture("quasi_periodic.json"));
  CHECK(!lattice_period(qp.potential).has_value());
  CHECK(!free_background(qp.potential).has_value());

  RunConfig ranged = kp;
  ranged.energies = EnergyRange{0.0, 1.0, std::nullopt};
  CHECK(energies(ranged).size() <= 10000);
  CHECK(energies(ranged).size() >= 9000);
}

TEST_CASE("csv and json formatting") {
  ScanRow a;
  a.energy = 0.1;
  a.rho = 1.0 / 3.0;
  a.error_est = 0.0;
  a.n_steps = 10;
  a.x_final = 10.0;
  const std::string csv = cli::format_csv({a});
  CHECK(csv ==
        "E,rho,error_est,n_steps,x_final\r\n"
        "0.10000000000000001,0.33333333333333331,0,10,10\r\n");
  ScanRow b = a;
  b.error = "bad \"value\", here";
  const std::string with_err = cli::format_csv({a, b});
  CHECK(with_err.rfind("E,rho,error_est,n_steps,x_final,error\r\n", 0) == 0);
  CHECK(with_err.find("\"bad \"\"value\"\", here\"") != std::string::npos);

  const json j = json::parse(cli::format_json({a}, {}));
  CHECK(j["rows"][0]["E"] == 0.1);
  CHECK(j["rows"][0]["rho"] == 1.0 / 3.0);
  CHECK(j["rows"][0].contains("error_est"));
  CHECK(j["rows"][0].contains("n_steps"));
  CHECK(j["rows"][0].contains("x_final"));
  CHECK(j["plateaus"].empty());
}

TEST_CASE("cmd_scan") {
  std::ostringstream out, err;
  SUBCASE("free potential") {
    cli::ScanOptions o;
    o.config_path = fixture("free.json");
    o.jobs = 2;
    REQUIRE(cli::cmd_scan(o, out, err) == cli::kExitOk);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "E,rho,error_est,n_steps,x_final\r");
    const double want[] = {0.0, 1.0, 2.0};
    for (double w : want) {
      std::getline(lines, line);
      const auto c1 = line.find(',');
      const double rho = std::stod(line.substr(c1 + 1));
      CHECK(std::abs(rho - w) < 1e-3);
    }
  }
  SUBCASE("empty energies is a usage error") {
    cli::ScanOptions o;
    o.config_path = fixture("empty_energies.json");
    CHECK(cli::cmd_scan(o, out, err) == cli::kExitUsage);
    CHECK(!err.str().empty());
  }
  SUBCASE("missing file is a usage error") {
    cli::ScanOptions o;
    o.config_path = fixture("nope.json");
    CHECK(cli::cmd_scan(o, out, err) == cli::kExitUsage);
  }
  SUBCASE("Kronig-Penney plateau summary and json output") {
    const auto path = std::filesystem::temp_directory_path() / "rotnum_kp_scan.json";
    cli::ScanOptions o;
    o.config_path = fixture("kronig_penney.json");
    o.out_path = path.string();
    o.format = "json";
    REQUIRE(cli::cmd_scan(o, out, err) == cli::kExitOk);
    const json doc = json::parse(slurp(path));
    CHECK(doc["rows"].size() == 601);
    bool at_pi = false;
    for (const auto& pl : doc["plateaus"]) {
      if (std::abs(pl["rho"].get<double>() - kPi) < 1e-2) at_pi = true;
    }
    CHECK(at_pi);
    CHECK(out.str().find("# plateau") == std::string::npos);
    std::filesystem::remove(path);
  }
  SUBCASE("Kronig-Penney csv with plateau summary on stderr") {
    cli::ScanOptions o;
    o.config_path = fixture("kronig_penney.json");
    REQUIRE(cli::cmd_scan(o, out, err) == cli::kExitOk);
    CHECK(out.str().find("# plateau") == std::string::npos);
    const auto pos = err.str().find("# plateau");
    REQUIRE(pos != std::string::npos);
    CHECK(err.str().find("rho=3.14", pos) != std::string::npos);
  }
}

TEST_CASE("cmd_scan output does not depend on the worker count") {
  const auto dir = std::filesystem::temp_directory_path();
  std::string files[2];
  int jobs[2] = {1, 4};
  for (int k = 0; k < 2; ++k) {
    const auto path = dir / ("rotnum_free_" + std::to_string(jobs[k]) + ".csv");
    cli::ScanOptions o;
    o.config_path = fixture("free.json");
    o.out_path = path.string();
    o.jobs = jobs[k];
    std::ostringstream out, err;
    REQUIRE(cli::cmd_scan(o, out, err) == cli::kExitOk);
    files[k] = slurp(path);
    std::filesystem::remove(path);
  }
  CHECK(!files[0].empty());
  CHECK(files[0] == files[1]);
}

TEST_CASE("cmd_apdiag") {
  std::ostringstream out, err;
  SUBCASE("periodic: every shift, window 1") {
    REQUIRE(cli::cmd_apdiag(fixture("free.json"), 0.01, 10, 50, out, err) == cli::kExitOk);
    CHECK(out.str().find("found_periods (21):") != std::string::npos);
    CHECK(out.str().find("relative_denseness_window: 1\n") != std::string::npos);
    CHECK(out.str().find("density(n=") != std::string::npos);
  }
  SUBCASE("Γ_0.5 reports 44") {
    REQUIRE(cli::cmd_apdiag(fixture("gamma_half.json"), 0.05, 200, std::nullopt, out, err) ==
            cli::kExitOk);
    CHECK(out.str().find(" 44 ") != std::string::npos);
  }
  SUBCASE("nothing found") {
    REQUIRE(cli::cmd_apdiag(fixture("gamma_half.json"), 1e-4, 3, 100, out, err) == cli::kExitOk);
    CHECK(out.str().find("found_periods (1): 0") != std::string::npos);
  }
  SUBCASE("eps must be positive") {
    CHECK(cli::cmd_apdiag(fixture("free.json"), 0.0, 10, 50, out, err) == cli::kExitUsage);
  }
}

TEST_CASE("cmd_oracle_compare") {
  std::ostringstream out, err;
  SUBCASE("free E=4") {
    CHECK(cli::cmd_oracle_compare(fixture("free_e4.json"), 1e-3, out, err) == cli::kExitOk);
    CHECK(out.str().find("PASS") != std::string::npos);
  }
  SUBCASE("Kronig-Penney band and gap") {
    CHECK(cli::cmd_oracle_compare(fixture("kronig_penney_points.json"), 1e-3, out, err) ==
          cli::kExitOk);
    CHECK(out.str().find("discriminant") != std::string::npos);
  }
  SUBCASE("piecewise-constant background uses the exact evolution") {
    CHECK(cli::cmd_oracle_compare(fixture("steps.json"), 1e-3, out, err) == cli::kExitOk);
  }
  SUBCASE("quasi-periodic falls back to internal consistency") {
    CHECK(cli::cmd_oracle_compare(fixture("quasi_periodic.json"), 1e-3, out, err) ==
          cli::kExitOk);
    CHECK(out.str().find("no closed-form oracle; internal consistency only") !=
          std::string::npos);
  }
  SUBCASE("sabotaged step size trips the tolerance") {
    CHECK(cli::cmd_oracle_compare(fixture("sabotaged.json"), 1e-3, out, err) != cli::kExitOk);
    CHECK(out.str().find("FAIL") != std::string::npos);
  }
}

TEST_CASE("cmd_decompose_check") {
  std::ostringstream out, err;
  SUBCASE("constants on Z") {
    const auto path = std::filesystem::temp_directory_path() / "rotnum_consts.json";
    std::ofstream(path) << R"({"potential": {"q": {"type": "constant", "value": 0.75},
      "v": {"type": "constant", "value": -2.0}, "lattice": {"type": "periodic"}},
      "energies": [1]})";
    REQUIRE(cli::cmd_decompose_check(path.string(), 100.0, out, err) == cli::kExitOk);
    CHECK(out.str().find("M(full): -1.25\n") != std::string::npos);
    std::filesystem::remove(path);
  }
  SUBCASE("Γ_0.5 with cos x") {
    REQUIRE(cli::cmd_decompose_check(fixture("decompose_cos.json"), 1e4, out, err) ==
            cli::kExitOk);
    const auto pos = out.str().find("difference: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(out.str().substr(pos + 12)) < 1e-3);
  }
  SUBCASE("span must be positive") {
    CHECK(cli::cmd_decompose_check(fixture("free.json"), 0.0, out, err) == cli::kExitUsage);
  }
}
